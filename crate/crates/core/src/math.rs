//! Scalar kernels shared by the array, waveform and analysis code.

use num_complex::Complex64;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Periodic sinc kernel `sin(πNx) / (N sin(πx))`.
///
/// Both sines are evaluated on arguments reduced to `[-1/2, 1/2]`, so the
/// removable singularities at integer `x` return the exact limit
/// `(-1)^((N-1)x)` and exact zeros of the numerator stay exact.
pub fn sa(n: usize, x: f64) -> f64 {
    debug_assert!(n >= 1);
    let k = x.round();
    let e = x - k;
    let sign_k = if parity(n as f64 - 1.0) && parity(k) { -1.0 } else { 1.0 };
    if e == 0.0 {
        return sign_k;
    }
    let nf = n as f64;
    sign_k * sin_pi(nf * e) / (nf * sin_pi(e))
}

fn parity(v: f64) -> bool {
    // true when v is an odd integer
    (v % 2.0).abs() == 1.0
}

/// `sin(πx)` with exact zeros at integers.
pub fn sin_pi(x: f64) -> f64 {
    let k = x.round();
    let r = x - k;
    let s = (core::f64::consts::PI * r).sin();
    if parity(k) {
        -s
    } else {
        s
    }
}

/// `e^{j2πx}`, reducing `x` modulo one before scaling so large phase counts
/// keep full precision.
pub fn turns(x: f64) -> Complex64 {
    let r = x - x.round();
    let phase = 2.0 * core::f64::consts::PI * r;
    Complex64::new(phase.cos(), phase.sin())
}

/// `e^{jφ}` for a phase in radians.
pub fn cis(phase: f64) -> Complex64 {
    Complex64::new(phase.cos(), phase.sin())
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg.to_radians()
}

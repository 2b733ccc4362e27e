//! OFDM waveform with per-antenna frequency offsets.
//!
//! The receiver keeps the `[0, T_us)` window of every symbol (the cyclic
//! prefix absorbs the propagation delay), so a delay shows up as a
//! per-subcarrier phase while a frequency offset leaks energy across
//! subcarriers. Two descriptions of the same link live here:
//!
//! * a sampled pipeline — [`modulate`] / [`synthesize_received`] /
//!   [`matched_filter_demod`] — that evaluates the continuous-time signals on
//!   the sampling lattice with exact (unquantised) delays, and
//! * the symbol-level model built from the [`IciCoefficients`] α and β.
//!
//! The two agree to rounding error.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::array::{check_plan_len, OffsetPlan};
use crate::channel::{subcarrier_channel, Path};
use crate::error::{check_dim, invalid, Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::math::{sa, turns, SPEED_OF_LIGHT};
use crate::rng::complex_gaussian;

/// Subcarrier layout of one OFDM symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfdmGrid {
    num_subcarriers: usize,
    subcarrier_spacing: f64,
    cp_length: usize,
}

impl OfdmGrid {
    pub fn new(num_subcarriers: usize, subcarrier_spacing: f64, cp_length: usize) -> Result<Self> {
        if num_subcarriers == 0 {
            return Err(invalid("num_subcarriers", "must be at least 1"));
        }
        if !(subcarrier_spacing > 0.0) || !subcarrier_spacing.is_finite() {
            return Err(invalid("subcarrier_spacing", "must be positive and finite"));
        }
        if cp_length >= num_subcarriers {
            return Err(invalid("cp_length", "must be shorter than the symbol (N_cp < N_us)"));
        }
        Ok(Self {
            num_subcarriers,
            subcarrier_spacing,
            cp_length,
        })
    }

    pub fn num_subcarriers(&self) -> usize {
        self.num_subcarriers
    }

    pub fn subcarrier_spacing(&self) -> f64 {
        self.subcarrier_spacing
    }

    pub fn cp_length(&self) -> usize {
        self.cp_length
    }

    /// `T_us = 1/Δf`.
    pub fn symbol_duration(&self) -> f64 {
        1.0 / self.subcarrier_spacing
    }

    /// `T_cp = N_cp T_us / N_us`.
    pub fn cp_duration(&self) -> f64 {
        self.cp_length as f64 * self.symbol_duration() / self.num_subcarriers as f64
    }

    pub fn sample_interval(&self) -> f64 {
        self.symbol_duration() / self.num_subcarriers as f64
    }

    pub fn sampling_rate(&self) -> f64 {
        self.num_subcarriers as f64 * self.subcarrier_spacing
    }

    /// Largest distance whose delay the cyclic prefix still covers, `c T_cp`.
    pub fn cp_coverage_distance(&self) -> f64 {
        SPEED_OF_LIGHT * self.cp_duration()
    }

    /// Amplitude of the unit-energy rectangular pulse, `1/√T_us`.
    pub fn pulse_amplitude(&self) -> f64 {
        1.0 / self.symbol_duration().sqrt()
    }
}

/// One OFDM symbol per antenna: entry `(ℓ, m)` is `x_{ℓ,m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolFrame {
    pub symbols: CMatrix,
}

impl SymbolFrame {
    pub fn new(symbols: CMatrix) -> Self {
        Self { symbols }
    }

    pub fn zeros(num_subcarriers: usize, num_antennas: usize) -> Self {
        Self::new(CMatrix::zeros(num_subcarriers, num_antennas))
    }

    /// Uniform draws from a square `order`-QAM constellation scaled to unit
    /// average power. `order` must be an even power of two (4, 16, 64, …).
    pub fn random_qam<R: Rng + ?Sized>(
        num_subcarriers: usize,
        num_antennas: usize,
        order: u32,
        rng: &mut R,
    ) -> Result<Self> {
        let side = (order as f64).sqrt() as u32;
        if order < 4 || side * side != order || !side.is_power_of_two() {
            return Err(invalid("order", "QAM order must be an even power of two"));
        }
        // levels ±1, ±3, …; mean power of one axis is (side² − 1)/3
        let norm = (2.0 * ((side * side - 1) as f64) / 3.0).sqrt();
        let level = |k: u32| (2.0 * k as f64 - (side - 1) as f64) / norm;
        let symbols = CMatrix::from_fn(num_subcarriers, num_antennas, |_, _| {
            Complex64::new(level(rng.random_range(0..side)), level(rng.random_range(0..side)))
        });
        Ok(Self::new(symbols))
    }

    pub fn num_subcarriers(&self) -> usize {
        self.symbols.nrows()
    }

    pub fn num_antennas(&self) -> usize {
        self.symbols.ncols()
    }

    /// `Σ |x|²`.
    pub fn energy(&self) -> f64 {
        self.symbols.iter().map(|z| z.norm_sqr()).sum()
    }

    fn check(&self, grid: &OfdmGrid, plan: &OffsetPlan) -> Result<()> {
        check_dim("frame subcarriers", grid.num_subcarriers(), self.num_subcarriers())?;
        check_plan_len("frame antennas", plan, self.num_antennas())
    }
}

/// ICI coefficients of every antenna.
///
/// `β_{ℓ,ℓ',m}` depends on `ℓ − ℓ'` only, so each antenna stores the
/// `2N_us − 1` distinct values; `α_m = β_{ℓ,ℓ,m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IciCoefficients {
    num_subcarriers: usize,
    pub alpha: Vec<Complex64>,
    /// `toeplitz[m][d + N_us − 1] = β` for `ℓ − ℓ' = d`.
    toeplitz: Vec<Vec<Complex64>>,
}

impl IciCoefficients {
    /// `β_{ℓ,ℓ',m}`.
    pub fn beta(&self, l: usize, l_prime: usize, m: usize) -> Complex64 {
        self.toeplitz[m][l + self.num_subcarriers - 1 - l_prime]
    }

    pub fn num_antennas(&self) -> usize {
        self.alpha.len()
    }

    /// `max_m |α_m − 1|`.
    pub fn max_alpha_deviation(&self) -> f64 {
        self.alpha.iter().map(|a| (a - 1.0).norm()).fold(0.0, f64::max)
    }

    /// Largest leakage coefficient `max |β_{ℓ,ℓ',m}|` over `ℓ ≠ ℓ'`.
    pub fn max_leakage(&self) -> f64 {
        let centre = self.num_subcarriers - 1;
        self.toeplitz
            .iter()
            .flat_map(|row| row.iter().enumerate().filter(move |(i, _)| *i != centre))
            .map(|(_, b)| b.norm())
            .fold(0.0, f64::max)
    }

    /// `F Ξ_m Fᴴ` as a dense matrix; entry `(ℓ', ℓ)` is `β_{ℓ,ℓ',m}`.
    pub fn leakage_matrix(&self, m: usize) -> CMatrix {
        let n = self.num_subcarriers;
        CMatrix::from_fn(n, n, |lp, l| self.beta(l, lp, m))
    }
}

/// `β` for a subcarrier distance `d = ℓ − ℓ'` and offset ratio `ρ`:
/// `Sa_N((d+ρ)/N) e^{jπ(d+ρ)(N−1)/N}`.
fn leakage(n: usize, d: f64, rho: f64) -> Complex64 {
    let x = (d + rho) / n as f64;
    turns(x * (n as f64 - 1.0) / 2.0) * sa(n, x)
}

pub fn ici_coefficients(plan: &OffsetPlan, grid: &OfdmGrid) -> IciCoefficients {
    let n = grid.num_subcarriers();
    let rhos = plan.ratios(grid.subcarrier_spacing());
    let toeplitz: Vec<Vec<Complex64>> = rhos
        .iter()
        .map(|&rho| {
            (0..2 * n - 1)
                .map(|k| leakage(n, k as f64 - (n - 1) as f64, rho))
                .collect()
        })
        .collect();
    let alpha = toeplitz.iter().map(|row| row[n - 1]).collect();
    IciCoefficients {
        num_subcarriers: n,
        alpha,
        toeplitz,
    }
}

/// Transmitted baseband signal of antenna `m` at time `t` (seconds,
/// relative to the start of the retained window): the OFDM symbol shifted
/// by the antenna's offset, `g Σ_ℓ x_{ℓ,m} e^{j2π(ℓΔf + δf_m)t}` on
/// `[−T_cp, T_us)` and zero elsewhere.
pub fn transmit_sample(frame: &SymbolFrame, grid: &OfdmGrid, plan: &OffsetPlan, m: usize, t: f64) -> Complex64 {
    if t < -grid.cp_duration() || t >= grid.symbol_duration() {
        return Complex64::new(0.0, 0.0);
    }
    let df = grid.subcarrier_spacing();
    let offset_turns = plan.offsets[m] * t;
    let x = frame.symbols.column(m);
    let sum: Complex64 = x
        .iter()
        .enumerate()
        .filter(|(_, s)| s.re != 0.0 || s.im != 0.0)
        .map(|(l, s)| s * turns(l as f64 * df * t + offset_turns))
        .sum();
    sum * grid.pulse_amplitude()
}

/// Transmit samples on the lattice `t_i = i T_us/N_us`, `i = −N_cp … N_us−1`.
/// Row `i + N_cp` holds time `t_i`; one column per antenna.
pub fn modulate(frame: &SymbolFrame, grid: &OfdmGrid, plan: &OffsetPlan) -> Result<CMatrix> {
    frame.check(grid, plan)?;
    let n = grid.num_subcarriers();
    let ncp = grid.cp_length();
    let g = grid.pulse_amplitude();
    let rhos = plan.ratios(grid.subcarrier_spacing());
    Ok(CMatrix::from_fn(ncp + n, plan.num_elements(), |row, m| {
        // lattice phases in exact fractions of the symbol
        let i = row as f64 - ncp as f64;
        let sum: Complex64 = frame
            .symbols
            .column(m)
            .iter()
            .enumerate()
            .map(|(l, s)| s * turns((l as f64 + rhos[m]) * i / n as f64))
            .sum();
        sum * g
    }))
}

/// Received samples at UE antenna `rx` (of `num_rx`) on `[0, T_us)`.
///
/// Every path contributes the transmit signals delayed by `R/c`, weighted
/// by the element phases `e^{jπm sinθ}/√M`, the complex gain and the
/// receive steering entry. Delays are applied exactly, not rounded to
/// samples.
pub fn synthesize_received(
    frame: &SymbolFrame,
    grid: &OfdmGrid,
    plan: &OffsetPlan,
    paths: &[Path],
    rx: usize,
    num_rx: usize,
) -> Result<CVector> {
    frame.check(grid, plan)?;
    if rx >= num_rx {
        return Err(invalid("rx", "receive antenna index out of range"));
    }
    check_cp_coverage(grid, paths)?;
    let n = grid.num_subcarriers();
    let m_count = plan.num_elements();
    let tx_scale = 1.0 / (m_count as f64).sqrt();
    let rx_scale = 1.0 / (num_rx as f64).sqrt();
    let dt = grid.sample_interval();
    let mut out = CVector::zeros(n);
    for path in paths {
        if path.gain == Complex64::new(0.0, 0.0) {
            continue;
        }
        let tau = path.distance / SPEED_OF_LIGHT;
        let b = turns(rx as f64 * path.aoa.sin() / 2.0) * rx_scale;
        let weights: Vec<Complex64> = (0..m_count)
            .map(|m| path.gain * b * turns(m as f64 * path.aod.sin() / 2.0) * tx_scale)
            .collect();
        for i in 0..n {
            let t = i as f64 * dt - tau;
            out[i] += weights
                .iter()
                .enumerate()
                .map(|(m, w)| w * transmit_sample(frame, grid, plan, m, t))
                .sum::<Complex64>();
        }
    }
    Ok(out)
}

/// Rejects any path whose delay is longer than the cyclic prefix.
pub fn check_cp_coverage(grid: &OfdmGrid, paths: &[Path]) -> Result<()> {
    let cp = grid.cp_duration();
    for path in paths {
        let delay = path.distance / SPEED_OF_LIGHT;
        if !(delay <= cp) || path.distance < 0.0 {
            return Err(Error::CpCoverage { delay_s: delay, cp_s: cp });
        }
    }
    Ok(())
}

/// Bank of `N_us` matched filters realised as the lattice sum
/// `y_{ℓ'} = (√T_us/N_us) Σ_i r_i e^{−j2πℓ'i/N_us}`.
pub fn matched_filter_demod(samples: &CVector, grid: &OfdmGrid) -> Result<CVector> {
    let n = grid.num_subcarriers();
    check_dim("matched_filter_demod", n, samples.len())?;
    let scale = grid.symbol_duration().sqrt() / n as f64;
    Ok(CVector::from_fn(n, |lp, _| {
        samples
            .iter()
            .enumerate()
            .map(|(i, r)| r * turns(-(((lp * i) % n) as f64) / n as f64))
            .sum::<Complex64>()
            * scale
    }))
}

/// Symbol-level model of the matched-filter output at UE antenna `rx`:
/// `y_{ℓ'} = Σ_m α_m h_{m,ℓ'} x_{ℓ',m} + Σ_m Σ_{ℓ≠ℓ'} β_{ℓ,ℓ',m} h_{m,ℓ} x_{ℓ,m}`.
pub fn analytic_received(
    frame: &SymbolFrame,
    grid: &OfdmGrid,
    plan: &OffsetPlan,
    paths: &[Path],
    rx: usize,
    num_rx: usize,
) -> Result<CVector> {
    frame.check(grid, plan)?;
    let ici = ici_coefficients(plan, grid);
    // h_{m,ℓ}: rows subcarriers, columns antennas
    let h = subcarrier_channel(paths, plan, grid, rx, num_rx)?;
    let n = grid.num_subcarriers();
    let hx = h.component_mul(&frame.symbols);
    Ok(CVector::from_fn(n, |lp, _| {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..plan.num_elements() {
            acc += ici.alpha[m] * hx[(lp, m)];
            for l in (0..n).filter(|&l| l != lp) {
                acc += ici.beta(l, lp, m) * hx[(l, m)];
            }
        }
        acc
    }))
}

/// Relative deviation of `F Ξ Fᴴ` from the identity, aggregated over
/// antennas: `sqrt(Σ_m ‖F Ξ_m Fᴴ − I‖_F² / (M N_us))`.
pub fn slight_offset_error(plan: &OffsetPlan, grid: &OfdmGrid) -> f64 {
    let ici = ici_coefficients(plan, grid);
    let n = grid.num_subcarriers();
    let m = ici.num_antennas();
    let mut total = 0.0;
    for row in &ici.toeplitz {
        for (k, b) in row.iter().enumerate() {
            let d = k as i64 - (n as i64 - 1);
            let multiplicity = (n as i64 - d.abs()) as f64;
            let dev = if d == 0 { b - 1.0 } else { *b };
            total += multiplicity * dev.norm_sqr();
        }
    }
    (total / (m * n) as f64).sqrt()
}

/// Adds circularly-symmetric Gaussian noise of variance `variance` to every
/// received symbol.
pub fn add_noise<R: Rng + ?Sized>(symbols: &mut CVector, variance: f64, rng: &mut R) {
    for y in symbols.iter_mut() {
        *y += complex_gaussian(rng, variance);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{generate_offsets, OffsetScheme, OffsetSpacing};
    use crate::rng::rng_from_seed;

    fn grid(n: usize) -> OfdmGrid {
        OfdmGrid::new(n, 15e3, n / 4).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_timing() {
        let g = OfdmGrid::new(512, 15e3, 128).unwrap();
        assert!((g.symbol_duration() - 1.0 / 15e3).abs() < 1e-18);
        assert!((g.cp_duration() - g.symbol_duration() / 4.0).abs() < 1e-18);
        assert!((g.sampling_rate() - 7.68e6).abs() < 1e-6);
        // 1/4 CP at 15 kHz covers about 5 km
        assert!((g.cp_coverage_distance() - SPEED_OF_LIGHT / 60e3).abs() < 1e-6);
        assert!(OfdmGrid::new(8, 15e3, 8).is_err());
    }

    #[test]
    fn qam_is_unit_power() {
        let mut rng = rng_from_seed(3);
        for order in [4, 16, 64] {
            let f = SymbolFrame::random_qam(512, 64, order, &mut rng).unwrap();
            let p = f.energy() / (512.0 * 64.0);
            assert!((p - 1.0).abs() < 0.03, "order {order}: {p}");
        }
        assert!(SymbolFrame::random_qam(4, 4, 8, &mut rng).is_err());
    }

    #[test]
    fn dc_subcarrier_is_constant() {
        let g = grid(8);
        let mut frame = SymbolFrame::zeros(8, 2);
        frame.symbols[(0, 0)] = c(0.5, -1.0);
        frame.symbols[(0, 1)] = c(2.0, 0.0);
        let s = modulate(&frame, &g, &OffsetPlan::zero(2)).unwrap();
        assert_eq!(s.nrows(), 10);
        for r in 0..10 {
            for m in 0..2 {
                assert!((s[(r, m)] - frame.symbols[(0, m)] * g.pulse_amplitude()).norm() < 1e-12);
            }
        }
        let zero = modulate(&SymbolFrame::zeros(8, 2), &g, &OffsetPlan::zero(2)).unwrap();
        assert!(zero.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn first_subcarrier_rotates_once_per_symbol() {
        let g = grid(8);
        let mut frame = SymbolFrame::zeros(8, 1);
        frame.symbols[(1, 0)] = c(1.0, 0.0);
        let s = modulate(&frame, &g, &OffsetPlan::zero(1)).unwrap();
        for i in -2i32..8 {
            let expected = crate::math::cis(2.0 * core::f64::consts::PI * i as f64 / 8.0) * g.pulse_amplitude();
            assert!((s[((i + 2) as usize, 0)] - expected).norm() < 1e-10);
        }
        assert!(modulate(&SymbolFrame::zeros(4, 1), &g, &OffsetPlan::zero(1)).is_err());
    }

    #[test]
    fn demod_inverts_modulation() {
        let g = grid(32);
        let mut rng = rng_from_seed(8);
        let frame = SymbolFrame::random_qam(32, 1, 16, &mut rng).unwrap();
        let s = modulate(&frame, &g, &OffsetPlan::zero(1)).unwrap();
        let body = CVector::from_iterator(32, s.column(0).iter().skip(8).copied());
        let y = matched_filter_demod(&body, &g).unwrap();
        for l in 0..32 {
            assert!((y[l] - frame.symbols[(l, 0)]).norm() < 1e-12);
        }
        assert!(matched_filter_demod(&CVector::zeros(31), &g).is_err());
        assert!(matched_filter_demod(&CVector::zeros(32), &g).unwrap().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn undelayed_path_reproduces_transmit_window() {
        let g = grid(16);
        let mut rng = rng_from_seed(2);
        let frame = SymbolFrame::random_qam(16, 1, 4, &mut rng).unwrap();
        let plan = OffsetPlan::zero(1);
        let paths = [Path::new(c(1.0, 0.0), 0.0, 0.0, 0.0)];
        let r = synthesize_received(&frame, &g, &plan, &paths, 0, 1).unwrap();
        let s = modulate(&frame, &g, &plan).unwrap();
        for i in 0..16 {
            assert!((r[i] - s[(i + 4, 0)]).norm() < 1e-9);
        }
        let silent = [Path::new(c(0.0, 0.0), 100.0, 0.1, 0.2)];
        assert!(synthesize_received(&frame, &g, &plan, &silent, 0, 1).unwrap().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn delay_appears_as_subcarrier_phase() {
        let g = OfdmGrid::new(64, 15e3, 16).unwrap();
        let mut rng = rng_from_seed(4);
        let frame = SymbolFrame::random_qam(64, 1, 16, &mut rng).unwrap();
        let paths = [Path::new(c(1.0, 0.0), 1500.0, 0.0, 0.0)];
        let r = synthesize_received(&frame, &g, &OffsetPlan::zero(1), &paths, 0, 1).unwrap();
        let y = matched_filter_demod(&r, &g).unwrap();
        for l in 0..64 {
            let phi = turns(-(l as f64) * 15e3 * 1500.0 / SPEED_OF_LIGHT);
            assert!((y[l] - phi * frame.symbols[(l, 0)]).norm() < 1e-9);
        }
    }

    #[test]
    fn delay_beyond_cp_rejected() {
        let g = OfdmGrid::new(64, 15e3, 16).unwrap();
        let frame = SymbolFrame::zeros(64, 1);
        let far = g.cp_coverage_distance() * 1.001;
        let paths = [Path::new(c(1.0, 0.0), far, 0.0, 0.0)];
        assert!(matches!(
            synthesize_received(&frame, &g, &OffsetPlan::zero(1), &paths, 0, 1),
            Err(Error::CpCoverage { .. })
        ));
    }

    #[test]
    fn ici_coefficient_limits() {
        let g = grid(64);
        let ici = ici_coefficients(&OffsetPlan::zero(3), &g);
        assert!(ici.alpha.iter().all(|a| (a - 1.0).norm() < 1e-15));
        assert!(ici.max_leakage() < 1e-15);

        let plan = generate_offsets(OffsetScheme::UniformIncreasing, 3, OffsetSpacing::Increment(15e3), 0).unwrap();
        let ici = ici_coefficients(&plan, &g);
        assert!(ici.alpha[1].norm() < 1e-15 && ici.alpha[2].norm() < 1e-15);
        // an integer offset moves subcarrier ℓ onto ℓ + r
        assert!((ici.beta(3, 4, 1).norm() - 1.0).abs() < 1e-12);
        assert!((ici.beta(3, 5, 2).norm() - 1.0).abs() < 1e-12);

        let slight = generate_offsets(OffsetScheme::UniformIncreasing, 2, OffsetSpacing::Increment(0.02 * 15e3), 0).unwrap();
        let ici = ici_coefficients(&slight, &grid(512));
        let a = ici.alpha[1].norm();
        assert!((0.999..=1.0).contains(&a), "{a}");
    }

    #[test]
    fn leakage_matrix_is_f_xi_fh() {
        let n = 16;
        let g = grid(n);
        let plan = generate_offsets(OffsetScheme::RandomPermutation, 3, OffsetSpacing::Increment(0.3 * 15e3), 5).unwrap();
        let ici = ici_coefficients(&plan, &g);
        let f = crate::linalg::unitary_dft(n);
        for m in 0..3 {
            let rho = plan.offsets[m] / 15e3;
            let xi = CMatrix::from_diagonal(&CVector::from_fn(n, |i, _| turns(rho * i as f64 / n as f64)));
            let dense = &f * xi * f.adjoint();
            assert!((dense - ici.leakage_matrix(m)).norm() < 1e-12);
        }
    }

    #[test]
    fn slight_offset_error_ordering() {
        let g = grid(512);
        assert_eq!(slight_offset_error(&OffsetPlan::zero(8), &g), 0.0);
        let err = |rho: f64| {
            let spacing = OffsetSpacing::MaxRatio {
                rho_max: rho,
                subcarrier_spacing: 15e3,
            };
            let plan = generate_offsets(OffsetScheme::RandomPermutation, 16, spacing, 7).unwrap();
            slight_offset_error(&plan, &g)
        };
        let (a, b, c) = (err(1.0 / 50.0), err(1.0 / 20.0), err(1.0 / 10.0));
        assert!(a > 0.0 && a < b && b < c, "{a} {b} {c}");
    }

    #[test]
    fn slight_offset_error_matches_dense() {
        let n = 8;
        let g = grid(n);
        let plan = generate_offsets(OffsetScheme::RandomPermutation, 4, OffsetSpacing::Increment(0.4 * 15e3), 1).unwrap();
        let ici = ici_coefficients(&plan, &g);
        let id = CMatrix::identity(n, n);
        let total: f64 = (0..4).map(|m| (ici.leakage_matrix(m) - &id).norm_squared()).sum();
        let dense = (total / (4 * n) as f64).sqrt();
        assert!((dense - slight_offset_error(&plan, &g)).abs() < 1e-13);
    }

    #[test]
    fn single_antenna_energy_is_preserved() {
        let g = grid(64);
        let mut rng = rng_from_seed(12);
        let frame = SymbolFrame::random_qam(64, 1, 16, &mut rng).unwrap();
        let plan = generate_offsets(OffsetScheme::UniformIncreasing, 1, OffsetSpacing::Increment(0.0), 0).unwrap();
        let gain = c(0.6, -0.3);
        let paths = [Path::new(gain, 2100.0, 0.2, -0.4)];
        let r = synthesize_received(&frame, &g, &plan, &paths, 0, 1).unwrap();
        let energy = r.norm_squared() * g.sample_interval();
        assert!((energy - gain.norm_sqr() * frame.energy()).abs() < 1e-9 * frame.energy());
    }

    #[test]
    fn noise_has_requested_variance() {
        let mut rng = rng_from_seed(21);
        let mut y = CVector::zeros(20_000);
        add_noise(&mut y, 0.25, &mut rng);
        let v = y.norm_squared() / 20_000.0;
        assert!((v - 0.25).abs() < 0.01, "{v}");
    }
}

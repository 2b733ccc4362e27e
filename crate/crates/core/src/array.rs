//! Frequency-offset plans, steering vectors and beam correlation.
//!
//! The transmit array is a uniform linear FDA with half-wavelength spacing in
//! which element `m` mixes an extra offset `δf_m` onto its carrier. Its
//! steering vector depends on distance as well as angle; with all offsets set
//! to zero it collapses to the ordinary phased-array vector.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;

use crate::error::{check_dim, invalid, Error, Result};
use crate::linalg::{inner, CVector};
use crate::math::{sa, turns, SPEED_OF_LIGHT};
use crate::rng::rng_from_seed;

/// Uniform linear array description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    num_elements: usize,
    carrier_freq: f64,
    element_spacing: f64,
}

impl ArrayGeometry {
    /// Half-wavelength array, `d = c / (2 f_c)`.
    pub fn half_wavelength(num_elements: usize, carrier_freq: f64) -> Result<Self> {
        if num_elements == 0 {
            return Err(invalid("num_elements", "must be at least 1"));
        }
        if !(carrier_freq > 0.0) || !carrier_freq.is_finite() {
            return Err(invalid("carrier_freq", "must be positive and finite"));
        }
        Ok(Self {
            num_elements,
            carrier_freq,
            element_spacing: SPEED_OF_LIGHT / (2.0 * carrier_freq),
        })
    }

    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    pub fn carrier_freq(&self) -> f64 {
        self.carrier_freq
    }

    pub fn element_spacing(&self) -> f64 {
        self.element_spacing
    }
}

/// How the per-element offsets are laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OffsetScheme {
    /// All offsets zero: the phased-array baseline.
    Zero,
    /// `δf_m = m δf`.
    UniformIncreasing,
    /// `δf_m = (M−1) ln(m+1) δf / ln M`, same maximum as the uniform plan.
    Logarithmic,
    /// `δf_m = z_m δf` with `z` a random permutation of `0..M`.
    RandomPermutation,
    /// `δf_m = z_m δf` with `z` a random permutation of `−(M−1)/2 ..= (M−1)/2`.
    SymmetricRandomPermutation,
}

/// The basic increment cell, given directly or through the maximum offset
/// ratio `ρ_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OffsetSpacing {
    /// `δf` in Hz.
    Increment(f64),
    /// `ρ_max` relative to the subcarrier spacing `Δf` (Hz).
    MaxRatio { rho_max: f64, subcarrier_spacing: f64 },
}

/// Per-element frequency offsets and the recipe that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetPlan {
    pub scheme: OffsetScheme,
    /// Basic increment cell `δf` in Hz.
    pub delta_f: f64,
    /// `ρ_max` when the plan was specified through it.
    pub rho_max: Option<f64>,
    /// `δf_m` in Hz.
    pub offsets: Vec<f64>,
    /// Multipliers `z_m` with `δf_m = z_m δf`. Half-integers for the
    /// symmetric scheme with even `M`.
    pub permutation: Vec<f64>,
    pub seed: u64,
}

/// Builds an offset plan. Randomised schemes shuffle with a seeded
/// Fisher–Yates pass, so the same arguments always give the same plan.
pub fn generate_offsets(
    scheme: OffsetScheme,
    num_elements: usize,
    spacing: OffsetSpacing,
    seed: u64,
) -> Result<OffsetPlan> {
    let m = num_elements;
    if m == 0 {
        return Err(invalid("num_elements", "must be at least 1"));
    }
    let needs_span = !matches!(scheme, OffsetScheme::Zero | OffsetScheme::UniformIncreasing);
    if m == 1 && (needs_span || matches!(spacing, OffsetSpacing::MaxRatio { .. })) {
        return Err(invalid(
            "num_elements",
            "this scheme needs M >= 2 (increment cell divides by M-1 or ln M)",
        ));
    }
    let (delta_f, rho_max) = match spacing {
        OffsetSpacing::Increment(df) => {
            if !df.is_finite() || df < 0.0 {
                return Err(invalid("delta_f", "must be finite and non-negative"));
            }
            (df, None)
        }
        OffsetSpacing::MaxRatio {
            rho_max,
            subcarrier_spacing,
        } => {
            if !rho_max.is_finite() || rho_max < 0.0 {
                return Err(invalid("rho_max", "must be finite and non-negative"));
            }
            if !(subcarrier_spacing > 0.0) {
                return Err(invalid("subcarrier_spacing", "must be positive"));
            }
            let span = (m - 1) as f64;
            let df = match scheme {
                OffsetScheme::SymmetricRandomPermutation => 2.0 * rho_max * subcarrier_spacing / span,
                _ => rho_max * subcarrier_spacing / span,
            };
            (df, Some(rho_max))
        }
    };

    let mf = m as f64;
    let permutation: Vec<f64> = match scheme {
        OffsetScheme::Zero => alloc::vec![0.0; m],
        OffsetScheme::UniformIncreasing => (0..m).map(|i| i as f64).collect(),
        OffsetScheme::Logarithmic => (0..m)
            .map(|i| (mf - 1.0) * ((i + 1) as f64).ln() / mf.ln())
            .collect(),
        OffsetScheme::RandomPermutation => {
            let mut z: Vec<f64> = (0..m).map(|i| i as f64).collect();
            z.shuffle(&mut rng_from_seed(seed));
            z
        }
        OffsetScheme::SymmetricRandomPermutation => {
            let half = (mf - 1.0) / 2.0;
            let mut z: Vec<f64> = (0..m).map(|i| i as f64 - half).collect();
            z.shuffle(&mut rng_from_seed(seed));
            z
        }
    };
    let delta_f = if scheme == OffsetScheme::Zero { 0.0 } else { delta_f };
    let offsets = permutation.iter().map(|z| z * delta_f).collect();
    Ok(OffsetPlan {
        scheme,
        delta_f,
        rho_max,
        offsets,
        permutation,
        seed,
    })
}

impl OffsetPlan {
    /// The phased-array plan with `M` zero offsets.
    pub fn zero(num_elements: usize) -> Self {
        Self {
            scheme: OffsetScheme::Zero,
            delta_f: 0.0,
            rho_max: None,
            offsets: alloc::vec![0.0; num_elements],
            permutation: alloc::vec![0.0; num_elements],
            seed: 0,
        }
    }

    pub fn num_elements(&self) -> usize {
        self.offsets.len()
    }

    /// `ρ_m = δf_m / Δf`.
    pub fn ratios(&self, subcarrier_spacing: f64) -> Vec<f64> {
        self.offsets.iter().map(|f| f / subcarrier_spacing).collect()
    }

    /// `max |ρ_m|`.
    pub fn max_ratio(&self, subcarrier_spacing: f64) -> f64 {
        self.offsets
            .iter()
            .fold(0.0f64, |acc, f| acc.max(f.abs()))
            / subcarrier_spacing
    }

    /// Period of the beampattern along the distance axis, `c / δf`.
    /// Infinite for the zero plan.
    pub fn distance_period(&self) -> f64 {
        if self.delta_f == 0.0 {
            f64::INFINITY
        } else {
            SPEED_OF_LIGHT / self.delta_f
        }
    }

    /// Nominal mainlobe width along distance, `c / ((M−1) δf)`.
    pub fn distance_beamwidth(&self) -> f64 {
        let span = self.num_elements().saturating_sub(1) as f64;
        if self.delta_f == 0.0 || span == 0.0 {
            f64::INFINITY
        } else {
            SPEED_OF_LIGHT / (span * self.delta_f)
        }
    }
}

/// Far-field location of a UE or scatterer relative to the reference element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarLocation {
    /// Distance in meters.
    pub distance: f64,
    /// Angle in radians from broadside.
    pub angle: f64,
}

impl PolarLocation {
    pub fn new(distance: f64, angle: f64) -> Self {
        Self { distance, angle }
    }
}

/// Time-varying FDA steering vector,
/// `a_m = e^{j2π(m sinθ/2 + δf_m (t − R/c))} / √M`.
pub fn steering_tx(plan: &OffsetPlan, loc: PolarLocation, t: f64) -> CVector {
    let m = plan.num_elements();
    let scale = 1.0 / (m as f64).sqrt();
    let half_sin = loc.angle.sin() / 2.0;
    let delay = t - loc.distance / SPEED_OF_LIGHT;
    CVector::from_iterator(
        m,
        plan.offsets.iter().enumerate().map(|(i, df)| {
            // split phases so each is reduced on its own
            turns(i as f64 * half_sin) * turns(df * delay) * scale
        }),
    )
}

/// Equivalent baseband steering vector with the time dependence removed by
/// the matched filters, `a_m = e^{j2π(m sinθ/2 − δf_m R/c)} / √M`.
pub fn steering_tx_baseband(plan: &OffsetPlan, loc: PolarLocation) -> CVector {
    let m = plan.num_elements();
    let scale = 1.0 / (m as f64).sqrt();
    let half_sin = loc.angle.sin() / 2.0;
    let range_turns = loc.distance / SPEED_OF_LIGHT;
    CVector::from_iterator(
        m,
        plan.offsets
            .iter()
            .enumerate()
            .map(|(i, df)| turns(i as f64 * half_sin) * turns(-df * range_turns) * scale),
    )
}

/// Phased-array receive steering vector, `b_n = e^{jπ n sinφ} / √N`.
pub fn steering_rx(aoa: f64, num_elements: usize) -> CVector {
    let scale = 1.0 / (num_elements as f64).sqrt();
    let half_sin = aoa.sin() / 2.0;
    CVector::from_iterator(
        num_elements,
        (0..num_elements).map(|n| turns(n as f64 * half_sin) * scale),
    )
}

/// Beam correlation `η = a_iᴴ a_j`.
pub fn correlation(a_i: &CVector, a_j: &CVector) -> Result<Complex64> {
    inner(a_i, a_j)
}

/// Angle argument `p = (sinθ_i − sinθ_j) / 2` of the correlation kernel.
pub fn angle_argument(loc_i: PolarLocation, loc_j: PolarLocation) -> f64 {
    (loc_i.angle.sin() - loc_j.angle.sin()) / 2.0
}

/// Distance argument `q = δf (R_i − R_j) / c` of the correlation kernel.
pub fn distance_argument(delta_f: f64, loc_i: PolarLocation, loc_j: PolarLocation) -> f64 {
    delta_f * (loc_i.distance - loc_j.distance) / SPEED_OF_LIGHT
}

/// `|η|` for the uniformly increasing plan, `|Sa_M(p − q)|`.
pub fn uniform_correlation_magnitude(num_elements: usize, p: f64, q: f64) -> f64 {
    sa(num_elements, p - q).abs()
}

/// Mean of `η = a_iᴴ a_j` over all random permutations of `0..M`:
/// `Sa_M(p) Sa_M(q) e^{−jπ(M−1)(p−q)}`.
pub fn correlation_mean(p: f64, q: f64, num_elements: usize) -> Complex64 {
    let m = num_elements;
    let magnitude = sa(m, p) * sa(m, q);
    magnitude * turns(-(m as f64 - 1.0) * (p - q) / 2.0)
}

/// Variance of `η` over random permutations,
/// `M/(M−1)(Sa²(p) − 1/M)(Sa²(q) − 1/M) − Sa²(p)Sa²(q) + 1/M`.
pub fn correlation_var(p: f64, q: f64, num_elements: usize) -> f64 {
    if num_elements < 2 {
        return 0.0;
    }
    let m = num_elements as f64;
    let sp = sa(num_elements, p).powi(2);
    let sq = sa(num_elements, q).powi(2);
    m / (m - 1.0) * (sp - 1.0 / m) * (sq - 1.0 / m) - sp * sq + 1.0 / m
}

/// Approximation of `|η|²`, `1/M + M/(M−1)(Sa²(p) − 1/M)(Sa²(q) − 1/M)`.
pub fn correlation_sq_approx(p: f64, q: f64, num_elements: usize) -> f64 {
    if num_elements < 2 {
        return 1.0;
    }
    let m = num_elements as f64;
    let sp = sa(num_elements, p).powi(2);
    let sq = sa(num_elements, q).powi(2);
    1.0 / m + m / (m - 1.0) * (sp - 1.0 / m) * (sq - 1.0 / m)
}

/// `|correlation|` between the focus and every `(r_i, θ_j)` grid point.
/// Rows follow `r_grid`, columns follow `theta_grid`.
pub fn beampattern(
    plan: &OffsetPlan,
    focus: PolarLocation,
    r_grid: &[f64],
    theta_grid: &[f64],
) -> Result<DMatrix<f64>> {
    if r_grid.is_empty() || theta_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let reference = steering_tx_baseband(plan, focus);
    let mut out = DMatrix::zeros(r_grid.len(), theta_grid.len());
    for (i, &r) in r_grid.iter().enumerate() {
        for (j, &theta) in theta_grid.iter().enumerate() {
            let a = steering_tx_baseband(plan, PolarLocation::new(r, theta));
            out[(i, j)] = correlation(&reference, &a)?.norm().min(1.0);
        }
    }
    Ok(out)
}

/// Measured −3 dB width of the mainlobe along distance at the focus angle,
/// scanning `samples` points over `focus.distance ± span/2`.
pub fn distance_mainlobe_width(plan: &OffsetPlan, focus: PolarLocation, span: f64, samples: usize) -> Result<f64> {
    if samples < 3 || !(span > 0.0) {
        return Err(invalid("samples", "need at least three samples over a positive span"));
    }
    let reference = steering_tx_baseband(plan, focus);
    let step = span / (samples - 1) as f64;
    let start = focus.distance - span / 2.0;
    let level = 1.0 / 2f64.sqrt();
    let gain = |r: f64| -> Result<f64> {
        let a = steering_tx_baseband(plan, PolarLocation::new(r, focus.angle));
        Ok(correlation(&reference, &a)?.norm())
    };
    let centre = (samples - 1) / 2;
    // walk outwards from the focus until the magnitude drops below -3 dB,
    // interpolating the crossing linearly
    let mut edges = [span / 2.0, span / 2.0];
    for (side, dir) in [(0usize, -1i64), (1, 1)] {
        let mut prev = (focus.distance, 1.0);
        let mut idx = centre as i64;
        loop {
            idx += dir;
            if idx < 0 || idx >= samples as i64 {
                break;
            }
            let r = start + idx as f64 * step;
            let g = gain(r)?;
            if g < level {
                let frac = (prev.1 - level) / (prev.1 - g);
                let crossing = prev.0 + (r - prev.0) * frac;
                edges[side] = (crossing - focus.distance).abs();
                break;
            }
            prev = (r, g);
        }
    }
    Ok(edges[0] + edges[1])
}

/// Distance to the nearest integer of `p − q` for the uniformly increasing
/// plan; zero on the S-shaped ridge where every element adds in phase.
pub fn coupling_residual(delta_f: f64, focus: PolarLocation, loc: PolarLocation) -> f64 {
    let x = angle_argument(loc, focus) - distance_argument(delta_f, loc, focus);
    (x - x.round()).abs()
}

pub(crate) fn check_plan_len(op: &'static str, plan: &OffsetPlan, expected: usize) -> Result<()> {
    check_dim(op, expected, plan.num_elements())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::SPEED_OF_LIGHT as C;
    use approx::assert_relative_eq;
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_6};

    fn uniform(m: usize, df: f64) -> OffsetPlan {
        generate_offsets(OffsetScheme::UniformIncreasing, m, OffsetSpacing::Increment(df), 0).unwrap()
    }

    #[test]
    fn half_wavelength_spacing() {
        let g = ArrayGeometry::half_wavelength(128, 30e9).unwrap();
        assert_relative_eq!(g.element_spacing(), C / 60e9);
        assert!(ArrayGeometry::half_wavelength(0, 30e9).is_err());
    }

    #[test]
    fn uniform_offsets() {
        let plan = uniform(4, 3e3);
        assert_eq!(plan.offsets, [0.0, 3e3, 6e3, 9e3]);
    }

    #[test]
    fn zero_offsets() {
        let plan = generate_offsets(OffsetScheme::Zero, 128, OffsetSpacing::Increment(3e3), 0).unwrap();
        assert_eq!(plan.offsets.len(), 128);
        assert!(plan.offsets.iter().all(|&f| f == 0.0));
    }

    #[test]
    fn random_permutation_is_replayable_permutation() {
        let spacing = OffsetSpacing::Increment(3e3);
        let a = generate_offsets(OffsetScheme::RandomPermutation, 256, spacing, 42).unwrap();
        let b = generate_offsets(OffsetScheme::RandomPermutation, 256, spacing, 42).unwrap();
        assert_eq!(a, b);
        let mut z: Vec<usize> = a.permutation.iter().map(|&v| v as usize).collect();
        z.sort_unstable();
        assert!(z.iter().enumerate().all(|(i, &v)| i == v));
        for (f, zm) in a.offsets.iter().zip(&a.permutation) {
            assert_eq!(*f, zm * 3e3);
        }
        let c = generate_offsets(OffsetScheme::RandomPermutation, 256, spacing, 43).unwrap();
        assert_ne!(a.permutation, c.permutation);
    }

    #[test]
    fn symmetric_plan_increment_and_support() {
        let spacing = OffsetSpacing::MaxRatio {
            rho_max: 0.5,
            subcarrier_spacing: 15e3,
        };
        let plan = generate_offsets(OffsetScheme::SymmetricRandomPermutation, 5, spacing, 1).unwrap();
        assert_relative_eq!(plan.delta_f, 2.0 * 0.5 * 15e3 / 4.0);
        let mut z = plan.permutation.clone();
        z.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(z, [-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_relative_eq!(plan.max_ratio(15e3), 0.5, max_relative = 1e-12);
        let even = generate_offsets(OffsetScheme::SymmetricRandomPermutation, 4, spacing, 1).unwrap();
        assert!(even.permutation.iter().all(|z| (z.abs() - 0.5).abs() < 1e-12 || (z.abs() - 1.5).abs() < 1e-12));
    }

    #[test]
    fn one_sided_ratio_increment() {
        let spacing = OffsetSpacing::MaxRatio {
            rho_max: 30.0,
            subcarrier_spacing: 15e3,
        };
        let plan = generate_offsets(OffsetScheme::RandomPermutation, 128, spacing, 9).unwrap();
        assert_relative_eq!(plan.delta_f, 30.0 * 15e3 / 127.0);
        assert_relative_eq!(plan.max_ratio(15e3), 30.0, max_relative = 1e-12);
    }

    #[test]
    fn single_element_symmetric_rejected() {
        let spacing = OffsetSpacing::MaxRatio {
            rho_max: 1.0,
            subcarrier_spacing: 15e3,
        };
        assert!(generate_offsets(OffsetScheme::SymmetricRandomPermutation, 1, spacing, 0).is_err());
        assert!(generate_offsets(OffsetScheme::UniformIncreasing, 1, OffsetSpacing::Increment(1.0), 0).is_ok());
    }

    #[test]
    fn logarithmic_offsets_share_the_uniform_maximum() {
        let plan = generate_offsets(OffsetScheme::Logarithmic, 256, OffsetSpacing::Increment(3e3), 0).unwrap();
        assert_eq!(plan.offsets[0], 0.0);
        assert_relative_eq!(plan.offsets[255], 255.0 * 3e3, max_relative = 1e-12);
        assert!(plan.offsets.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn zero_plan_broadside_steering() {
        let plan = OffsetPlan::zero(8);
        let a = steering_tx(&plan, PolarLocation::new(1234.0, 0.0), 3.7e-5);
        for z in a.iter() {
            assert_relative_eq!(z.re, 1.0 / 8f64.sqrt(), epsilon = 1e-15);
            assert!(z.im.abs() < 1e-15);
        }
    }

    #[test]
    fn offset_phase_cancels_at_propagation_time() {
        let plan = generate_offsets(OffsetScheme::RandomPermutation, 16, OffsetSpacing::Increment(3e3), 5).unwrap();
        let loc = PolarLocation::new(2500.0, 0.3);
        let a = steering_tx(&plan, loc, loc.distance / C);
        let pa = steering_tx(&OffsetPlan::zero(16), loc, 0.0);
        assert!((a - pa).norm() < 1e-12);
    }

    #[test]
    fn two_element_hand_evaluation() {
        let plan = uniform(2, 1e3);
        let a = steering_tx(&plan, PolarLocation::new(C / 4000.0, 0.0), 0.0);
        // second element phase: 2π · 1 kHz · (−1/4000 s) = −π/2
        assert!((a[0] - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((a[1] - Complex64::new(0.0, -FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn baseband_is_tx_at_time_zero() {
        let plan = generate_offsets(OffsetScheme::RandomPermutation, 32, OffsetSpacing::Increment(7e3), 11).unwrap();
        let loc = PolarLocation::new(1800.0, -0.4);
        assert!((steering_tx_baseband(&plan, loc) - steering_tx(&plan, loc, 0.0)).norm() < 1e-13);
        let at_origin = steering_tx_baseband(&plan, PolarLocation::new(0.0, -0.4));
        let pa = steering_tx_baseband(&OffsetPlan::zero(32), PolarLocation::new(0.0, -0.4));
        assert!((at_origin - pa).norm() < 1e-15);
    }

    #[test]
    fn receive_vectors() {
        let b = steering_rx(0.0, 4);
        assert!(b.iter().all(|z| (z - Complex64::new(0.5, 0.0)).norm() < 1e-15));
        assert_eq!(steering_rx(1.0, 1)[0], Complex64::new(1.0, 0.0));
        let b = steering_rx(FRAC_PI_6, 2);
        let expected = crate::math::cis(FRAC_PI_2) * FRAC_1_SQRT_2;
        assert!((b[1] - expected).norm() < 1e-14);
    }

    #[test]
    fn correlation_basics() {
        let a = steering_rx(0.3, 5);
        assert!((correlation(&a, &a).unwrap() - 1.0).norm() < 1e-15);
        let e0 = CVector::from_fn(3, |i, _| if i == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
        let e1 = CVector::from_fn(3, |i, _| if i == 1 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
        assert_eq!(correlation(&e0, &e1).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn uniform_correlation_closed_form() {
        let plan = uniform(256, 3e3);
        let li = PolarLocation::new(1200.0, 0.2);
        let lj = PolarLocation::new(2650.0, -0.05);
        let eta = correlation(&steering_tx_baseband(&plan, li), &steering_tx_baseband(&plan, lj)).unwrap();
        let p = angle_argument(li, lj);
        let q = distance_argument(3e3, li, lj);
        assert!((eta.norm() - uniform_correlation_magnitude(256, p, q)).abs() < 1e-12);
    }

    #[test]
    fn ensemble_moments_trivial_points() {
        assert!((correlation_mean(0.0, 0.0, 64) - 1.0).norm() < 1e-15);
        assert!(correlation_mean(0.0, 0.5, 2).norm() < 1e-15);
        assert!(correlation_var(0.0, 0.0, 64).abs() < 1e-15);
        assert!((correlation_sq_approx(0.0, 0.0, 64) - 1.0).abs() < 1e-15);
        // Sa_M(q)² = 1/M makes the second term vanish
        let m = 64;
        let q = (1..4000)
            .map(|i| i as f64 * 1e-5)
            .min_by(|a, b| {
                let fa = (sa(m, *a).powi(2) - 1.0 / 64.0).abs();
                let fb = (sa(m, *b).powi(2) - 1.0 / 64.0).abs();
                fa.partial_cmp(&fb).unwrap()
            })
            .unwrap();
        assert!((correlation_sq_approx(0.0, q, m) - 1.0 / 64.0).abs() < 1e-3);
    }

    #[test]
    fn variance_off_peak_approaches_one_over_m() {
        let (p, q) = (0.37, 0.29);
        for &m in &[256usize, 1024, 4096] {
            let v = correlation_var(p, q, m);
            assert!((v * m as f64 - 1.0).abs() < 0.02, "m={m} v={v}");
        }
    }

    #[test]
    fn approximate_correlation_decreases_with_array_size() {
        let (p, q) = (0.013, 0.021);
        let values: Vec<f64> = [32usize, 64, 128, 256, 512].iter().map(|&m| correlation_sq_approx(p, q, m)).collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
        assert!(values[4] < 0.01);
    }

    #[test]
    fn zero_plan_pattern_is_distance_blind() {
        let plan = OffsetPlan::zero(32);
        let r: Vec<f64> = (0..20).map(|i| i as f64 * 150.0).collect();
        let th: Vec<f64> = (0..15).map(|j| -0.5 + j as f64 * 0.07).collect();
        let bp = beampattern(&plan, PolarLocation::new(900.0, 0.1), &r, &th).unwrap();
        for j in 0..th.len() {
            for i in 1..r.len() {
                assert_eq!(bp[(i, j)], bp[(0, j)]);
            }
        }
    }

    #[test]
    fn beampattern_peaks_at_focus_and_rejects_empty_grid() {
        let plan = generate_offsets(OffsetScheme::RandomPermutation, 64, OffsetSpacing::Increment(3e3), 2).unwrap();
        let focus = PolarLocation::new(1000.0, 0.2);
        let bp = beampattern(&plan, focus, &[1000.0, 1400.0], &[0.2, -0.3]).unwrap();
        assert!((bp[(0, 0)] - 1.0).abs() < 1e-12);
        assert!(bp.iter().all(|&v| (0.0..=1.0).contains(&v)));
        assert_eq!(beampattern(&plan, focus, &[], &[0.1]), Err(Error::EmptyGrid));
    }

    #[test]
    fn uniform_pattern_ridge_follows_coupling_equation() {
        let plan = uniform(64, 3e3);
        let focus = PolarLocation::new(20_000.0, 0.0);
        // points on the ridge: δf(R − R₀)/c = sinθ/2 − l
        for &theta in &[-0.6f64, -0.2, 0.35, FRAC_PI_2 * 0.9] {
            for l in -1..=1 {
                let r = focus.distance + (theta.sin() / 2.0 - l as f64) * C / 3e3;
                let loc = PolarLocation::new(r, theta);
                assert!(coupling_residual(3e3, focus, loc) < 1e-9);
                let v = beampattern(&plan, focus, &[r], &[theta]).unwrap()[(0, 0)];
                assert!((v - 1.0).abs() < 1e-9, "theta={theta} l={l} v={v}");
            }
        }
    }

    #[test]
    fn permutation_pattern_period_and_width() {
        let plan = generate_offsets(OffsetScheme::RandomPermutation, 256, OffsetSpacing::Increment(3e3), 17).unwrap();
        let focus = PolarLocation::new(30_000.0, 0.1);
        let period = plan.distance_period();
        assert_relative_eq!(period, C / 3e3);
        let r: Vec<f64> = (0..12).map(|i| 5_000.0 + i as f64 * 3_731.0).collect();
        let shifted: Vec<f64> = r.iter().map(|x| x + period).collect();
        let th = [-0.4, 0.1, 0.33];
        let a = beampattern(&plan, focus, &r, &th).unwrap();
        let b = beampattern(&plan, focus, &shifted, &th).unwrap();
        assert!((a - b).abs().max() < 1e-9);

        let nominal = plan.distance_beamwidth();
        let measured = distance_mainlobe_width(&plan, focus, 4.0 * nominal, 801).unwrap();
        // −3 dB width of a Sa_M mainlobe is ≈ 0.886 of the null-to-centre spacing
        assert!(measured > 0.6 * nominal && measured < 1.2 * nominal, "measured {measured} nominal {nominal}");
    }
}

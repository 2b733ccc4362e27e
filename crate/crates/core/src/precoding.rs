//! Downlink precoders, the ICI pre-equaliser, SINR and spectral efficiency.
//!
//! Precoders are returned with unit-norm columns `w_k`; the per-UE transmit
//! amplitudes `a_k` are a separate power-allocation step.

use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{check_dim, invalid, Error, Result};
use crate::linalg::{gram, hermitian_condition, hpd_inverse_diagonal, hpd_solve, CMatrix};

/// Condition number of `H Hᴴ` above which a ZF solve is flagged.
pub const ILL_CONDITIONED: f64 = 1e10;

/// Numerical rank threshold for the pre-equaliser.
const RANK_DEFICIENT: f64 = 1e14;

/// Downlink channel `H` (`K × M`, row `k` is `h_kᵀ`) at per-UE SNR `γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MuMimoChannel {
    pub h: CMatrix,
    pub snr_linear: f64,
}

impl MuMimoChannel {
    pub fn new(h: CMatrix, snr_linear: f64) -> Result<Self> {
        if h.nrows() == 0 {
            return Err(invalid("num_ues", "must be at least 1"));
        }
        if h.nrows() > h.ncols() {
            return Err(invalid("num_ues", "cannot exceed the number of transmit antennas"));
        }
        if !(snr_linear > 0.0) || !snr_linear.is_finite() {
            return Err(invalid("snr", "must be positive and finite"));
        }
        Ok(Self { h, snr_linear })
    }

    pub fn num_ues(&self) -> usize {
        self.h.nrows()
    }

    pub fn num_antennas(&self) -> usize {
        self.h.ncols()
    }

    /// `σ_n² = 1/γ`.
    pub fn noise_variance(&self) -> f64 {
        1.0 / self.snr_linear
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precoder {
    Mmse,
    Zf,
}

/// Per-UE amplitudes `a_k` applied on top of the unit-norm columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PowerNormalization {
    /// The raw (unnormalised) precoder is scaled to total power `K`, so
    /// `a_k = ‖w̃_k‖ √(K / ‖W̃‖_F²)`.
    #[default]
    Total,
    /// `a_k = 1`.
    Equal,
}

/// How the MMSE SINR is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SinrEvaluation {
    /// Interference-plus-noise ratio of the actual precoder and amplitudes.
    #[default]
    General,
    /// `γ / [(HHᴴ + I/γ)⁻¹]_kk − 1`, independent of the power allocation.
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecodeResult {
    /// `M × K`, unit-norm columns.
    pub w: CMatrix,
    /// `a_k`.
    pub power: Vec<f64>,
    pub per_ue_sinr: Vec<f64>,
    /// bits/s/Hz, overhead factor included.
    pub sum_rate: f64,
    /// `cond(HHᴴ)` exceeded [`ILL_CONDITIONED`] or the solve fell back to a
    /// pseudo-inverse.
    pub ill_conditioned: bool,
}

fn normalize_columns(raw: &CMatrix) -> CMatrix {
    let mut w = raw.clone();
    for mut col in w.column_iter_mut() {
        let n = col.norm();
        if n > 0.0 {
            col /= Complex64::new(n, 0.0);
        }
    }
    w
}

/// Unnormalised MMSE precoder `Hᴴ (HHᴴ + I/γ)⁻¹`.
pub fn mmse_raw(ch: &MuMimoChannel) -> Result<CMatrix> {
    let k = ch.num_ues();
    let g = gram(&ch.h) + CMatrix::identity(k, k) * Complex64::new(ch.noise_variance(), 0.0);
    // (G⁻¹ H)ᴴ = Hᴴ G⁻¹ since G is Hermitian
    Ok(hpd_solve(&g, &ch.h)?.adjoint())
}

/// MMSE precoder with unit-norm columns.
pub fn mmse_precoder(ch: &MuMimoChannel) -> Result<CMatrix> {
    Ok(normalize_columns(&mmse_raw(ch)?))
}

/// Unnormalised ZF precoder `Hᴴ (HHᴴ)⁻¹`, plus whether the solve was
/// ill-conditioned. A failed Cholesky factorisation falls back to the SVD
/// pseudo-inverse instead of discarding the channel.
pub fn zf_raw(h: &CMatrix) -> Result<(CMatrix, bool)> {
    if h.nrows() > h.ncols() {
        return Err(invalid("num_ues", "cannot exceed the number of transmit antennas"));
    }
    let g = gram(h);
    let cond = hermitian_condition(&g);
    match hpd_solve(&g, h) {
        Ok(y) => Ok((y.adjoint(), !(cond <= ILL_CONDITIONED))),
        Err(Error::RankDeficient { .. }) => {
            let pinv = h
                .clone()
                .pseudo_inverse(f64::EPSILON * h.nrows().max(h.ncols()) as f64)
                .map_err(|_| Error::RankDeficient { cond_estimate: cond })?;
            Ok((pinv, true))
        }
        Err(e) => Err(e),
    }
}

/// ZF precoder with unit-norm columns.
pub fn zf_precoder(ch: &MuMimoChannel) -> Result<CMatrix> {
    Ok(normalize_columns(&zf_raw(&ch.h)?.0))
}

/// `a_k` for a raw precoder.
pub fn power_allocation(raw: &CMatrix, scheme: PowerNormalization) -> Vec<f64> {
    let k = raw.ncols();
    match scheme {
        PowerNormalization::Equal => alloc::vec![1.0; k],
        PowerNormalization::Total => {
            let total = raw.norm_squared();
            if total == 0.0 {
                return alloc::vec![0.0; k];
            }
            let scale = (k as f64 / total).sqrt();
            raw.column_iter().map(|c| c.norm() * scale).collect()
        }
    }
}

/// `SINR_k = |a_k h_kᵀ w_k|² / (Σ_{i≠k} |a_i h_kᵀ w_i|² + σ²)`.
pub fn sinr_general(h: &CMatrix, w: &CMatrix, a: &[f64], sigma2: f64) -> Result<Vec<f64>> {
    check_dim("sinr_general(antennas)", h.ncols(), w.nrows())?;
    check_dim("sinr_general(ues)", h.nrows(), w.ncols())?;
    check_dim("sinr_general(power)", w.ncols(), a.len())?;
    let eff = h * w;
    Ok((0..h.nrows())
        .map(|k| {
            let mut signal = 0.0;
            let mut interference = 0.0;
            for (i, &ai) in a.iter().enumerate() {
                let p = (eff[(k, i)] * ai).norm_sqr();
                if i == k {
                    signal = p;
                } else {
                    interference += p;
                }
            }
            signal / (interference + sigma2)
        })
        .collect())
}

/// `SINR_k = γ / [(HHᴴ + I/γ)⁻¹]_kk − 1`.
pub fn sinr_closed_form(ch: &MuMimoChannel) -> Result<Vec<f64>> {
    let k = ch.num_ues();
    let g = gram(&ch.h) + CMatrix::identity(k, k) * Complex64::new(ch.noise_variance(), 0.0);
    let diag: DVector<f64> = hpd_inverse_diagonal(&g)?;
    Ok(diag.iter().map(|d| (ch.snr_linear / d - 1.0).max(0.0)).collect())
}

/// `N_us / (N_us + ρ_max) Σ_k log₂(1 + SINR_k)`.
pub fn spectral_efficiency(sinrs: &[f64], num_subcarriers: usize, rho_max: f64) -> f64 {
    let n = num_subcarriers as f64;
    n / (n + rho_max) * sinrs.iter().map(|s| (1.0 + s).log2()).sum::<f64>()
}

/// Builds the requested precoder, allocates power and evaluates the rate.
/// `overhead_rho` enters the `N_us/(N_us + ρ)` factor.
pub fn precode(
    ch: &MuMimoChannel,
    precoder: Precoder,
    power: PowerNormalization,
    mmse_sinr: SinrEvaluation,
    num_subcarriers: usize,
    overhead_rho: f64,
) -> Result<PrecodeResult> {
    let (raw, ill_conditioned) = match precoder {
        Precoder::Mmse => (mmse_raw(ch)?, false),
        Precoder::Zf => zf_raw(&ch.h)?,
    };
    let w = normalize_columns(&raw);
    let a = power_allocation(&raw, power);
    let per_ue_sinr = match (precoder, mmse_sinr) {
        (Precoder::Mmse, SinrEvaluation::ClosedForm) => sinr_closed_form(ch)?,
        _ => sinr_general(&ch.h, &w, &a, ch.noise_variance())?,
    };
    let sum_rate = spectral_efficiency(&per_ue_sinr, num_subcarriers, overhead_rho);
    Ok(PrecodeResult {
        w,
        power: a,
        per_ue_sinr,
        sum_rate,
        ill_conditioned,
    })
}

/// Pre-equaliser `P = Hᴴ (HHᴴ)⁻¹ H_ideal`, so that `H P = H_ideal`.
pub fn pre_equalizer(h_actual: &CMatrix, h_ideal: &CMatrix) -> Result<CMatrix> {
    check_dim("pre_equalizer(rows)", h_actual.nrows(), h_ideal.nrows())?;
    if h_actual.nrows() > h_actual.ncols() {
        return Err(invalid("h_actual", "needs at least as many columns as rows"));
    }
    let g = gram(h_actual);
    let cond = hermitian_condition(&g);
    if !(cond < RANK_DEFICIENT) {
        return Err(Error::RankDeficient { cond_estimate: cond });
    }
    Ok(h_actual.adjoint() * hpd_solve(&g, h_ideal)?)
}

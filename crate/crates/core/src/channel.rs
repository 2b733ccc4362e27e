//! UE placement, multipath generation and channel operators.
//!
//! Performance simulations use the reduced single-antenna-UE model, where
//! UE `k` sees the row vector `h_kᵀ = Σ_p h̃_{k,p} aᵀ(R_{k,p}, θ_{k,p})`.
//! The full space-frequency matrix is only materialised for small grids, to
//! check it against the sampled waveform.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::array::{check_plan_len, steering_rx, steering_tx_baseband, OffsetPlan, PolarLocation};
use crate::error::{invalid, Error, Result};
use crate::linalg::{kron, unitary_dft, CMatrix, CVector};
use crate::math::{turns, SPEED_OF_LIGHT};
use crate::rng::{complex_gaussian, random_phase};
use crate::waveform::OfdmGrid;

/// Dense space-frequency matrices are refused beyond this many rows/columns.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// One propagation ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Path {
    /// Complex gain `h̃`, carrier phase included.
    pub gain: Complex64,
    /// Propagation distance in meters.
    pub distance: f64,
    /// Angle of departure at the BS, radians.
    pub aod: f64,
    /// Angle of arrival at the UE, radians.
    pub aoa: f64,
}

impl Path {
    pub fn new(gain: Complex64, distance: f64, aod: f64, aoa: f64) -> Self {
        Self {
            gain,
            distance,
            aod,
            aoa,
        }
    }

    pub fn departure(&self) -> PolarLocation {
        PolarLocation::new(self.distance, self.aod)
    }
}

/// How NLoS amplitudes are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NlosGainModel {
    /// `CN(0, 1/((κ+1)P))` per path.
    #[default]
    ComplexGaussian,
    /// Deterministic magnitude `1/√((κ+1)P)` with a uniform phase.
    ConstantModulus,
}

/// Multipath channel of one UE. Path 0 is the LoS ray.
#[derive(Debug, Clone, PartialEq)]
pub struct UeChannel {
    pub location: PolarLocation,
    pub paths: Vec<Path>,
    pub rician_kappa: f64,
}

impl UeChannel {
    /// Pure LoS channel with the given gain.
    pub fn line_of_sight(location: PolarLocation, gain: Complex64) -> Self {
        Self {
            location,
            paths: alloc::vec![Path::new(gain, location.distance, location.angle, location.angle)],
            rician_kappa: f64::INFINITY,
        }
    }

    pub fn los(&self) -> &Path {
        &self.paths[0]
    }
}

fn check_sector(theta_max: f64, r_max: f64) -> Result<()> {
    if !(0.0..=core::f64::consts::FRAC_PI_2).contains(&theta_max) {
        return Err(invalid("theta_max", "must lie in [0, 90] degrees"));
    }
    if !(r_max > 0.0) || !r_max.is_finite() {
        return Err(invalid("r_max", "must be positive and finite"));
    }
    Ok(())
}

/// Drops `k` UEs into the sector: `θ ~ U[−θ_max, θ_max]`, `R ~ U(0, R_max]`.
pub fn place_ues<R: Rng + ?Sized>(k: usize, theta_max: f64, r_max: f64, rng: &mut R) -> Result<Vec<PolarLocation>> {
    if k == 0 {
        return Err(invalid("num_ues", "must be at least 1"));
    }
    check_sector(theta_max, r_max)?;
    Ok((0..k)
        .map(|_| {
            let angle = theta_max * (2.0 * rng.random::<f64>() - 1.0);
            let distance = r_max * (1.0 - rng.random::<f64>());
            PolarLocation::new(distance, angle)
        })
        .collect())
}

/// One LoS path plus `num_paths` NLoS rays.
///
/// The LoS gain has magnitude `√(κ/(κ+1))` and a uniform phase; NLoS rays
/// share power `1/(κ+1)`, leave and arrive at angles uniform in the sector
/// and travel a distance uniform in `[R_LoS, R_max]`. With `num_paths = 0`
/// the channel is pure LoS regardless of `κ`; `κ = ∞` silences the NLoS
/// rays.
pub fn generate_multipath<R: Rng + ?Sized>(
    location: PolarLocation,
    num_paths: usize,
    kappa: f64,
    theta_max: f64,
    r_max: f64,
    model: NlosGainModel,
    rng: &mut R,
) -> Result<UeChannel> {
    if kappa.is_nan() || kappa < 0.0 {
        return Err(invalid("rician_kappa", "must be non-negative"));
    }
    check_sector(theta_max, r_max)?;
    if location.distance > r_max {
        return Err(invalid("location", "UE lies beyond R_max"));
    }
    let (los_power, nlos_power) = if num_paths == 0 || kappa == f64::INFINITY {
        (1.0, 0.0)
    } else {
        (kappa / (kappa + 1.0), 1.0 / ((kappa + 1.0) * num_paths as f64))
    };
    let mut paths = Vec::with_capacity(num_paths + 1);
    paths.push(Path::new(
        random_phase(rng) * los_power.sqrt(),
        location.distance,
        location.angle,
        location.angle,
    ));
    for _ in 0..num_paths {
        let gain = match model {
            NlosGainModel::ComplexGaussian => complex_gaussian(rng, nlos_power),
            NlosGainModel::ConstantModulus => random_phase(rng) * nlos_power.sqrt(),
        };
        let aod = theta_max * (2.0 * rng.random::<f64>() - 1.0);
        let aoa = theta_max * (2.0 * rng.random::<f64>() - 1.0);
        let distance = location.distance + (r_max - location.distance) * rng.random::<f64>();
        paths.push(Path::new(gain, distance, aod, aoa));
    }
    Ok(UeChannel {
        location,
        paths,
        rician_kappa: if num_paths == 0 { f64::INFINITY } else { kappa },
    })
}

/// `h = Σ_p h̃_p a(R_p, θ_p)`; UE `k` sees `h_kᵀ`.
pub fn channel_vector(paths: &[Path], plan: &OffsetPlan) -> CVector {
    let mut h = CVector::zeros(plan.num_elements());
    for p in paths {
        h += steering_tx_baseband(plan, p.departure()) * p.gain;
    }
    h
}

/// Stacks `h_kᵀ` of every UE into the `K × M` downlink matrix.
pub fn channel_matrix(ues: &[UeChannel], plan: &OffsetPlan) -> CMatrix {
    let mut h = CMatrix::zeros(ues.len(), plan.num_elements());
    for (k, ue) in ues.iter().enumerate() {
        h.row_mut(k).copy_from(&channel_vector(&ue.paths, plan).transpose());
    }
    h
}

/// Per-subcarrier channel seen by receive antenna `rx`:
/// `h_{m,ℓ} = Σ_p h̃_p b_rx(φ_p) a_m(R_p, θ_p) e^{−j2πℓΔf R_p/c}`.
/// Rows are subcarriers, columns transmit antennas.
pub fn subcarrier_channel(
    paths: &[Path],
    plan: &OffsetPlan,
    grid: &OfdmGrid,
    rx: usize,
    num_rx: usize,
) -> Result<CMatrix> {
    if rx >= num_rx {
        return Err(invalid("rx", "receive antenna index out of range"));
    }
    let n = grid.num_subcarriers();
    let mut h = CMatrix::zeros(n, plan.num_elements());
    for p in paths {
        let a = steering_tx_baseband(plan, p.departure());
        let coeff = p.gain * steering_rx(p.aoa, num_rx)[rx];
        let delay_turns = grid.subcarrier_spacing() * p.distance / SPEED_OF_LIGHT;
        for l in 0..n {
            let phi = turns(-(l as f64) * delay_turns) * coeff;
            for m in 0..a.len() {
                h[(l, m)] += phi * a[m];
            }
        }
    }
    Ok(h)
}

fn check_dense(grid: &OfdmGrid, m: usize, num_rx: usize, cap: usize) -> Result<()> {
    let size = grid.num_subcarriers() * m.max(num_rx);
    if size > cap {
        return Err(Error::TooLarge { size, cap });
    }
    Ok(())
}

/// Space-frequency channel `Σ_p h̃_p [b aᵀ ⊗ F] Ξ (I_M ⊗ Fᴴ Φ_p)`, with
/// `Ξ = blkdiag(Ξ_m)`, `Ξ_m = diag(e^{j2πρ_m i/N})` and
/// `Φ_p = diag(e^{−j2πℓΔf R_p/c})`. Vectorised frames are antenna-major:
/// index `m N_us + ℓ`.
pub fn space_frequency_matrix(
    paths: &[Path],
    plan: &OffsetPlan,
    grid: &OfdmGrid,
    num_rx: usize,
    cap: usize,
) -> Result<CMatrix> {
    let m = plan.num_elements();
    check_dense(grid, m, num_rx, cap)?;
    let n = grid.num_subcarriers();
    let f = unitary_dft(n);
    let fh = f.adjoint();
    let rhos = plan.ratios(grid.subcarrier_spacing());
    let xi = CMatrix::from_diagonal(&CVector::from_fn(m * n, |idx, _| {
        turns(rhos[idx / n] * (idx % n) as f64 / n as f64)
    }));
    let mut out = CMatrix::zeros(num_rx * n, m * n);
    for p in paths {
        let a = steering_tx_baseband(plan, p.departure());
        let b = steering_rx(p.aoa, num_rx);
        let outer = &b * a.transpose() * p.gain;
        let delay_turns = grid.subcarrier_spacing() * p.distance / SPEED_OF_LIGHT;
        let phi = CMatrix::from_diagonal(&CVector::from_fn(n, |l, _| turns(-(l as f64) * delay_turns)));
        let right = kron(&CMatrix::identity(m, m), &(&fh * phi));
        out += kron(&outer, &f) * &xi * right;
    }
    Ok(out)
}

/// ICI-free target `h̃ (b aᵀ ⊗ I_N)` of the LoS path.
pub fn ideal_channel(los: &Path, plan: &OffsetPlan, grid: &OfdmGrid, num_rx: usize, cap: usize) -> Result<CMatrix> {
    let m = plan.num_elements();
    check_dense(grid, m, num_rx, cap)?;
    let n = grid.num_subcarriers();
    let outer = steering_rx(los.aoa, num_rx) * steering_tx_baseband(plan, los.departure()).transpose() * los.gain;
    Ok(kron(&outer, &CMatrix::identity(n, n)))
}

/// Validates a plan against the number of transmit antennas of a channel.
pub fn check_plan(plan: &OffsetPlan, num_antennas: usize) -> Result<()> {
    check_plan_len("offset plan", plan, num_antennas)
}

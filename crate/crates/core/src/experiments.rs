//! Monte-Carlo engine, closed-form bounds and preset sweeps.
//!
//! Every trial draws its UE geometry from a generator keyed by
//! `(seed, trial)` only, so FLDMA and SDMA — and every point of a sweep —
//! see the same placements. Trials may run on any number of workers through
//! a [`TrialRunner`]; aggregation always happens in trial order, so results
//! do not depend on the schedule.

use alloc::string::String;
use alloc::vec::Vec;
use core::time::Duration;

use num_complex::Complex64;
use rand::Rng;

use crate::array::{
    correlation, generate_offsets, steering_tx_baseband, ArrayGeometry, OffsetPlan, OffsetScheme, OffsetSpacing,
    PolarLocation,
};
use crate::channel::{channel_matrix, channel_vector, generate_multipath, place_ues, NlosGainModel, UeChannel};
use crate::error::{invalid, Result};
use crate::linalg::CMatrix;
use crate::math::{db_to_linear, deg_to_rad, sa, SPEED_OF_LIGHT};
use crate::precoding::{precode, MuMimoChannel, PowerNormalization, Precoder, SinrEvaluation};
use crate::rng::{derive_seed, derived_rng, stream};
use crate::waveform::OfdmGrid;

/// Transmission scheme compared in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    FldmaMmse,
    FldmaZf,
    SdmaMmse,
    SdmaZf,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::FldmaMmse, Scheme::FldmaZf, Scheme::SdmaMmse, Scheme::SdmaZf];

    pub fn precoder(self) -> Precoder {
        match self {
            Scheme::FldmaMmse | Scheme::SdmaMmse => Precoder::Mmse,
            Scheme::FldmaZf | Scheme::SdmaZf => Precoder::Zf,
        }
    }

    pub fn is_fldma(self) -> bool {
        matches!(self, Scheme::FldmaMmse | Scheme::FldmaZf)
    }

    pub fn label(self) -> &'static str {
        match self {
            Scheme::FldmaMmse => "FLDMA_MMSE",
            Scheme::FldmaZf => "FLDMA_ZF",
            Scheme::SdmaMmse => "SDMA_MMSE",
            Scheme::SdmaZf => "SDMA_ZF",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.label().eq_ignore_ascii_case(s))
    }
}

/// Which `ρ` the FLDMA rate pays in its `N_us/(N_us + ρ)` overhead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OverheadConvention {
    /// `ρ_max` for every plan.
    #[default]
    RhoMax,
    /// The occupied band: `2ρ_max` for the symmetric plan, `ρ_max` otherwise.
    OccupiedBand,
}

/// Offset plan recipe; the shuffle seed comes from the scenario seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanSpec {
    pub scheme: OffsetScheme,
    pub rho_max: f64,
}

/// Full description of one Monte-Carlo experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub geometry: ArrayGeometry,
    pub grid: OfdmGrid,
    pub plan: PlanSpec,
    pub num_ues: usize,
    /// Sector half-width, radians.
    pub theta_max: f64,
    /// Sector radius, meters.
    pub r_max: f64,
    pub num_paths: usize,
    pub rician_kappa: f64,
    pub nlos_model: NlosGainModel,
    pub snr_db: f64,
    pub power: PowerNormalization,
    pub mmse_sinr: SinrEvaluation,
    pub overhead: OverheadConvention,
    pub schemes: Vec<Scheme>,
    pub trials: usize,
    pub seed: u64,
}

impl Scenario {
    /// 30 GHz, 15 kHz × 512 subcarriers with a 1/4 CP, 128-element ULA,
    /// 3 km sector of ±60°, single path, 30 dB, `ρ_max = 30`, 100 UEs.
    pub fn reference_default() -> Self {
        Self {
            geometry: ArrayGeometry::half_wavelength(128, 30e9).expect("valid geometry"),
            grid: OfdmGrid::new(512, 15e3, 128).expect("valid grid"),
            plan: PlanSpec {
                scheme: OffsetScheme::RandomPermutation,
                rho_max: 30.0,
            },
            num_ues: 100,
            theta_max: deg_to_rad(60.0),
            r_max: 3000.0,
            num_paths: 0,
            rician_kappa: 0.0,
            nlos_model: NlosGainModel::default(),
            snr_db: 30.0,
            power: PowerNormalization::default(),
            mmse_sinr: SinrEvaluation::default(),
            overhead: OverheadConvention::default(),
            schemes: Scheme::ALL.to_vec(),
            trials: 10_000,
            seed: 1,
        }
    }

    pub fn snr_linear(&self) -> f64 {
        db_to_linear(self.snr_db)
    }

    /// The FLDMA offset plan; its shuffle is seeded from the scenario seed.
    pub fn offset_plan(&self) -> Result<OffsetPlan> {
        generate_offsets(
            self.plan.scheme,
            self.geometry.num_elements(),
            OffsetSpacing::MaxRatio {
                rho_max: self.plan.rho_max,
                subcarrier_spacing: self.grid.subcarrier_spacing(),
            },
            derive_seed(self.seed, stream::OFFSET_PLAN, 0),
        )
    }

    /// `ρ` in the FLDMA overhead factor.
    pub fn overhead_rho(&self) -> f64 {
        match (self.overhead, self.plan.scheme) {
            (_, OffsetScheme::Zero) => 0.0,
            (OverheadConvention::OccupiedBand, OffsetScheme::SymmetricRandomPermutation) => 2.0 * self.plan.rho_max,
            _ => self.plan.rho_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.geometry.num_elements();
        if self.num_ues == 0 || self.num_ues > m {
            return Err(invalid("num_ues", "must lie in 1..=num_antennas"));
        }
        if !(0.0..=core::f64::consts::FRAC_PI_2).contains(&self.theta_max) {
            return Err(invalid("theta_max", "must lie in [0, 90] degrees"));
        }
        if !(self.r_max > 0.0) || !self.r_max.is_finite() {
            return Err(invalid("r_max", "must be positive and finite"));
        }
        if self.r_max > self.grid.cp_coverage_distance() {
            return Err(invalid("r_max", "exceeds the distance covered by the cyclic prefix (c T_cp)"));
        }
        if self.rician_kappa.is_nan() || self.rician_kappa < 0.0 {
            return Err(invalid("rician_kappa", "must be non-negative"));
        }
        if !self.snr_db.is_finite() {
            return Err(invalid("snr_db", "must be finite"));
        }
        if self.trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        if self.schemes.is_empty() {
            return Err(invalid("schemes", "at least one scheme is required"));
        }
        let plan = self.offset_plan()?;
        if self.r_max >= plan.distance_period() {
            return Err(invalid("r_max", "must be shorter than one distance period c/δf"));
        }
        Ok(())
    }
}

/// Outcome of one scheme in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeOutcome {
    pub scheme: Scheme,
    pub sum_rate: f64,
    pub sinrs: Vec<f64>,
    pub ill_conditioned: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub outcomes: Vec<SchemeOutcome>,
}

impl TrialRecord {
    pub fn rate(&self, scheme: Scheme) -> Option<f64> {
        self.outcomes.iter().find(|o| o.scheme == scheme).map(|o| o.sum_rate)
    }
}

/// Draws the UE channels of one trial.
pub fn draw_ues(scenario: &Scenario, trial: usize) -> Result<Vec<UeChannel>> {
    let mut rng = derived_rng(scenario.seed, stream::GEOMETRY, trial as u64);
    let locations = place_ues(scenario.num_ues, scenario.theta_max, scenario.r_max, &mut rng)?;
    locations
        .into_iter()
        .map(|loc| {
            generate_multipath(
                loc,
                scenario.num_paths,
                scenario.rician_kappa,
                scenario.theta_max,
                scenario.r_max,
                scenario.nlos_model,
                &mut rng,
            )
        })
        .collect()
}

/// One trial with a pre-built FLDMA plan.
pub fn run_trial_with_plan(scenario: &Scenario, plan: &OffsetPlan, trial: usize) -> Result<TrialRecord> {
    let ues = draw_ues(scenario, trial)?;
    let gamma = scenario.snr_linear();
    let n = scenario.grid.num_subcarriers();
    let mut fldma = None;
    let mut sdma = None;
    let mut outcomes = Vec::with_capacity(scenario.schemes.len());
    for &scheme in &scenario.schemes {
        let (ch, rho) = if scheme.is_fldma() {
            let ch = match &fldma {
                Some(ch) => ch,
                None => fldma.insert(MuMimoChannel::new(channel_matrix(&ues, plan), gamma)?),
            };
            (ch, scenario.overhead_rho())
        } else {
            let ch = match &sdma {
                Some(ch) => ch,
                None => {
                    let zero = OffsetPlan::zero(plan.num_elements());
                    sdma.insert(MuMimoChannel::new(channel_matrix(&ues, &zero), gamma)?)
                }
            };
            (ch, 0.0)
        };
        let r = precode(ch, scheme.precoder(), scenario.power, scenario.mmse_sinr, n, rho)?;
        outcomes.push(SchemeOutcome {
            scheme,
            sum_rate: r.sum_rate,
            sinrs: r.per_ue_sinr,
            ill_conditioned: r.ill_conditioned,
        });
    }
    Ok(TrialRecord { trial, outcomes })
}

pub fn run_trial(scenario: &Scenario, trial: usize) -> Result<TrialRecord> {
    run_trial_with_plan(scenario, &scenario.offset_plan()?, trial)
}

/// Executes `count` independent jobs and returns their results in index
/// order.
pub trait TrialRunner {
    fn run_indexed(
        &self,
        count: usize,
        job: &(dyn Fn(usize) -> Result<TrialRecord> + Sync),
    ) -> Result<Vec<TrialRecord>>;
}

/// Runs trials one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl TrialRunner for Sequential {
    fn run_indexed(
        &self,
        count: usize,
        job: &(dyn Fn(usize) -> Result<TrialRecord> + Sync),
    ) -> Result<Vec<TrialRecord>> {
        (0..count).map(job).collect()
    }
}

/// Parameter varied along a sweep. Angles in radians, distances in meters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweptParameter {
    Snr,
    NumUes,
    ThetaMax,
    RMax,
    RhoMax,
    NumPaths,
    RicianKappa,
}

impl SweptParameter {
    pub fn label(self) -> &'static str {
        match self {
            SweptParameter::Snr => "snr_db",
            SweptParameter::NumUes => "num_ues",
            SweptParameter::ThetaMax => "theta_max",
            SweptParameter::RMax => "r_max",
            SweptParameter::RhoMax => "rho_max",
            SweptParameter::NumPaths => "num_paths",
            SweptParameter::RicianKappa => "rician_kappa",
        }
    }

    pub fn apply(self, scenario: &mut Scenario, value: f64) -> Result<()> {
        let count = |v: f64, name| {
            if v < 0.0 || v.fract() != 0.0 || !v.is_finite() {
                Err(invalid(name, "sweep values must be non-negative integers"))
            } else {
                Ok(v as usize)
            }
        };
        match self {
            SweptParameter::Snr => scenario.snr_db = value,
            SweptParameter::NumUes => scenario.num_ues = count(value, "num_ues")?,
            SweptParameter::ThetaMax => scenario.theta_max = value,
            SweptParameter::RMax => scenario.r_max = value,
            SweptParameter::RhoMax => scenario.plan.rho_max = value,
            SweptParameter::NumPaths => scenario.num_paths = count(value, "num_paths")?,
            SweptParameter::RicianKappa => scenario.rician_kappa = value,
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: Scenario,
    pub parameter: SweptParameter,
    pub values: Vec<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(crate::error::Error::EmptyGrid);
        }
        let up = self.values.windows(2).all(|w| w[1] > w[0]);
        let down = self.values.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(invalid("values", "sweep values must be strictly monotone"));
        }
        for &v in &self.values {
            self.scenario_at(v)?.validate()?;
        }
        Ok(())
    }

    pub fn scenario_at(&self, value: f64) -> Result<Scenario> {
        let mut s = self.base.clone();
        self.parameter.apply(&mut s, value)?;
        Ok(s)
    }
}

/// Aggregated statistics of one scheme at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointStats {
    pub value: f64,
    pub scheme: Scheme,
    pub mean: f64,
    pub stderr: f64,
    /// `1.96 · stderr`.
    pub ci95: f64,
    pub trials: usize,
    pub ill_conditioned: usize,
    /// Closed-form upper bound for FLDMA schemes when applicable.
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub parameter: SweptParameter,
    pub points: Vec<PointStats>,
    pub wall_clock: Option<Duration>,
}

impl SweepResult {
    pub fn get(&self, value: f64, scheme: Scheme) -> Option<&PointStats> {
        self.points.iter().find(|p| p.value == value && p.scheme == scheme)
    }

    pub fn series(&self, scheme: Scheme) -> impl Iterator<Item = &PointStats> {
        self.points.iter().filter(move |p| p.scheme == scheme)
    }
}

/// Sample mean and standard error, summed in slice order.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Bound matching the scenario: two-UE for `K = 2`, multi-UE otherwise.
pub fn scenario_bound(scenario: &Scenario) -> Option<f64> {
    let gamma = scenario.snr_linear();
    let m = scenario.geometry.num_elements();
    let n = scenario.grid.num_subcarriers();
    let rho = scenario.overhead_rho();
    if scenario.num_ues == 2 {
        two_ue_bound(gamma, m, n, rho).ok()
    } else {
        multi_ue_bound(gamma, m, scenario.num_ues, n, rho)
    }
}

pub fn monte_carlo(spec: &SweepSpec) -> Result<SweepResult> {
    monte_carlo_with(spec, &Sequential)
}

pub fn monte_carlo_with(spec: &SweepSpec, runner: &dyn TrialRunner) -> Result<SweepResult> {
    spec.validate()?;
    let mut points = Vec::new();
    for &value in &spec.values {
        let scenario = spec.scenario_at(value)?;
        let plan = scenario.offset_plan()?;
        let job = |t: usize| run_trial_with_plan(&scenario, &plan, t);
        let records = runner.run_indexed(scenario.trials, &job)?;
        let bound = scenario_bound(&scenario);
        for &scheme in &scenario.schemes {
            let rates: Vec<f64> = records.iter().filter_map(|r| r.rate(scheme)).collect();
            let ill = records
                .iter()
                .flat_map(|r| r.outcomes.iter())
                .filter(|o| o.scheme == scheme && o.ill_conditioned)
                .count();
            let (mean, stderr) = mean_stderr(&rates);
            points.push(PointStats {
                value,
                scheme,
                mean,
                stderr,
                ci95: 1.96 * stderr,
                trials: rates.len(),
                ill_conditioned: ill,
                bound: if scheme.is_fldma() { bound } else { None },
            });
        }
    }
    Ok(SweepResult {
        parameter: spec.parameter,
        points,
        wall_clock: None,
    })
}

/// Two-UE rate bound `2N/(N+ρ) log₂(((γ+1)² − γ²/(M−1)) / (1+γ))`.
pub fn two_ue_bound(gamma: f64, m: usize, num_subcarriers: usize, rho_max: f64) -> Result<f64> {
    if m < 2 {
        return Err(invalid("num_antennas", "the two-UE bound needs M >= 2"));
    }
    if gamma < 0.0 {
        return Err(invalid("snr", "must be non-negative"));
    }
    let n = num_subcarriers as f64;
    let inner = ((gamma + 1.0) * (gamma + 1.0) - gamma * gamma / (m - 1) as f64) / (1.0 + gamma);
    Ok(2.0 * n / (n + rho_max) * inner.log2())
}

/// Multi-UE rate bound `K N/(N+ρ) log₂(γ(M−K+1)/M)`; `None` outside its
/// high-SNR region `γ(M−K+1)/M > 1`.
pub fn multi_ue_bound(gamma: f64, m: usize, k: usize, num_subcarriers: usize, rho_max: f64) -> Option<f64> {
    if k == 0 || k > m {
        return None;
    }
    let arg = gamma * (m - k + 1) as f64 / m as f64;
    if !(arg > 1.0) {
        return None;
    }
    let n = num_subcarriers as f64;
    Some(k as f64 * n / (n + rho_max) * arg.log2())
}

/// FLDMA is expected to beat SDMA for a UE pair when
/// `Sa_M²((sinθ₁ − sinθ₂)/2) > 1/M`.
pub fn collinear_gain_predicate(theta1: f64, theta2: f64, m: usize) -> bool {
    sa(m, (theta1.sin() - theta2.sin()) / 2.0).powi(2) > 1.0 / m as f64
}

/// Fraction of UE pairs with angles uniform in `[−θ_max, θ_max]` for which
/// the predicate holds. The same uniform draws are reused for every
/// `θ_max` under a given seed.
pub fn collinear_gain_fraction(theta_max: f64, m: usize, samples: usize, seed: u64) -> f64 {
    let mut rng = derived_rng(seed, stream::ORACLE, 3);
    let wins = (0..samples)
        .filter(|_| {
            let u1: f64 = rng.random::<f64>() * 2.0 - 1.0;
            let u2: f64 = rng.random::<f64>() * 2.0 - 1.0;
            collinear_gain_predicate(u1 * theta_max, u2 * theta_max, m)
        })
        .count();
    wins as f64 / samples.max(1) as f64
}

/// Sector half-width at which half of the UE pairs satisfy the predicate,
/// found by bisection on `(0, π/2]`.
pub fn collinear_gain_crossover(m: usize, samples: usize, seed: u64) -> f64 {
    let (mut lo, mut hi) = (0.0, core::f64::consts::FRAC_PI_2);
    if collinear_gain_fraction(hi, m, samples, seed) >= 0.5 {
        return hi;
    }
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if collinear_gain_fraction(mid, m, samples, seed) >= 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sample statistics of the permutation-ensemble beam correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationSample {
    pub mean: Complex64,
    /// `E|η − E η|²`.
    pub variance: f64,
    /// Standard error of the mean (total over both components).
    pub mean_stderr: f64,
    pub variance_stderr: f64,
    /// Sample mean of `|η|²`.
    pub mean_sq: f64,
    pub mean_sq_stderr: f64,
}

const ORACLE_DELTA_F: f64 = 1e3;

/// Two locations realising the kernel arguments `(p, q)` for increment
/// [`ORACLE_DELTA_F`]: UE `j` at the origin on broadside, UE `i` at
/// `sinθ = 2p`, `R = q c/δf`.
fn oracle_locations(p: f64, q: f64) -> Result<(PolarLocation, PolarLocation)> {
    if !(p.abs() <= 0.5) || !q.is_finite() {
        return Err(invalid("p", "angle argument must lie in [-1/2, 1/2]"));
    }
    let li = PolarLocation::new(q * SPEED_OF_LIGHT / ORACLE_DELTA_F, (2.0 * p).asin());
    Ok((li, PolarLocation::new(0.0, 0.0)))
}

fn sample_stats(etas: &[Complex64]) -> CorrelationSample {
    let n = etas.len() as f64;
    let mean = etas.iter().sum::<Complex64>() / n;
    let dev2: Vec<f64> = etas.iter().map(|e| (e - mean).norm_sqr()).collect();
    let var = dev2.iter().sum::<f64>() / n;
    let m4 = dev2.iter().map(|d| d * d).sum::<f64>() / n;
    let sq: Vec<f64> = etas.iter().map(|e| e.norm_sqr()).collect();
    let (mean_sq, mean_sq_stderr) = mean_stderr(&sq);
    CorrelationSample {
        mean,
        variance: var,
        mean_stderr: (var / n).sqrt(),
        variance_stderr: ((m4 - var * var).max(0.0) / n).sqrt(),
        mean_sq,
        mean_sq_stderr,
    }
}

/// Brute-force statistics of `η = a_iᴴ a_j` over `num_shuffles` seeded
/// random-permutation plans, computed from the steering vectors.
pub fn permutation_correlation_oracle(p: f64, q: f64, m: usize, num_shuffles: usize, seed: u64) -> Result<CorrelationSample> {
    if num_shuffles == 0 {
        return Err(invalid("num_shuffles", "must be at least 1"));
    }
    let (li, lj) = oracle_locations(p, q)?;
    let etas: Vec<Complex64> = (0..num_shuffles)
        .map(|s| {
            let plan = generate_offsets(
                OffsetScheme::RandomPermutation,
                m,
                OffsetSpacing::Increment(ORACLE_DELTA_F),
                derive_seed(seed, stream::ORACLE, s as u64),
            )?;
            correlation(&steering_tx_baseband(&plan, li), &steering_tx_baseband(&plan, lj))
        })
        .collect::<Result<_>>()?;
    Ok(sample_stats(&etas))
}

/// Exact ensemble statistics by enumerating all `M!` permutations
/// (`M ≤ 8`).
pub fn permutation_correlation_exhaustive(p: f64, q: f64, m: usize) -> Result<CorrelationSample> {
    if m == 0 || m > 8 {
        return Err(invalid("num_elements", "exhaustive enumeration supports 1..=8 elements"));
    }
    let (li, lj) = oracle_locations(p, q)?;
    let mut perm: Vec<usize> = (0..m).collect();
    let mut etas = Vec::new();
    let mut eval = |perm: &[usize]| -> Result<()> {
        let multipliers: Vec<f64> = perm.iter().map(|&z| z as f64).collect();
        let plan = OffsetPlan {
            scheme: OffsetScheme::RandomPermutation,
            delta_f: ORACLE_DELTA_F,
            rho_max: None,
            offsets: multipliers.iter().map(|z| z * ORACLE_DELTA_F).collect(),
            permutation: multipliers,
            seed: 0,
        };
        etas.push(correlation(&steering_tx_baseband(&plan, li), &steering_tx_baseband(&plan, lj))?);
        Ok(())
    };
    // Heap's algorithm
    let mut c = alloc::vec![0usize; m];
    eval(&perm)?;
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            eval(&perm)?;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(sample_stats(&etas))
}

/// Sample mean of `h hᴴ` over `draws` single-path UEs dropped uniformly in
/// the sector, with unit-modulus random-phase gains.
pub fn element_correlation(plan: &OffsetPlan, theta_max: f64, r_max: f64, draws: usize, seed: u64) -> Result<CMatrix> {
    if draws == 0 {
        return Err(invalid("draws", "must be at least 1"));
    }
    let m = plan.num_elements();
    let mut rng = derived_rng(seed, stream::ORACLE, 10);
    let locations = place_ues(draws, theta_max, r_max, &mut rng)?;
    let mut acc = CMatrix::zeros(m, m);
    for loc in locations {
        let ue = generate_multipath(loc, 0, 0.0, theta_max, r_max, NlosGainModel::default(), &mut rng)?;
        let h = channel_vector(&ue.paths, plan);
        acc += &h * h.adjoint();
    }
    Ok(acc / Complex64::new(draws as f64, 0.0))
}

/// A named group of sweeps reproducing one figure.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub sweeps: Vec<(String, SweepSpec)>,
}

pub const PRESET_NAMES: [&str; 8] = ["fig6a", "fig6b", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12"];

fn degrees(values: &[f64]) -> Vec<f64> {
    values.iter().map(|&d| deg_to_rad(d)).collect()
}

fn sweep_label(rho: f64, extra: &str) -> String {
    let mut s = String::from("rho_max=");
    push_num(&mut s, rho);
    s.push_str(extra);
    s
}

fn push_num(s: &mut String, v: f64) {
    use core::fmt::Write;
    let _ = write!(s, "{v}");
}

fn rho_sweeps(
    base: &Scenario,
    rhos: &[f64],
    parameter: SweptParameter,
    values: &[f64],
    fldma: &[Scheme],
    sdma: &[Scheme],
    extra: &str,
) -> Vec<(String, SweepSpec)> {
    rhos.iter()
        .enumerate()
        .map(|(i, &rho)| {
            let mut s = base.clone();
            s.plan.rho_max = rho;
            s.schemes = fldma.to_vec();
            // the SDMA curve does not depend on ρ; run it once
            if i == 0 {
                s.schemes.extend_from_slice(sdma);
            }
            (
                sweep_label(rho, extra),
                SweepSpec {
                    base: s,
                    parameter,
                    values: values.to_vec(),
                },
            )
        })
        .collect()
}

/// Figure presets on the default setup with `trials` Monte-Carlo samples.
pub fn preset(name: &str, trials: usize) -> Option<Preset> {
    let mut base = Scenario::reference_default();
    base.trials = trials;
    let mmse = [Scheme::FldmaMmse];
    let sdma = [Scheme::SdmaMmse];
    let p = match name {
        "fig6a" | "fig6b" => {
            base.num_ues = 2;
            base.theta_max = deg_to_rad(if name == "fig6a" { 5.0 } else { 20.0 });
            let snr: Vec<f64> = (0..=6).map(|i| 5.0 * i as f64).collect();
            Preset {
                name: if name == "fig6a" { "fig6a" } else { "fig6b" },
                description: "two UEs, single path: spectral efficiency vs SNR against the two-UE bound",
                sweeps: rho_sweeps(&base, &[1.0, 10.0, 50.0], SweptParameter::Snr, &snr, &mmse, &[], ""),
            }
        }
        "fig7" => {
            base.num_ues = 2;
            base.snr_db = 20.0;
            let theta = degrees(&[0.0, 1.0, 2.0, 3.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]);
            Preset {
                name: "fig7",
                description: "two UEs at 20 dB: FLDMA vs SDMA over the sector half-width",
                sweeps: rho_sweeps(&base, &[1.0, 10.0, 50.0], SweptParameter::ThetaMax, &theta, &mmse, &sdma, ""),
            }
        }
        "fig8" => {
            let ks: Vec<f64> = (1..=10).map(|i| 10.0 * i as f64).collect();
            Preset {
                name: "fig8",
                description: "single path, 30 dB, rho_max = 30: all four schemes over the number of UEs",
                sweeps: alloc::vec![(
                    sweep_label(30.0, ""),
                    SweepSpec {
                        base,
                        parameter: SweptParameter::NumUes,
                        values: ks,
                    }
                )],
            }
        }
        "fig9" => {
            let paths = [0.0, 2.0, 4.0, 6.0, 8.0];
            let sweeps = [0.0, 1.0, 10.0]
                .iter()
                .map(|&kappa| {
                    let mut s = base.clone();
                    s.rician_kappa = kappa;
                    s.schemes = alloc::vec![Scheme::FldmaMmse, Scheme::SdmaMmse];
                    let mut label = String::from("kappa=");
                    push_num(&mut label, kappa);
                    (
                        label,
                        SweepSpec {
                            base: s,
                            parameter: SweptParameter::NumPaths,
                            values: paths.to_vec(),
                        },
                    )
                })
                .collect();
            Preset {
                name: "fig9",
                description: "100 UEs: FLDMA vs SDMA over the number of NLoS paths",
                sweeps,
            }
        }
        "fig10" => {
            base.num_paths = 4;
            base.schemes = alloc::vec![Scheme::FldmaMmse, Scheme::SdmaMmse];
            Preset {
                name: "fig10",
                description: "100 UEs, 4 NLoS paths: FLDMA vs SDMA over the Rician factor",
                sweeps: alloc::vec![(
                    String::from("num_paths=4"),
                    SweepSpec {
                        base,
                        parameter: SweptParameter::RicianKappa,
                        values: alloc::vec![0.0, 1.0, 2.0, 5.0, 10.0, 20.0],
                    }
                )],
            }
        }
        "fig11" | "fig12" => {
            let (parameter, values) = if name == "fig11" {
                (SweptParameter::ThetaMax, degrees(&[5.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0]))
            } else {
                (SweptParameter::RMax, alloc::vec![500.0, 1000.0, 2000.0, 3000.0, 4000.0])
            };
            let mut sweeps = Vec::new();
            for k in [50usize, 100] {
                let mut s = base.clone();
                s.num_ues = k;
                let mut extra = String::from(",K=");
                push_num(&mut extra, k as f64);
                sweeps.extend(rho_sweeps(&s, &[1.0, 10.0, 30.0, 50.0], parameter, &values, &mmse, &sdma, &extra));
            }
            Preset {
                name: if name == "fig11" { "fig11" } else { "fig12" },
                description: if name == "fig11" {
                    "FLDMA with several rho_max vs SDMA over the sector half-width"
                } else {
                    "FLDMA with several rho_max vs SDMA over the sector radius"
                },
                sweeps,
            }
        }
        _ => return None,
    };
    Some(p)
}

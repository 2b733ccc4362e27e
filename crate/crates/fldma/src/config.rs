//! TOML scenario configuration.
//!
//! A resolved configuration is built in three layers: built-in defaults
//! (the 30 GHz / 128-antenna setup), then the optional file, then
//! `section.key=value` overrides. Unknown keys are rejected at every layer.
//! Angles are given in degrees here and converted to radians once.

use std::path::Path;

use fldma_core::array::{ArrayGeometry, OffsetScheme, OffsetSpacing};
use fldma_core::channel::NlosGainModel;
use fldma_core::experiments::{OverheadConvention, PlanSpec, Scenario, Scheme, SweepSpec, SweptParameter};
use fldma_core::math::deg_to_rad;
use fldma_core::precoding::{PowerNormalization, SinrEvaluation};
use fldma_core::waveform::OfdmGrid;
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub array: ArrayConfig,
    pub ofdm: OfdmConfig,
    pub offsets: OffsetConfig,
    pub scenario: ScenarioConfig,
    pub run: RunConfig,
    pub sweep: SweepConfig,
    pub beampattern: BeampatternConfig,
    pub correlation: CorrelationConfig,
    pub ici: IciConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArrayConfig {
    pub num_antennas: usize,
    pub carrier_freq_hz: f64,
}

impl Default for ArrayConfig {
    fn default() -> Self {
        Self {
            num_antennas: 128,
            carrier_freq_hz: 30e9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OfdmConfig {
    pub num_subcarriers: usize,
    pub subcarrier_spacing_hz: f64,
    pub cp_length: usize,
}

impl Default for OfdmConfig {
    fn default() -> Self {
        Self {
            num_subcarriers: 512,
            subcarrier_spacing_hz: 15e3,
            cp_length: 128,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    Zero,
    UniformIncreasing,
    Logarithmic,
    RandomPermutation,
    SymmetricRandomPermutation,
}

impl From<SchemeName> for OffsetScheme {
    fn from(s: SchemeName) -> Self {
        match s {
            SchemeName::Zero => OffsetScheme::Zero,
            SchemeName::UniformIncreasing => OffsetScheme::UniformIncreasing,
            SchemeName::Logarithmic => OffsetScheme::Logarithmic,
            SchemeName::RandomPermutation => OffsetScheme::RandomPermutation,
            SchemeName::SymmetricRandomPermutation => OffsetScheme::SymmetricRandomPermutation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverheadName {
    RhoMax,
    OccupiedBand,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OffsetConfig {
    pub scheme: SchemeName,
    pub rho_max: f64,
    /// Explicit increment cell; when set it replaces the `rho_max` rule
    /// (beampattern and correlation commands only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_f_hz: Option<f64>,
    pub overhead: OverheadName,
    pub seed: u64,
}

impl Default for OffsetConfig {
    fn default() -> Self {
        Self {
            scheme: SchemeName::RandomPermutation,
            rho_max: 30.0,
            delta_f_hz: None,
            overhead: OverheadName::RhoMax,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NlosName {
    ComplexGaussian,
    ConstantModulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerName {
    Total,
    Equal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SinrName {
    General,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub num_ues: usize,
    pub theta_max_deg: f64,
    pub r_max_m: f64,
    pub num_paths: usize,
    pub rician_kappa: f64,
    pub nlos_model: NlosName,
    pub snr_db: f64,
    pub power_normalization: PowerName,
    pub mmse_sinr: SinrName,
    pub schemes: Vec<String>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            num_ues: 100,
            theta_max_deg: 60.0,
            r_max_m: 3000.0,
            num_paths: 0,
            rician_kappa: 0.0,
            nlos_model: NlosName::ComplexGaussian,
            snr_db: 30.0,
            power_normalization: PowerName::Total,
            mmse_sinr: SinrName::General,
            schemes: Scheme::ALL.iter().map(|s| s.label().to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub trials: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { trials: 10_000, seed: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterName {
    SnrDb,
    NumUes,
    ThetaMaxDeg,
    RMaxM,
    RhoMax,
    NumPaths,
    RicianKappa,
}

impl ParameterName {
    pub fn to_core(self) -> SweptParameter {
        match self {
            ParameterName::SnrDb => SweptParameter::Snr,
            ParameterName::NumUes => SweptParameter::NumUes,
            ParameterName::ThetaMaxDeg => SweptParameter::ThetaMax,
            ParameterName::RMaxM => SweptParameter::RMax,
            ParameterName::RhoMax => SweptParameter::RhoMax,
            ParameterName::NumPaths => SweptParameter::NumPaths,
            ParameterName::RicianKappa => SweptParameter::RicianKappa,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub parameter: ParameterName,
    pub values: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            parameter: ParameterName::NumUes,
            values: (1..=10).map(|i| 10.0 * i as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BeampatternConfig {
    pub focus_distance_m: f64,
    pub focus_angle_deg: f64,
    pub distance_min_m: f64,
    pub distance_max_m: f64,
    pub distance_points: usize,
    pub angle_min_deg: f64,
    pub angle_max_deg: f64,
    pub angle_points: usize,
}

impl Default for BeampatternConfig {
    fn default() -> Self {
        Self {
            focus_distance_m: 1500.0,
            focus_angle_deg: 0.0,
            distance_min_m: 0.0,
            distance_max_m: 3000.0,
            distance_points: 121,
            angle_min_deg: -60.0,
            angle_max_deg: 60.0,
            angle_points: 121,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorrelationConfig {
    pub num_elements: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub p_points: usize,
    pub q_min: f64,
    pub q_max: f64,
    pub q_points: usize,
    pub shuffles: usize,
}

impl Default for CorrelationConfig {
    fn default() -> Self {
        Self {
            num_elements: 128,
            p_min: -0.02,
            p_max: 0.02,
            p_points: 21,
            q_min: -0.02,
            q_max: 0.02,
            q_points: 21,
            shuffles: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IciConfig {
    pub rho_values: Vec<f64>,
}

impl Default for IciConfig {
    fn default() -> Self {
        Self {
            rho_values: vec![0.02, 0.05, 0.1],
        }
    }
}

/// Evenly spaced grid including both ends.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        n => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn merge(base: &mut Table, overlay: Table) {
    for (key, value) in overlay {
        match (base.get_mut(&key), value) {
            (Some(Value::Table(dst)), Value::Table(src)) => merge(dst, src),
            (_, value) => {
                base.insert(key, value);
            }
        }
    }
}

fn parse_override_value(raw: &str) -> Value {
    let probe = format!("v = {raw}");
    match toml::from_str::<Table>(&probe) {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(raw.to_string())),
        Err(_) => Value::String(raw.to_string()),
    }
}

fn apply_override(table: &mut Table, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| CliError::config(format!("override `{item}` is not of the form key=value")))?;
    let parts: Vec<&str> = key.trim().split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::config(format!("override key `{key}` is malformed")));
    }
    let mut cursor = table;
    for part in &parts[..parts.len() - 1] {
        let entry = cursor
            .entry(part.to_string())
            .or_insert_with(|| Value::Table(Table::new()));
        cursor = match entry {
            Value::Table(t) => t,
            _ => return Err(CliError::config(format!("override key `{key}`: `{part}` is not a section"))),
        };
    }
    cursor.insert(parts[parts.len() - 1].to_string(), parse_override_value(raw.trim()));
    Ok(())
}

impl Config {
    /// Defaults, then the file (if any), then the overrides.
    pub fn resolve(file: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let text = match file {
            Some(path) => Some(std::fs::read_to_string(path)?),
            None => None,
        };
        Self::resolve_str(text.as_deref(), overrides)
    }

    pub fn resolve_str(file: Option<&str>, overrides: &[String]) -> Result<Self> {
        let mut table = match Value::try_from(Config::default()) {
            Ok(Value::Table(t)) => t,
            _ => unreachable!("defaults serialise to a table"),
        };
        if let Some(text) = file {
            // reject unknown keys in the file itself before merging
            let from_file: Config = toml::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
            let _ = from_file;
            let parsed: Table = toml::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
            merge(&mut table, parsed);
        }
        for item in overrides {
            apply_override(&mut table, item)?;
        }
        let config: Config = Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::config(e.to_string()))?;
        config.check()?;
        Ok(config)
    }

    fn check(&self) -> Result<()> {
        for s in &self.scenario.schemes {
            if Scheme::from_label(s).is_none() {
                return Err(CliError::config(format!(
                    "unknown scheme `{s}` (expected FLDMA_MMSE, FLDMA_ZF, SDMA_MMSE or SDMA_ZF)"
                )));
            }
        }
        Ok(())
    }

    /// The resolved configuration as TOML, for provenance headers.
    pub fn echo(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }

    pub fn geometry(&self) -> Result<ArrayGeometry> {
        Ok(ArrayGeometry::half_wavelength(self.array.num_antennas, self.array.carrier_freq_hz)?)
    }

    pub fn grid(&self) -> Result<OfdmGrid> {
        Ok(OfdmGrid::new(
            self.ofdm.num_subcarriers,
            self.ofdm.subcarrier_spacing_hz,
            self.ofdm.cp_length,
        )?)
    }

    /// Increment rule for standalone plans: explicit `delta_f_hz` if given,
    /// otherwise derived from `rho_max`.
    pub fn offset_spacing(&self) -> OffsetSpacing {
        match self.offsets.delta_f_hz {
            Some(df) => OffsetSpacing::Increment(df),
            None => OffsetSpacing::MaxRatio {
                rho_max: self.offsets.rho_max,
                subcarrier_spacing: self.ofdm.subcarrier_spacing_hz,
            },
        }
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let sc = &self.scenario;
        let schemes = sc
            .schemes
            .iter()
            .map(|s| Scheme::from_label(s).ok_or_else(|| CliError::config(format!("unknown scheme `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Scenario {
            geometry: self.geometry()?,
            grid: self.grid()?,
            plan: PlanSpec {
                scheme: self.offsets.scheme.into(),
                rho_max: self.offsets.rho_max,
            },
            num_ues: sc.num_ues,
            theta_max: deg_to_rad(sc.theta_max_deg),
            r_max: sc.r_max_m,
            num_paths: sc.num_paths,
            rician_kappa: sc.rician_kappa,
            nlos_model: match sc.nlos_model {
                NlosName::ComplexGaussian => NlosGainModel::ComplexGaussian,
                NlosName::ConstantModulus => NlosGainModel::ConstantModulus,
            },
            snr_db: sc.snr_db,
            power: match sc.power_normalization {
                PowerName::Total => PowerNormalization::Total,
                PowerName::Equal => PowerNormalization::Equal,
            },
            mmse_sinr: match sc.mmse_sinr {
                SinrName::General => SinrEvaluation::General,
                SinrName::ClosedForm => SinrEvaluation::ClosedForm,
            },
            overhead: match self.offsets.overhead {
                OverheadName::RhoMax => OverheadConvention::RhoMax,
                OverheadName::OccupiedBand => OverheadConvention::OccupiedBand,
            },
            schemes,
            trials: self.run.trials,
            seed: self.run.seed,
        })
    }

    pub fn sweep(&self) -> Result<SweepSpec> {
        let parameter = self.sweep.parameter.to_core();
        let values = self
            .sweep
            .values
            .iter()
            .map(|&v| if parameter == SweptParameter::ThetaMax { deg_to_rad(v) } else { v })
            .collect();
        Ok(SweepSpec {
            base: self.scenario()?,
            parameter,
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let c = Config::resolve_str(None, &[]).unwrap();
        assert_eq!(c, Config::default());
        c.scenario().unwrap().validate().unwrap();
    }

    #[test]
    fn file_then_overrides() {
        let file = "[scenario]\nnum_ues = 20\nsnr_db = 10\n";
        let c = Config::resolve_str(Some(file), &["scenario.snr_db=25".into(), "offsets.scheme=zero".into()]).unwrap();
        assert_eq!(c.scenario.num_ues, 20);
        assert_eq!(c.scenario.snr_db, 25.0);
        assert_eq!(c.offsets.scheme, SchemeName::Zero);
        assert_eq!(c.array.num_antennas, 128);
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = Config::resolve_str(Some("[scenario]\nnum_uez = 3\n"), &[]).unwrap_err();
        assert!(err.to_string().contains("num_uez"), "{err}");
        let err = Config::resolve_str(None, &["scenario.snr=3".into()]).unwrap_err();
        assert!(err.to_string().contains("snr"), "{err}");
        let err = Config::resolve_str(None, &["bogus.key=3".into()]).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        assert_eq!(err.exit_code(), 1);
        assert!(Config::resolve_str(None, &["scenario.schemes=[\"MAGIC\"]".into()]).is_err());
        assert!(Config::resolve_str(None, &["no_equals".into()]).is_err());
    }

    #[test]
    fn angles_convert_once() {
        let c = Config::resolve_str(None, &["scenario.theta_max_deg=30".into(), "sweep.parameter=\"theta_max_deg\"".into(), "sweep.values=[0, 15]".into()]).unwrap();
        let s = c.scenario().unwrap();
        assert!((s.theta_max - std::f64::consts::FRAC_PI_6).abs() < 1e-15);
        let sw = c.sweep().unwrap();
        assert!((sw.values[1] - 15f64.to_radians()).abs() < 1e-15);
    }

    #[test]
    fn echo_round_trips() {
        let c = Config::resolve_str(None, &["run.trials=7".into(), "scenario.rician_kappa=inf".into()]).unwrap();
        let again = Config::resolve_str(Some(&c.echo()), &[]).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn linspace_ends() {
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(linspace(2.0, 5.0, 1), vec![2.0]);
    }
}

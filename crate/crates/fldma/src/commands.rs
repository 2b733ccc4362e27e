//! One function per subcommand; each returns the table to emit.

use std::time::Instant;

use fldma_core::array::{
    beampattern, correlation_mean, correlation_var, generate_offsets, OffsetSpacing, PolarLocation,
};
use fldma_core::experiments::{
    permutation_correlation_oracle, monte_carlo_with, preset, scenario_bound, SweepResult, SweepSpec, SweptParameter,
    TrialRunner, PRESET_NAMES,
};
use fldma_core::math::deg_to_rad;
use fldma_core::waveform::{ici_coefficients, slight_offset_error};

use crate::config::{linspace, Config};
use crate::error::{CliError, Result};
use crate::output::{fmt_num, fmt_opt, Table};

pub const PERFORMANCE_COLUMNS: [&str; 9] = [
    "sweep_value",
    "scheme",
    "mean_se",
    "stderr",
    "ci95",
    "bound",
    "series",
    "trials",
    "ill_conditioned",
];

/// Sweep values as shown to users: angles back in degrees.
fn display_value(parameter: SweptParameter, v: f64) -> f64 {
    if parameter == SweptParameter::ThetaMax {
        v.to_degrees()
    } else {
        v
    }
}

fn push_performance(table: &mut Table, series: &str, result: &SweepResult) {
    for p in &result.points {
        table.push(vec![
            fmt_num(display_value(result.parameter, p.value)),
            p.scheme.label().to_string(),
            fmt_num(p.mean),
            fmt_num(p.stderr),
            fmt_num(p.ci95),
            fmt_opt(p.bound),
            series.to_string(),
            p.trials.to_string(),
            p.ill_conditioned.to_string(),
        ]);
    }
}

fn timed_sweep(spec: &SweepSpec, runner: &dyn TrialRunner) -> Result<SweepResult> {
    let start = Instant::now();
    let mut result = monte_carlo_with(spec, runner)?;
    result.wall_clock = Some(start.elapsed());
    Ok(result)
}

fn report_clock(label: &str, result: &SweepResult) {
    if let Some(d) = result.wall_clock {
        eprintln!("{label}: wall clock {:.3} s", d.as_secs_f64());
    }
}

pub fn beampattern_cmd(cfg: &Config) -> Result<Table> {
    let bp = &cfg.beampattern;
    let plan = generate_offsets(
        cfg.offsets.scheme.into(),
        cfg.array.num_antennas,
        cfg.offset_spacing(),
        cfg.offsets.seed,
    )?;
    let focus = PolarLocation::new(bp.focus_distance_m, deg_to_rad(bp.focus_angle_deg));
    let r = linspace(bp.distance_min_m, bp.distance_max_m, bp.distance_points);
    let theta_deg = linspace(bp.angle_min_deg, bp.angle_max_deg, bp.angle_points);
    if theta_deg.iter().any(|t| t.abs() > 90.0) {
        return Err(CliError::config("beampattern angles must lie in [-90, 90] degrees"));
    }
    let theta: Vec<f64> = theta_deg.iter().map(|&d| deg_to_rad(d)).collect();
    let mags = beampattern(&plan, focus, &r, &theta)?;
    let mut table = Table::new("beampattern", &["distance_m", "angle_deg", "magnitude"]);
    for (i, &ri) in r.iter().enumerate() {
        for (j, &tj) in theta_deg.iter().enumerate() {
            table.push(vec![fmt_num(ri), fmt_num(tj), fmt_num(mags[(i, j)])]);
        }
    }
    Ok(table)
}

pub fn correlation_stats_cmd(cfg: &Config) -> Result<Table> {
    let c = &cfg.correlation;
    let mut table = Table::new(
        "correlation-stats",
        &["p", "q", "mean_re", "mean_im", "var", "oracle_mean_re", "oracle_mean_im", "oracle_var", "stderr"],
    );
    for p in linspace(c.p_min, c.p_max, c.p_points) {
        for q in linspace(c.q_min, c.q_max, c.q_points) {
            let mean = correlation_mean(p, q, c.num_elements);
            let var = correlation_var(p, q, c.num_elements);
            let s = permutation_correlation_oracle(p, q, c.num_elements, c.shuffles, cfg.run.seed)?;
            table.push(vec![
                fmt_num(p),
                fmt_num(q),
                fmt_num(mean.re),
                fmt_num(mean.im),
                fmt_num(var),
                fmt_num(s.mean.re),
                fmt_num(s.mean.im),
                fmt_num(s.variance),
                fmt_num(s.mean_stderr),
            ]);
        }
    }
    Ok(table)
}

pub fn ici_check_cmd(cfg: &Config) -> Result<Table> {
    let grid = cfg.grid()?;
    let mut table = Table::new("ici-check", &["rho_max", "frobenius_error", "max_alpha_dev", "max_beta"]);
    for &rho in &cfg.ici.rho_values {
        let plan = generate_offsets(
            cfg.offsets.scheme.into(),
            cfg.array.num_antennas,
            OffsetSpacing::MaxRatio {
                rho_max: rho,
                subcarrier_spacing: grid.subcarrier_spacing(),
            },
            cfg.offsets.seed,
        )?;
        let ici = ici_coefficients(&plan, &grid);
        table.push(vec![
            fmt_num(rho),
            fmt_num(slight_offset_error(&plan, &grid)),
            fmt_num(ici.max_alpha_deviation()),
            fmt_num(ici.max_leakage()),
        ]);
    }
    Ok(table)
}

/// One Monte-Carlo point at the configured scenario.
pub fn simulate_cmd(cfg: &Config, runner: &dyn TrialRunner) -> Result<Table> {
    let base = cfg.scenario()?;
    let spec = SweepSpec {
        values: vec![base.snr_db],
        base,
        parameter: SweptParameter::Snr,
    };
    let result = timed_sweep(&spec, runner)?;
    report_clock("simulate", &result);
    let mut table = Table::new("performance", &PERFORMANCE_COLUMNS);
    push_performance(&mut table, "simulate", &result);
    Ok(table)
}

pub fn sweep_cmd(cfg: &Config, runner: &dyn TrialRunner) -> Result<Table> {
    let spec = cfg.sweep()?;
    let result = timed_sweep(&spec, runner)?;
    report_clock("sweep", &result);
    let mut table = Table::new("performance", &PERFORMANCE_COLUMNS);
    push_performance(&mut table, spec.parameter.label(), &result);
    Ok(table)
}

/// Closed-form bounds along the configured sweep; no trials are run.
pub fn bounds_cmd(cfg: &Config) -> Result<Table> {
    let spec = cfg.sweep()?;
    spec.validate()?;
    let mut table = Table::new("performance", &PERFORMANCE_COLUMNS);
    for &v in &spec.values {
        let bound = scenario_bound(&spec.scenario_at(v)?);
        table.push(vec![
            fmt_num(display_value(spec.parameter, v)),
            "BOUND".into(),
            fmt_opt(bound),
            "0".into(),
            "0".into(),
            fmt_opt(bound),
            spec.parameter.label().into(),
            "0".into(),
            "0".into(),
        ]);
    }
    Ok(table)
}

pub fn preset_cmd(cfg: &Config, name: &str, runner: &dyn TrialRunner) -> Result<Table> {
    let p = preset(name, cfg.run.trials).ok_or_else(|| {
        CliError::config(format!("unknown preset `{name}` (available: {})", PRESET_NAMES.join(", ")))
    })?;
    eprintln!("{}: {}", p.name, p.description);
    let mut table = Table::new("performance", &PERFORMANCE_COLUMNS);
    for (label, mut spec) in p.sweeps {
        spec.base.seed = cfg.run.seed;
        let result = timed_sweep(&spec, runner)?;
        report_clock(&format!("{} {label}", p.name), &result);
        push_performance(&mut table, &label, &result);
    }
    Ok(table)
}

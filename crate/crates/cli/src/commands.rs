use std::f64::consts::PI;
use std::path::Path;

use lohps::correlation::{g2_curve, g2_zero, CurveParams, HbtConfig};
use lohps::interference::{beta, coincidence_pattern, BeatParams, Beta};
use lohps::oracle::{enumerate_output_distribution, monte_carlo_g2, monte_carlo_heralded, numeric_p11, McConfig};
use lohps::qkd::{evaluate, max_distance, Analysis, DistanceFlag, SourceSpec};
use lohps::statistics::{
    antibunching_series, faint_laser_series, herald_total, heralded_statistics, output_joint, truncation_error,
    HeraldConfig, TruncationMode,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::output::{render, write};
use crate::CliError;

fn format_or(cfg: &RunConfig, default: Format) -> Format {
    cfg.output.format.unwrap_or(default)
}

fn compute<T>(r: lohps::Result<T>) -> Result<T, CliError> {
    r.map_err(CliError::Compute)
}

#[derive(Serialize)]
struct BeatRow {
    tau_s: f64,
    beta: f64,
    c_coinc: f64,
}

pub fn beat_pattern(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.beat.validate()?;
    let params = cfg.beat.params();
    let rows: Vec<BeatRow> = compute(
        cfg.beat
            .tau_grid()
            .into_iter()
            .map(|tau| {
                let p = params.with_tau(tau);
                Ok(BeatRow {
                    tau_s: tau,
                    beta: beta(&p)?.value(),
                    c_coinc: coincidence_pattern(&p)?,
                })
            })
            .collect(),
    )?;
    let bytes = render("beat-pattern", &rows, format_or(cfg, Format::Csv), None)?;
    write(cfg.output.path.as_deref(), &bytes)
}

#[derive(Serialize)]
struct HeraldRow {
    mu: f64,
    eta_c: f64,
    beta: f64,
    p_vacuum: f64,
    p_single: f64,
    p_multi: f64,
    herald_rate: f64,
    truncation_error_grid: f64,
    truncation_error_pair: f64,
    truncation_warning: bool,
    series_vacuum: Option<f64>,
    series_single: Option<f64>,
    series_multi: Option<f64>,
    faint_vacuum: Option<f64>,
    faint_single: Option<f64>,
    faint_multi: Option<f64>,
}

fn herald_row(c: &HeraldConfig) -> lohps::Result<HeraldRow> {
    let stats = heralded_statistics(c)?;
    let table = c.eta_c == 1.0;
    let series = table.then(|| antibunching_series(c.mu));
    let faint = table.then(|| faint_laser_series(c.mu));
    Ok(HeraldRow {
        mu: c.mu,
        eta_c: c.eta_c,
        beta: c.beta.value(),
        p_vacuum: stats.p_vacuum,
        p_single: stats.p_single,
        p_multi: stats.p_multi,
        herald_rate: herald_total(c)?,
        truncation_error_grid: truncation_error(c.mu, TruncationMode::Grid),
        truncation_error_pair: truncation_error(c.mu, TruncationMode::PairSum),
        truncation_warning: c.truncation_warning(),
        series_vacuum: series.map(|s| s.0),
        series_single: series.map(|s| s.1),
        series_multi: series.map(|s| s.2),
        faint_vacuum: faint.map(|s| s.0),
        faint_single: faint.map(|s| s.1),
        faint_multi: faint.map(|s| s.2),
    })
}

pub fn herald_stats(cfg: &RunConfig) -> Result<(), CliError> {
    let configs = cfg.herald.configs()?;
    for c in configs.iter().filter(|c| c.truncation_warning()) {
        eprintln!(
            "lohps: warning: mu = {} is beyond the three-photon truncation's accurate range",
            c.mu
        );
    }
    let rows: Vec<HeraldRow> = compute(configs.iter().map(herald_row).collect())?;
    let bytes = render("herald-stats", &rows, format_or(cfg, Format::Csv), None)?;
    write(cfg.output.path.as_deref(), &bytes)
}

#[derive(Serialize)]
struct G2Row {
    mu: f64,
    eta_c: f64,
    beta: f64,
    eta_f: f64,
    eta_g: f64,
    p_single: f64,
    p_multi: f64,
    g2_direct: f64,
    g2_eq25: f64,
    relative_difference: f64,
}

#[derive(Serialize)]
struct G2CurveRow {
    tau_s: f64,
    beta: f64,
    g2: f64,
}

pub fn g2(cfg: &RunConfig, curve_out: Option<&Path>) -> Result<(), CliError> {
    let herald = cfg.g2.herald()?;
    let hbt = cfg.hbt.config()?;
    let grid = match curve_out {
        Some(_) => {
            cfg.beat.params().validate()?;
            Some(cfg.g2.curve_grid(cfg.beat.delta)?)
        }
        None => None,
    };
    let format = format_or(cfg, Format::Csv);

    let stats = compute(heralded_statistics(&herald))?;
    let g = compute(g2_zero(&stats, &hbt))?;
    let row = G2Row {
        mu: herald.mu,
        eta_c: herald.eta_c,
        beta: herald.beta.value(),
        eta_f: hbt.eta_f,
        eta_g: hbt.eta_g,
        p_single: stats.p_single,
        p_multi: stats.p_multi,
        g2_direct: g.g2_direct,
        g2_eq25: g.g2_eq25,
        relative_difference: g.relative_difference(),
    };
    let report = render("g2", &[row], format, None)?;

    let curve = match grid {
        Some(grid) => {
            let params = CurveParams {
                mu: herald.mu,
                eta_c: herald.eta_c,
                sigma: cfg.beat.sigma(),
                delta: cfg.beat.delta,
                hbt,
            };
            let rows: Vec<G2CurveRow> = compute(g2_curve(&grid, &params))?
                .into_iter()
                .map(|p| G2CurveRow {
                    tau_s: p.tau,
                    beta: p.beta,
                    g2: p.g2,
                })
                .collect();
            Some(render("g2-curve", &rows, format, None)?)
        }
        None => None,
    };

    if let (Some(path), Some(bytes)) = (curve_out, &curve) {
        write(Some(path), bytes)?;
    }
    write(cfg.output.path.as_deref(), &report)
}

#[derive(Serialize)]
struct QkdRow {
    source: &'static str,
    analysis: &'static str,
    distance_km: f64,
    mu_used: Option<f64>,
    q_mu: f64,
    e_mu: f64,
    q1: f64,
    e1: f64,
    rate: f64,
}

/// Source × analysis pairs to run. The ideal source has no multi-photon
/// pulses, so both analyses coincide and it is run once.
fn curve_set(cfg: &RunConfig) -> Result<Vec<(SourceSpec, Analysis)>, CliError> {
    let specs = cfg.qkd.source_specs()?;
    cfg.channel.validate()?;
    let mut set = Vec::new();
    for spec in specs {
        for (i, &analysis) in cfg.qkd.analyses.iter().enumerate() {
            if spec == SourceSpec::IdealSingle && i > 0 {
                continue;
            }
            set.push((spec, analysis));
        }
    }
    Ok(set)
}

pub fn qkd_curve(cfg: &RunConfig) -> Result<(), CliError> {
    let set = curve_set(cfg)?;
    let distances = cfg.qkd.distances()?;
    let jobs: Vec<(SourceSpec, Analysis, f64)> = set
        .iter()
        .flat_map(|&(s, a)| distances.iter().map(move |&d| (s, a, d)))
        .collect();
    let rows: Vec<QkdRow> = compute(
        jobs.par_iter()
            .map(|&(source, analysis, d)| {
                let r = evaluate(&source, &cfg.channel, d, analysis, &cfg.qkd.mu_bounds)?;
                Ok(QkdRow {
                    source: source.name(),
                    analysis: analysis.name(),
                    distance_km: r.distance_km,
                    mu_used: r.mu_used,
                    q_mu: r.q_mu,
                    e_mu: r.e_mu,
                    q1: r.q1,
                    e1: r.e1,
                    rate: r.rate,
                })
            })
            .collect(),
    )?;
    let bytes = render("qkd-curve", &rows, format_or(cfg, Format::Csv), None)?;
    write(cfg.output.path.as_deref(), &bytes)
}

#[derive(Serialize)]
struct MaxDistRow {
    source: &'static str,
    analysis: &'static str,
    max_distance_km: f64,
    flag: DistanceFlag,
}

pub fn qkd_maxdist(cfg: &RunConfig) -> Result<(), CliError> {
    let set = curve_set(cfg)?;
    let rows: Vec<MaxDistRow> = compute(
        set.par_iter()
            .map(|&(source, analysis)| {
                let m = max_distance(&source, &cfg.channel, analysis, &cfg.qkd.mu_bounds)?;
                Ok(MaxDistRow {
                    source: source.name(),
                    analysis: analysis.name(),
                    max_distance_km: m.distance_km,
                    flag: m.flag,
                })
            })
            .collect(),
    )?;
    let bytes = render("qkd-maxdist", &rows, format_or(cfg, Format::Csv), None)?;
    write(cfg.output.path.as_deref(), &bytes)
}

#[derive(Serialize)]
struct Check {
    name: String,
    expected: f64,
    observed: f64,
    tolerance: f64,
    pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, expected: f64, observed: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            expected,
            observed,
            tolerance,
            pass: tolerance.is_finite() && observed.is_finite() && (observed - expected).abs() <= tolerance,
        }
    }
}

const QUADRATURE_REL_TOL: f64 = 1e-3;
const ENUMERATION_TOL: f64 = 1e-14;
const MC_STATS_SE: f64 = 4.0;
const MC_G2_SE: f64 = 3.0;

fn oracle_checks(cfg: &RunConfig, mc: &McConfig, hbt: &HbtConfig) -> lohps::Result<Vec<Check>> {
    let o = &cfg.oracle;
    let scale = o.tolerance_scale;
    let mut checks = Vec::new();

    // σ = 1, so Δ = σΔ
    let delta = o.sigma_delta;
    let quad: Vec<(usize, f64, f64)> = (0..5)
        .into_par_iter()
        .map(|k| {
            let tau = k as f64 * 0.75 * PI / delta;
            Ok((k, tau, numeric_p11(tau, 1.0, delta, &o.quadrature)?))
        })
        .collect::<lohps::Result<_>>()?;
    for (k, tau, observed) in quad {
        let b = beta(&BeatParams::new(tau, 1.0, delta))?.value();
        let expected = 0.5 * (1.0 - b);
        let tol = QUADRATURE_REL_TOL * expected.abs().max(1e-6) * scale;
        checks.push(Check::new(format!("quadrature_p11_tau{k}"), expected, observed, tol));
    }

    let mut betas = vec![o.beta, -1.0, 0.0, 1.0];
    betas.sort_by(f64::total_cmp);
    betas.dedup();
    for b in betas {
        let beta = Beta::new(b)?;
        let joint = enumerate_output_distribution(o.mu, b);
        let herald = HeraldConfig::new(o.mu, o.eta_c, beta)?;
        let mut worst: f64 = 0.0;
        for ((r, s), p) in joint.iter() {
            worst = worst.max((p - output_joint(r, s, &herald)?).abs());
        }
        checks.push(Check::new(
            format!("enumeration_mu{}_beta{}", o.mu, b),
            0.0,
            worst,
            ENUMERATION_TOL * scale,
        ));
    }

    let herald = HeraldConfig::new(o.mu, o.eta_c, Beta::new(o.beta)?)?;
    let stats = heralded_statistics(&herald)?;
    let est = monte_carlo_heralded(o.mu, o.beta, o.eta_c, mc)?;
    for (name, expected, observed, se) in [
        ("mc_p_vacuum", stats.p_vacuum, est.p_vacuum, est.se_vacuum),
        ("mc_p_single", stats.p_single, est.p_single, est.se_single),
        ("mc_p_multi", stats.p_multi, est.p_multi, est.se_multi),
    ] {
        checks.push(Check::new(name, expected, observed, MC_STATS_SE * se * scale));
    }

    let g2 = g2_zero(&stats, hbt)?;
    let est = monte_carlo_g2(o.mu, o.beta, o.eta_c, hbt.eta_f, hbt.eta_g, mc)?;
    checks.push(Check::new(
        "mc_g2",
        g2.g2_direct,
        est.g2,
        MC_G2_SE * est.std_error * scale,
    ));
    Ok(checks)
}

pub fn oracle_verify(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.oracle.validate()?;
    let hbt = cfg.hbt.config()?;
    let mc = cfg.mc.config()?;
    let checks = compute(oracle_checks(cfg, &mc, &hbt))?;
    let failed = checks.iter().filter(|c| !c.pass).count();
    let bytes = render(
        "oracle-verify",
        &checks,
        format_or(cfg, Format::Json),
        Some(failed == 0),
    )?;
    write(cfg.output.path.as_deref(), &bytes)?;
    if failed > 0 {
        return Err(CliError::Verification { failed });
    }
    Ok(())
}

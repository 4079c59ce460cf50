//! `lohps` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lohps::qkd::Analysis;

use config::{Format, RunConfig, SourceName};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Compute(lohps::Error),
    Verification { failed: usize },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Compute(_) => 1,
            CliError::Config(_) => 2,
            CliError::Verification { .. } => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
            CliError::Compute(e) => write!(f, "computation failed: {e}"),
            CliError::Verification { failed } => write!(f, "{failed} oracle check(s) failed"),
        }
    }
}

/// Parameter errors raised while validating the configuration.
impl From<lohps::Error> for CliError {
    fn from(e: lohps::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "lohps", version, about = "Linear-optic heralded photon source simulator")]
struct Cli {
    /// JSON run configuration; flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Monte Carlo seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coincidence level of the two-source beat pattern against delay.
    BeatPattern(BeatArgs),
    /// Herald-conditioned photon-number statistics.
    HeraldStats(HeraldArgs),
    /// g²(0) of the heralded output, optionally against herald delay.
    G2(G2Args),
    /// Secret-key probability against fibre length.
    QkdCurve(QkdArgs),
    /// Longest link with a positive key rate.
    QkdMaxdist(QkdArgs),
    /// Check the closed-form model against the independent oracles.
    OracleVerify(OracleArgs),
}

#[derive(Args, Debug, Default)]
struct WavePacketArgs {
    /// Gaussian half-width σ, s (overrides the coherence-time conversion).
    #[arg(long)]
    sigma: Option<f64>,
    /// Angular frequency displacement Δ, rad/s.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    #[arg(long)]
    coherence_time: Option<f64>,
    #[arg(long)]
    sigma_per_coherence_time: Option<f64>,
}

#[derive(Args, Debug)]
struct BeatArgs {
    #[command(flatten)]
    packet: WavePacketArgs,
    #[arg(long, allow_hyphen_values = true)]
    tau_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tau_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Args, Debug)]
struct HeraldArgs {
    /// Comma-separated mean photon numbers per source.
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<f64>>,
    #[arg(long)]
    eta_c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
}

#[derive(Args, Debug)]
struct G2Args {
    #[command(flatten)]
    packet: WavePacketArgs,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    eta_c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long)]
    eta_f: Option<f64>,
    #[arg(long)]
    eta_g: Option<f64>,
    /// Also write g²(τ) over ±N·π/Δ to this file.
    #[arg(long)]
    curve_out: Option<PathBuf>,
    #[arg(long)]
    curve_points: Option<usize>,
    #[arg(long)]
    curve_half_periods: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AnalysisArg {
    Gllp,
    Decoy,
}

impl From<AnalysisArg> for Analysis {
    fn from(a: AnalysisArg) -> Self {
        match a {
            AnalysisArg::Gllp => Analysis::Gllp,
            AnalysisArg::Decoy => Analysis::Decoy,
        }
    }
}

#[derive(Args, Debug)]
struct QkdArgs {
    #[arg(long, value_enum, value_delimiter = ',')]
    sources: Option<Vec<SourceName>>,
    #[arg(long, value_enum, value_delimiter = ',')]
    analyses: Option<Vec<AnalysisArg>>,
    #[arg(long)]
    distance_max: Option<f64>,
    #[arg(long)]
    distance_step: Option<f64>,
    #[arg(long)]
    mu_min: Option<f64>,
    #[arg(long)]
    mu_max: Option<f64>,
    #[arg(long)]
    mu_grid_points: Option<usize>,
    #[arg(long)]
    hps_eta_c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    hps_beta: Option<f64>,
    #[arg(long)]
    spdc_p1: Option<f64>,
    #[arg(long)]
    spdc_g2: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    eta_bob: Option<f64>,
    #[arg(long)]
    p_dark: Option<f64>,
    #[arg(long)]
    e_opt: Option<f64>,
    #[arg(long)]
    f_ec: Option<f64>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    chunk_trials: Option<u64>,
    #[arg(long)]
    tolerance_scale: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long)]
    eta_c: Option<f64>,
    #[arg(long)]
    points_per_sigma: Option<u32>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl WavePacketArgs {
    fn apply(self, cfg: &mut RunConfig) {
        if self.sigma.is_some() {
            cfg.beat.sigma = self.sigma;
        }
        set(&mut cfg.beat.delta, self.delta);
        set(&mut cfg.beat.coherence_time, self.coherence_time);
        set(&mut cfg.beat.sigma_per_coherence_time, self.sigma_per_coherence_time);
    }
}

impl QkdArgs {
    fn apply(self, cfg: &mut RunConfig) {
        let q = &mut cfg.qkd;
        set(&mut q.sources, self.sources);
        set(
            &mut q.analyses,
            self.analyses.map(|v| v.into_iter().map(Analysis::from).collect()),
        );
        set(&mut q.distance_max_km, self.distance_max);
        set(&mut q.distance_step_km, self.distance_step);
        set(&mut q.mu_bounds.min, self.mu_min);
        set(&mut q.mu_bounds.max, self.mu_max);
        set(&mut q.mu_bounds.grid_points, self.mu_grid_points);
        set(&mut q.hps_eta_c, self.hps_eta_c);
        set(&mut q.hps_beta, self.hps_beta);
        set(&mut q.spdc_p1, self.spdc_p1);
        set(&mut q.spdc_g2, self.spdc_g2);
        let c = &mut cfg.channel;
        set(&mut c.alpha_db_per_km, self.alpha);
        set(&mut c.eta_bob, self.eta_bob);
        set(&mut c.p_dark, self.p_dark);
        set(&mut c.e_opt, self.e_opt);
        set(&mut c.f_ec, self.f_ec);
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if cli.out.is_some() {
        cfg.output.path = cli.out;
    }
    set(&mut cfg.output.format, cli.format.map(Some));
    set(&mut cfg.mc.seed, cli.seed);

    match cli.command {
        Command::BeatPattern(a) => {
            a.packet.apply(&mut cfg);
            if a.tau_min.is_some() {
                cfg.beat.tau_min = a.tau_min;
            }
            if a.tau_max.is_some() {
                cfg.beat.tau_max = a.tau_max;
            }
            set(&mut cfg.beat.points, a.points);
            commands::beat_pattern(&cfg)
        }
        Command::HeraldStats(a) => {
            set(&mut cfg.herald.mu, a.mu);
            set(&mut cfg.herald.eta_c, a.eta_c);
            set(&mut cfg.herald.beta, a.beta);
            commands::herald_stats(&cfg)
        }
        Command::G2(a) => {
            a.packet.apply(&mut cfg);
            set(&mut cfg.g2.mu, a.mu);
            set(&mut cfg.g2.eta_c, a.eta_c);
            set(&mut cfg.g2.beta, a.beta);
            set(&mut cfg.hbt.eta_f, a.eta_f);
            set(&mut cfg.hbt.eta_g, a.eta_g);
            set(&mut cfg.g2.curve_points, a.curve_points);
            set(&mut cfg.g2.curve_half_periods, a.curve_half_periods);
            commands::g2(&cfg, a.curve_out.as_deref())
        }
        Command::QkdCurve(a) => {
            a.apply(&mut cfg);
            commands::qkd_curve(&cfg)
        }
        Command::QkdMaxdist(a) => {
            a.apply(&mut cfg);
            commands::qkd_maxdist(&cfg)
        }
        Command::OracleVerify(a) => {
            set(&mut cfg.mc.trials, a.trials);
            set(&mut cfg.mc.chunk_trials, a.chunk_trials);
            set(&mut cfg.oracle.tolerance_scale, a.tolerance_scale);
            set(&mut cfg.oracle.mu, a.mu);
            set(&mut cfg.oracle.beta, a.beta);
            set(&mut cfg.oracle.eta_c, a.eta_c);
            set(&mut cfg.oracle.quadrature.points_per_sigma, a.points_per_sigma);
            commands::oracle_verify(&cfg)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lohps: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

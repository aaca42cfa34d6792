//! Command-line front end: asymptotic losses and tilt parameters, the
//! finite-noise lower-bound sweep with QAM rate-loss curves as CSV, and
//! constellation exports.

mod sweep;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use caploss::maxent::{capacity_loss, solve_lambda};
use caploss::mi::{
    gauss_hermite_mi, gaussian_capacity, monte_carlo_mi, sigma_from_inv_sigma2_db, GhConfig,
};
use caploss::noise::NoiseModel;
use caploss::regions::{Region, RegionSpec, Shape};

#[derive(Parser)]
#[command(
    name = "caploss",
    version,
    about = "Capacity loss of bounded-support constellations over complex additive-noise channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Asymptotic capacity loss for a region and power budget.
    Loss(LossArgs),
    /// Exponential tilt solving the mean-power equation, with its residual.
    Lambda(LossArgs),
    /// CSV sweep: loss lower bound, asymptotic loss, and QAM rate losses
    /// against 1/sigma^2 in dB.
    Figure1(sweep::Figure1Args),
    /// Gauss-Hermite mutual information of square QAM, optionally
    /// cross-checked by Monte Carlo.
    QamMi(QamMiArgs),
    /// Discretize the max-entropy density into a finite constellation (CSV).
    Discretize(DiscretizeArgs),
}

#[derive(Args)]
struct LossArgs {
    /// Region: "square:A", "disk:R", or a path to a region JSON file.
    #[arg(long)]
    region: String,
    /// Power budget: a number or "uniform" for the uniform power of the region.
    #[arg(long, default_value = "uniform")]
    power: String,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct QamMiArgs {
    /// QAM order exponent m (2^m points); must be even.
    #[arg(long)]
    m: u32,
    /// 1/sigma^2 grid in dB, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    snr_db: Vec<f64>,
    /// Mean power the grid is scaled to.
    #[arg(long, default_value_t = 1.0)]
    power: f64,
    /// Gauss-Hermite nodes per dimension.
    #[arg(long, default_value_t = 20)]
    gh_nodes: usize,
    /// Also run the Monte Carlo cross-check with this many samples.
    #[arg(long)]
    mc_samples: Option<usize>,
    /// Seed for the Monte Carlo cross-check.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit JSON instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DiscretizeArgs {
    /// Region: "square:A", "disk:R", or a path to a region JSON file.
    #[arg(long)]
    region: String,
    /// Power budget: a number or "uniform".
    #[arg(long, default_value = "uniform")]
    power: String,
    /// Cells per axis of the discretization grid.
    #[arg(long)]
    n: usize,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<String>,
}

/// Errors with their process exit code: 2 for configuration problems,
/// 3 for solver failures. Messages name the failing stage.
pub enum CliError {
    Config(String),
    Solver(String),
}

impl CliError {
    fn config(stage: &str, detail: impl std::fmt::Display) -> Self {
        CliError::Config(format!("{stage}: {detail}"))
    }

    fn solver(stage: &str, detail: impl std::fmt::Display) -> Self {
        CliError::Solver(format!("{stage}: {detail}"))
    }
}

/// Map a library error at a given stage onto an exit class.
pub fn stage_err(stage: &'static str) -> impl Fn(caploss::Error) -> CliError {
    move |e| match &e {
        caploss::Error::InvalidRegion(_)
        | caploss::Error::InvalidOrder(_)
        | caploss::Error::InvalidConstellation(_)
        | caploss::Error::UnsupportedNoise(_) => CliError::config(stage, e),
        caploss::Error::NoBracket(_)
        | caploss::Error::QuadratureFailure(_)
        | caploss::Error::EmptyIntersection
        | caploss::Error::MissingNoiseDensity => CliError::solver(stage, e),
    }
}

pub fn parse_region(spec: &str) -> Result<Region, CliError> {
    let stage = "region parsing";
    if let Some(v) = spec.strip_prefix("square:") {
        let a: f64 = v
            .parse()
            .map_err(|e| CliError::config(stage, format!("bad half-side {v:?}: {e}")))?;
        return Region::square(a).map_err(stage_err(stage));
    }
    if let Some(v) = spec.strip_prefix("disk:") {
        let r: f64 = v
            .parse()
            .map_err(|e| CliError::config(stage, format!("bad radius {v:?}: {e}")))?;
        return Region::disk(r).map_err(stage_err(stage));
    }
    let text = fs::read_to_string(spec)
        .map_err(|e| CliError::config(stage, format!("cannot read {spec:?}: {e}")))?;
    let parsed: RegionSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::config(stage, format!("bad region JSON in {spec:?}: {e}")))?;
    Region::try_from(parsed).map_err(stage_err(stage))
}

pub fn parse_power(spec: &str, region: &Region) -> Result<f64, CliError> {
    let stage = "power parsing";
    if spec == "uniform" {
        return Ok(region.uniform_power());
    }
    let p: f64 = spec
        .parse()
        .map_err(|e| CliError::config(stage, format!("bad power {spec:?}: {e}")))?;
    if !p.is_finite() || p <= 0.0 {
        return Err(CliError::config(
            stage,
            format!("power must be positive and finite, got {p}"),
        ));
    }
    Ok(p)
}

pub fn region_label(region: &Region) -> String {
    match region.shape() {
        Shape::Square { half_side } => format!("square half_side={half_side}"),
        Shape::Disk { radius } => format!("disk radius={radius}"),
        Shape::Polygon { vertices } => format!("polygon with {} vertices", vertices.len()),
    }
}

fn cmd_loss(args: &LossArgs) -> Result<(), CliError> {
    let region = parse_region(&args.region)?;
    let power = parse_power(&args.power, &region)?;
    let sol = capacity_loss(&region, power).map_err(stage_err("loss solve"))?;
    let loss_bits = sol.loss / std::f64::consts::LN_2;
    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "region": region_label(&region),
                "power": sol.power_constraint,
                "uniform_power": region.uniform_power(),
                "lambda": sol.lambda,
                "z0": sol.z0,
                "effective_power": sol.effective_power,
                "entropy_nats": sol.entropy,
                "loss_nats": sol.loss,
                "loss_bits": loss_bits,
                "loss_db": sol.loss_db,
            })
        );
    } else {
        println!("region: {}", region_label(&region));
        println!("power: {} (uniform power {})", power, region.uniform_power());
        println!("lambda: {}", sol.lambda);
        println!("z0: {}", sol.z0);
        println!("entropy_nats: {}", sol.entropy);
        println!("loss_nats: {}", sol.loss);
        println!("loss_bits: {loss_bits}");
        println!("loss_db: {}", sol.loss_db);
    }
    Ok(())
}

fn cmd_lambda(args: &LossArgs) -> Result<(), CliError> {
    let region = parse_region(&args.region)?;
    let power = parse_power(&args.power, &region)?;
    let lambda = solve_lambda(&region, power).map_err(stage_err("lambda solve"))?;
    let moments = region
        .moments(lambda)
        .map_err(stage_err("moment evaluation"))?;
    let residual = (moments.tilted_power() - power).abs();
    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "region": region_label(&region),
                "power": power,
                "uniform_power": region.uniform_power(),
                "lambda": lambda,
                "z0": moments.z0,
                "tilted_power": moments.tilted_power(),
                "residual": residual,
            })
        );
    } else {
        println!("region: {}", region_label(&region));
        println!("power: {power} (uniform power {})", region.uniform_power());
        println!("lambda: {lambda}");
        println!("z0: {}", moments.z0);
        println!("tilted_power: {}", moments.tilted_power());
        println!("residual: {residual:e}");
    }
    Ok(())
}

fn cmd_qam_mi(args: &QamMiArgs) -> Result<(), CliError> {
    if args.snr_db.is_empty() {
        return Err(CliError::config("snr grid", "at least one SNR value required"));
    }
    if args.snr_db.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::config(
            "snr grid",
            "SNR grid must be strictly increasing",
        ));
    }
    if !args.power.is_finite() || args.power <= 0.0 {
        return Err(CliError::config(
            "power parsing",
            format!("power must be positive and finite, got {}", args.power),
        ));
    }
    if args.gh_nodes < 2 {
        return Err(CliError::config(
            "quadrature config",
            "need at least 2 Gauss-Hermite nodes",
        ));
    }
    if let Some(n) = args.mc_samples {
        if n < 1_000 {
            return Err(CliError::config(
                "monte carlo config",
                "need at least 1000 samples for a standard error",
            ));
        }
    }
    let constellation =
        caploss::constellations::qam(args.m, args.power).map_err(stage_err("qam construction"))?;
    let cfg = GhConfig::new(args.gh_nodes);
    let noise = NoiseModel::circular_gaussian();
    let mut rows = Vec::new();
    for &db in &args.snr_db {
        let sigma = sigma_from_inv_sigma2_db(db);
        let rate = gauss_hermite_mi(&constellation, sigma, &cfg);
        let loss = gaussian_capacity(constellation.power(), sigma) - rate;
        let mc = match args.mc_samples {
            Some(n) => Some(
                monte_carlo_mi(&constellation, sigma, &noise, n, args.seed)
                    .map_err(stage_err("monte carlo"))?,
            ),
            None => None,
        };
        rows.push((db, rate, loss, mc));
    }
    if args.json {
        let entries: Vec<_> = rows
            .iter()
            .map(|(db, rate, loss, mc)| {
                serde_json::json!({
                    "inv_sigma2_db": db,
                    "rate_nats": rate,
                    "loss_vs_gaussian_nats": loss,
                    "mc_rate_nats": mc.as_ref().map(|m| m.estimate),
                    "mc_std_err_nats": mc.as_ref().map(|m| m.std_err),
                })
            })
            .collect();
        println!("{}", serde_json::json!(entries));
    } else {
        println!(
            "# caploss {} qam-mi m={} power={}",
            env!("CARGO_PKG_VERSION"),
            args.m,
            args.power
        );
        println!("# gh_nodes: {}", args.gh_nodes);
        if args.mc_samples.is_some() {
            println!("inv_sigma2_db,rate_nats,loss_vs_gaussian_nats,mc_rate_nats,mc_std_err_nats");
        } else {
            println!("inv_sigma2_db,rate_nats,loss_vs_gaussian_nats");
        }
        for (db, rate, loss, mc) in rows {
            match mc {
                Some(mc) => println!("{db},{rate},{loss},{},{}", mc.estimate, mc.std_err),
                None => println!("{db},{rate},{loss}"),
            }
        }
    }
    Ok(())
}

fn cmd_discretize(args: &DiscretizeArgs) -> Result<(), CliError> {
    if args.n < 2 {
        return Err(CliError::config(
            "discretization grid",
            "need at least 2 cells per axis",
        ));
    }
    let region = parse_region(&args.region)?;
    let power = parse_power(&args.power, &region)?;
    let sol = capacity_loss(&region, power).map_err(stage_err("loss solve"))?;
    let constellation = caploss::constellations::discretize_fstar(&region, &sol, args.n)
        .map_err(stage_err("discretization"))?;
    let mut buf = Vec::new();
    constellation
        .write_csv(&mut buf)
        .map_err(|e| CliError::solver("csv encoding", e))?;
    write_output(args.output.as_deref(), &buf)
}

pub fn write_output(path: Option<&str>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| CliError::config("output", format!("cannot write {path:?}: {e}"))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::solver("output", e)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Loss(args) => cmd_loss(args),
        Command::Lambda(args) => cmd_lambda(args),
        Command::Figure1(args) => sweep::cmd_figure1(args),
        Command::QamMi(args) => cmd_qam_mi(args),
        Command::Discretize(args) => cmd_discretize(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("error ({msg})");
            ExitCode::from(2)
        }
        Err(CliError::Solver(msg)) => {
            eprintln!("error ({msg})");
            ExitCode::from(3)
        }
    }
}

//! The figure1 sweep: loss lower bound, asymptotic loss, and per-order QAM
//! rate losses over an SNR grid, emitted as CSV with a metadata header.
//!
//! Grid points are independent; with --jobs > 1 they are computed on a
//! scoped thread pool and reassembled in grid order, so the output bytes do
//! not depend on the schedule. Per-point failures leave an empty cell and a
//! warning on standard error rather than aborting the sweep.

use clap::Args;

use caploss::bounds::loss_lower_bound;
use caploss::constellations::{qam, Constellation};
use caploss::maxent::capacity_loss;
use caploss::mi::{gauss_hermite_mi, gaussian_capacity, sigma_from_inv_sigma2_db, GhConfig};
use caploss::noise::NoiseModel;
use caploss::regions::Shape;

use crate::{parse_power, parse_region, region_label, stage_err, write_output, CliError};

#[derive(Args)]
pub struct Figure1Args {
    /// Region; the sweep is defined for squares.
    #[arg(long, default_value = "square:1")]
    region: String,
    /// Power budget: a number or "uniform".
    #[arg(long, default_value = "uniform")]
    power: String,
    /// Grid start, 1/sigma^2 in dB.
    #[arg(long, default_value_t = 0.0)]
    snr_min_db: f64,
    /// Grid end, 1/sigma^2 in dB.
    #[arg(long, default_value_t = 80.0)]
    snr_max_db: f64,
    /// Grid step in dB.
    #[arg(long, default_value_t = 2.0)]
    snr_step_db: f64,
    /// QAM orders (exponents m, even).
    #[arg(long, value_delimiter = ',', default_values_t = [10u32, 16])]
    qam_orders: Vec<u32>,
    /// Allow the 2^22-point order (minutes of runtime).
    #[arg(long)]
    heavy: bool,
    /// Gauss-Hermite nodes per dimension.
    #[arg(long, default_value_t = 20)]
    gh_nodes: usize,
    /// Use the generic Chebyshev tail instead of the exact Gaussian tail
    /// inside the bound (for comparison runs).
    #[arg(long)]
    chebyshev_tail: bool,
    /// Worker threads for the sweep.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Seed recorded in the output metadata.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<String>,
}

struct SweepRow {
    db: f64,
    loss_lower: Option<f64>,
    qam_losses: Vec<Option<f64>>,
}

pub fn cmd_figure1(args: &Figure1Args) -> Result<(), CliError> {
    let region = parse_region(&args.region)?;
    if !matches!(region.shape(), Shape::Square { .. }) {
        return Err(CliError::Config(format!(
            "region check: the figure1 sweep is defined for square regions, got {}",
            region_label(&region)
        )));
    }
    let power = parse_power(&args.power, &region)?;
    let grid = build_grid(args.snr_min_db, args.snr_max_db, args.snr_step_db)?;
    for &m in &args.qam_orders {
        if !m.is_multiple_of(2) || !(2..=24).contains(&m) {
            return Err(CliError::Config(format!(
                "qam orders: order {m} must be even and between 2 and 24"
            )));
        }
        if m >= 22 && !args.heavy {
            return Err(CliError::Config(format!(
                "qam orders: order {m} has {} points; pass --heavy to allow it",
                1u64 << m
            )));
        }
    }
    if args.jobs == 0 {
        return Err(CliError::Config("jobs: need at least one worker".into()));
    }
    if args.gh_nodes < 2 {
        return Err(CliError::Config(
            "quadrature config: need at least 2 Gauss-Hermite nodes".into(),
        ));
    }
    if args.qam_orders.iter().any(|&m| m >= 22) {
        eprintln!(
            "warning: orders of 2^22 points and up take minutes even with the separable grid path"
        );
    }

    let sol = capacity_loss(&region, power).map_err(stage_err("loss solve"))?;
    let noise = if args.chebyshev_tail {
        NoiseModel::circular_gaussian().with_chebyshev_tail()
    } else {
        NoiseModel::circular_gaussian()
    };
    let cfg = GhConfig::new(args.gh_nodes);
    let constellations: Vec<Constellation> = args
        .qam_orders
        .iter()
        .map(|&m| qam(m, power).map_err(stage_err("qam construction")))
        .collect::<Result<_, _>>()?;

    let compute_row = |&db: &f64| -> SweepRow {
        let sigma = sigma_from_inv_sigma2_db(db);
        let loss_lower = match loss_lower_bound(&region, power, sigma, &noise) {
            Ok(b) => Some(b.loss_lower),
            Err(e) => {
                eprintln!("warning: bound at {db} dB failed: {e}");
                None
            }
        };
        let qam_losses = constellations
            .iter()
            .map(|c| {
                let rate = gauss_hermite_mi(c, sigma, &cfg);
                Some(gaussian_capacity(c.power(), sigma) - rate)
            })
            .collect();
        SweepRow {
            db,
            loss_lower,
            qam_losses,
        }
    };
    let rows = parallel_map(&grid, args.jobs, compute_row);

    let mut out = Vec::new();
    render_csv(args, &region_label(&region), power, sol.loss, &rows, &mut out);
    write_output(args.output.as_deref(), &out)
}

fn build_grid(min_db: f64, max_db: f64, step_db: f64) -> Result<Vec<f64>, CliError> {
    if !step_db.is_finite() || step_db <= 0.0 || min_db > max_db {
        return Err(CliError::Config(
            "snr grid: need min <= max and a positive step".into(),
        ));
    }
    let mut grid = Vec::new();
    let mut k = 0u32;
    loop {
        let db = min_db + step_db * f64::from(k);
        if db > max_db + 1e-9 {
            break;
        }
        grid.push(db);
        k += 1;
    }
    if grid.is_empty() {
        return Err(CliError::Config("snr grid: empty".into()));
    }
    Ok(grid)
}

/// Map `f` over `items` with up to `jobs` workers, preserving input order.
fn parallel_map<T: Sync, R: Send, F: Fn(&T) -> R + Sync>(
    items: &[T],
    jobs: usize,
    f: F,
) -> Vec<R> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let mut slots: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots_ref = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(items.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let value = f(&items[i]);
                slots_ref.lock().unwrap()[i] = Some(value);
            });
        }
    });
    slots.into_iter().map(|v| v.unwrap()).collect()
}

fn render_csv(
    args: &Figure1Args,
    region: &str,
    power: f64,
    asymptotic_loss: f64,
    rows: &[SweepRow],
    out: &mut Vec<u8>,
) {
    let mut w = |line: String| {
        out.extend_from_slice(line.as_bytes());
        out.push(b'\n');
    };
    w(format!("# caploss {} figure1", env!("CARGO_PKG_VERSION")));
    w(format!("# region: {region}"));
    w(format!("# power: {power}"));
    w(format!("# gh_nodes: {}", args.gh_nodes));
    w("# eps_search: 200-point log grid on [sigma*1e-3, diam*1e3], golden-section rel tol 1e-6"
        .to_string());
    w(format!(
        "# tail: {}",
        if args.chebyshev_tail { "chebyshev" } else { "exact" }
    ));
    w(format!("# seed: {}", args.seed));
    let mut header = String::from("inv_sigma2_db,loss_lower_bound_nats,asymptotic_L_nats");
    for m in &args.qam_orders {
        header.push_str(&format!(",qam_loss_m{m}_nats"));
    }
    w(header);
    for row in rows {
        let mut line = format!("{},", row.db);
        if let Some(v) = row.loss_lower {
            line.push_str(&v.to_string());
        }
        line.push(',');
        line.push_str(&asymptotic_loss.to_string());
        for q in &row.qam_losses {
            line.push(',');
            if let Some(v) = q {
                line.push_str(&v.to_string());
            }
        }
        w(line);
    }
}

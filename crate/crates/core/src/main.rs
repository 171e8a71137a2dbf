//! Command-line interface: hull queries on point files, one-shot estimates
//! on generated domains, the full experiments, and rate checks on their CSV
//! outputs.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use alphavol::domains;
use alphavol::estimators::{bagged_estimate, plug_in, split_estimate, volume_ci};
use alphavol::geom::Point;
use alphavol::harness::{
    self, fit_rate, parse_config, run_convex_comparison, run_coverage, run_error_curve,
};
use alphavol::hull::AlphaHull;

#[derive(Parser)]
#[command(name = "alphavol", version, about = "Alpha-convex hull volume estimation toolkit")]
struct Cli {
    /// Worker threads for replicated experiments (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Queries on the alpha-convex hull of a point file.
    Hull {
        #[command(subcommand)]
        command: HullCommand,
    },
    /// One-shot volume estimates on a generated sample.
    Estimate {
        #[command(subcommand)]
        command: EstimateCommand,
    },
    /// Replicated experiments driven by a config file.
    Experiment {
        #[command(subcommand)]
        command: ExperimentCommand,
    },
    /// Fits log(error) against log(n) on a harness CSV.
    RateCheck {
        #[arg(long)]
        csv: PathBuf,
        /// Column with the sample sizes.
        #[arg(long, default_value = "n")]
        x_col: String,
        /// Column with the (positive) errors.
        #[arg(long, default_value = "mean_rel_error")]
        y_col: String,
    },
}

#[derive(Subcommand)]
enum HullCommand {
    /// Certified area bounds of the hull.
    Area {
        points: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// Absolute area tolerance (default: 1e-4 of the bbox area).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Membership test for a single query point.
    Contains {
        points: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// Dumps the free-boundary arcs as an SVG drawing.
    Svg {
        points: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum EstimateCommand {
    /// Sample-splitting estimator.
    Split {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        n: usize,
        /// Hull subsample size (default: n/2).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
        /// Also print volume confidence intervals at these levels.
        #[arg(long, value_delimiter = ',')]
        ci: Vec<f64>,
    },
    /// Plug-in estimator (hull of the whole sample).
    Plugin {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Mean of repeated split estimates over fresh random splits.
    Bagged {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        bag: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Mean relative error sweeps over (alpha, n, split rule).
    ErrorCurve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Confidence-interval coverage and length table.
    Coverage {
        #[arg(long)]
        config: PathBuf,
    },
    /// Poisson convex-case comparison against hull-area and naive baselines.
    ConvexCompare {
        #[arg(long)]
        config: PathBuf,
    },
}

fn read_points(path: &PathBuf) -> anyhow::Result<Vec<Point>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let header = lines.next().context("empty point file")?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols != ["x", "y"] {
        bail!("point file must start with the header `x,y`, got `{header}`");
    }
    let mut points = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split(',');
        let (sx, sy) = (it.next(), it.next());
        let (sx, sy) = match (sx, sy, it.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => bail!("line {}: expected `x,y`", i + 2),
        };
        let x: f64 = sx.trim().parse().with_context(|| format!("line {}", i + 2))?;
        let y: f64 = sy.trim().parse().with_context(|| format!("line {}", i + 2))?;
        points.push(Point::new(x, y)?);
    }
    Ok(points)
}

fn default_tol(points: &[Point]) -> f64 {
    let hull = match alphavol::geom::convex_hull(points) {
        Ok(h) => h,
        Err(_) => return 1e-6,
    };
    let (lo, hi) = hull.bounding_box();
    (1e-4 * (hi.x - lo.x) * (hi.y - lo.y)).max(1e-12)
}

fn load_config(path: &PathBuf) -> anyhow::Result<harness::ExperimentConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_config(&text)?)
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("initializing the worker pool")?;
    }

    match cli.command {
        Command::Hull { command } => match command {
            HullCommand::Area { points, alpha, tol } => {
                let pts = read_points(&points)?;
                let tol = tol.unwrap_or_else(|| default_tol(&pts));
                let hull = AlphaHull::build(&pts, alpha)?;
                let est = hull.area(tol)?;
                println!("points            {}", pts.len());
                println!("alpha             {alpha}");
                println!("area              {:.12}", est.value);
                println!("certified bounds  [{:.12}, {:.12}]", est.lower, est.upper);
                println!("tolerance         {:.3e}", est.tolerance_used);
                println!("cells processed   {}", est.cells_processed);
            }
            HullCommand::Contains {
                points,
                alpha,
                x,
                y,
            } => {
                let pts = read_points(&points)?;
                let hull = AlphaHull::build(&pts, alpha)?;
                let q = Point::new(x, y)?;
                println!("contains   {}", hull.contains(q));
                println!("clearance  {:.12}", hull.clearance(q));
            }
            HullCommand::Svg { points, alpha, out } => {
                let pts = read_points(&points)?;
                let hull = AlphaHull::build(&pts, alpha)?;
                let svg = hull.boundary_svg();
                match out {
                    Some(path) => {
                        fs::write(&path, svg)
                            .with_context(|| format!("writing {}", path.display()))?;
                        println!(
                            "wrote {} ({} arcs)",
                            path.display(),
                            hull.boundary_arcs().len()
                        );
                    }
                    None => print!("{svg}"),
                }
            }
        },
        Command::Estimate { command } => match command {
            EstimateCommand::Split {
                domain,
                n,
                m,
                alpha,
                seed,
                tol,
                ci,
            } => {
                let domain = domains::parse(&domain)?;
                let mut rng = harness::replicate_rng(seed, 0, &[n as u64], 0);
                let sample = domain.sample(n, &mut rng)?;
                let m = m.unwrap_or(n / 2);
                let tol = tol.unwrap_or_else(|| {
                    let (lo, hi) = domain.bbox();
                    1e-4 * (hi.x - lo.x) * (hi.y - lo.y)
                });
                let res = split_estimate(&sample, alpha, m, tol, &mut rng)?;
                println!("domain        {}", domain.name());
                println!("true area     {:.12}", domain.area());
                println!("v_hat         {:.12}", res.v_hat);
                println!(
                    "mu_hat        {:.12}  in [{:.12}, {:.12}]",
                    res.mu_hat.value, res.mu_hat.lower, res.mu_hat.upper
                );
                println!("p_hat         {:.6}  ({}/{})", res.p_hat, res.outside_count, n - m);
                println!("clamped       {}", res.clamped);
                for level in ci {
                    let interval = volume_ci(&res, level)?;
                    println!(
                        "ci {:>5.3}      [{:.12}, {:.12}]",
                        level, interval.lower, interval.upper
                    );
                }
            }
            EstimateCommand::Plugin {
                domain,
                n,
                alpha,
                seed,
                tol,
            } => {
                let domain = domains::parse(&domain)?;
                let mut rng = harness::replicate_rng(seed, 0, &[n as u64], 0);
                let sample = domain.sample(n, &mut rng)?;
                let tol = tol.unwrap_or_else(|| {
                    let (lo, hi) = domain.bbox();
                    1e-4 * (hi.x - lo.x) * (hi.y - lo.y)
                });
                let est = plug_in(&sample, alpha, tol)?;
                println!("domain        {}", domain.name());
                println!("true area     {:.12}", domain.area());
                println!(
                    "plug-in       {:.12}  in [{:.12}, {:.12}]",
                    est.value, est.lower, est.upper
                );
            }
            EstimateCommand::Bagged {
                domain,
                n,
                m,
                alpha,
                seed,
                bag,
                tol,
            } => {
                let domain = domains::parse(&domain)?;
                let mut rng = harness::replicate_rng(seed, 0, &[n as u64], 0);
                let sample = domain.sample(n, &mut rng)?;
                let m = m.unwrap_or(n / 2);
                let tol = tol.unwrap_or_else(|| {
                    let (lo, hi) = domain.bbox();
                    1e-4 * (hi.x - lo.x) * (hi.y - lo.y)
                });
                let value = bagged_estimate(&sample, alpha, m, bag, tol, &mut rng)?;
                println!("domain        {}", domain.name());
                println!("true area     {:.12}", domain.area());
                println!("bagged v_hat  {value:.12}  (b = {bag})");
            }
        },
        Command::Experiment { command } => match command {
            ExperimentCommand::ErrorCurve { config } => {
                let cfg = load_config(&config)?;
                let points = run_error_curve(&cfg)?;
                println!(
                    "wrote {} ({} rows) and per-alpha SVGs",
                    cfg.output_dir.join("error_curve.csv").display(),
                    points.len()
                );
                for p in &points {
                    println!(
                        "alpha {:<6} n {:<6} j {:<3} mean {:.6e}  sd {:.6e}",
                        p.alpha, p.n, p.j, p.mean_rel_error, p.sd_rel_error
                    );
                }
            }
            ExperimentCommand::Coverage { config } => {
                let cfg = load_config(&config)?;
                let rows = run_coverage(&cfg)?;
                println!(
                    "wrote {} ({} rows)",
                    cfg.output_dir.join("coverage.csv").display(),
                    rows.len()
                );
                for r in &rows {
                    println!(
                        "n {:<6} level {:<5.3} coverage {:.3}  mean length {:.4}",
                        r.n, r.level, r.coverage, r.mean_length
                    );
                }
            }
            ExperimentCommand::ConvexCompare { config } => {
                let cfg = load_config(&config)?;
                let rows = run_convex_comparison(&cfg)?;
                println!(
                    "wrote {} ({} rows)",
                    cfg.output_dir.join("convex_compare.csv").display(),
                    rows.len()
                );
                for r in &rows {
                    println!(
                        "n {:<6} {:<12} nrmse {:.6e}",
                        r.n, r.estimator, r.nrmse
                    );
                }
            }
        },
        Command::RateCheck { csv, x_col, y_col } => {
            let points = harness::read_xy_columns(&csv, &x_col, &y_col)?;
            let fit = fit_rate(&points)?;
            println!("points     {}", points.len());
            println!("slope      {:.6}", fit.slope);
            println!("intercept  {:.6}", fit.intercept);
            println!("r_squared  {:.6}", fit.r_squared);
        }
    }
    Ok(())
}

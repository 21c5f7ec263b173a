use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qgauss::export::{comparison_table, fmt_g17, render_table, Figure, Grid};
use qgauss::par::par_map;
use qgauss::verify::{check_probability_preservation, run_suite, Status, Suite, SuiteConfig};
use qgauss::{compose, duality, duality_exact, make_map, QGaussian, QIndex, ScalingMap};
use serde_json::json;

/// Directory used by `figure` when `--out` is not given.
const OUT_DIR_VAR: &str = "QGAUSS_OUT_DIR";

#[derive(Parser)]
#[command(name = "qgauss", version, about = "q-Gaussians and the probability-preserving maps between them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Dist {
    /// Entropic index, decimal or rational such as 5/3.
    #[arg(long, value_parser = parse_q)]
    q: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Density at x.
    Eval {
        #[command(flatten)]
        dist: Dist,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// Distribution function at x.
    Cdf {
        #[command(flatten)]
        dist: Dist,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// Inverse distribution function at p.
    Quantile {
        #[command(flatten)]
        dist: Dist,
        #[arg(long)]
        p: f64,
    },
    /// Evaluate the scaling map from G_q to G_q' at z or over a grid.
    Transform {
        /// Source index.
        #[arg(long, value_parser = parse_q)]
        q: f64,
        /// Target index; z is a point in this distribution's variable.
        #[arg(long = "q-prime", value_parser = parse_q)]
        q_prime: f64,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "grid", required_unless_present = "grid")]
        z: Option<f64>,
        /// lo:hi:n, printed as CSV.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<Grid>,
        /// Also report the probability-preservation residual.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Compose the maps along q0 -> q1 -> ... -> qk and evaluate at z.
    Compose {
        /// Comma-separated indices, at least two.
        #[arg(long, value_delimiter = ',', value_parser = parse_q, allow_hyphen_values = true, required = true)]
        path: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
    },
    /// Draw reproducible samples, one per line.
    Sample {
        #[command(flatten)]
        dist: Dist,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Run a verification suite.
    Verify {
        /// axioms, preservation, ode, closed-forms, hypergeometric, pushforward or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Print a JSON summary instead of one line per check.
        #[arg(long)]
        json: bool,
        /// Multiply every map output by 1 + rel. A negative control.
        #[arg(long, hide = true)]
        inject_fault: Option<f64>,
    },
    /// Write figure data as CSV.
    Figure {
        /// fig1a, fig1b or fig2.
        #[arg(long)]
        id: String,
        /// Output file; defaults to $QGAUSS_OUT_DIR/<id>.csv, else stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<Grid>,
    },
    /// Closed forms against the general evaluation.
    Table {
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2", allow_hyphen_values = true)]
        z: Vec<f64>,
    },
    /// The index duality q -> (5 - 3q)/(3 - q).
    Dual {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
}

enum Failure {
    Lib(qgauss::Error),
    Io(PathBuf, io::Error),
    Verification(usize),
}

impl From<qgauss::Error> for Failure {
    fn from(e: qgauss::Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Lib(e) if e.is_numerical() => 3,
            Failure::Lib(_) => 2,
            Failure::Io(..) => 4,
        }
    }
}

fn parse_q(s: &str) -> Result<f64, String> {
    let q = match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
            let d: i64 = d.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
            if d == 0 {
                return Err(format!("zero denominator in `{s}`"));
            }
            n as f64 / d as f64
        }
        None => s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?,
    };
    Ok(q)
}

fn dist(d: &Dist) -> qgauss::Result<QGaussian> {
    QGaussian::new(QIndex::new(d.q)?, d.beta)
}

fn map(q: f64, q_prime: f64) -> qgauss::Result<ScalingMap> {
    make_map(QIndex::new(q)?, QIndex::new(q_prime)?)
}

fn write_atomically(path: &Path, text: &str) -> Result<(), Failure> {
    let io = |e| Failure::Io(path.to_path_buf(), e);
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn transform(q: f64, q_prime: f64, z: Option<f64>, grid: Option<Grid>, check: bool, tol: f64) -> Result<(), Failure> {
    let m = map(q, q_prime)?;
    if let Some(z) = z {
        println!("{}", fmt_g17(m.eval(z)?));
        if check {
            let r = check_probability_preservation(&m, z, tol);
            println!("{r}");
            if !r.passed() {
                return Err(Failure::Verification(1));
            }
        }
        return Ok(());
    }
    let zs = grid.expect("clap requires --z or --grid").points();
    let rows = par_map(&zs, |&z| -> qgauss::Result<(String, bool)> {
        let y = fmt_g17(m.eval(z)?);
        if !check {
            return Ok((format!("{},{y}", fmt_g17(z)), true));
        }
        let r = check_probability_preservation(&m, z, tol);
        Ok((format!("{},{y},{}", fmt_g17(z), fmt_g17(r.residual)), r.passed()))
    });
    let mut out = String::from(if check { "z,gamma,residual\n" } else { "z,gamma\n" });
    let mut failed = 0;
    for row in rows {
        let (line, ok) = row?;
        out.push_str(&line);
        out.push('\n');
        failed += usize::from(!ok);
    }
    print!("{out}");
    if failed > 0 {
        return Err(Failure::Verification(failed));
    }
    Ok(())
}

fn compose_path(path: &[f64], z: f64) -> Result<(), Failure> {
    if path.len() < 2 {
        return Err(qgauss::Error::Unsupported("--path needs at least two indices".into()).into());
    }
    let mut acc = map(path[0], path[1])?;
    for w in path[1..].windows(2) {
        acc = compose(&map(w[0], w[1])?, &acc)?;
    }
    println!("{}", fmt_g17(acc.eval(z)?));
    Ok(())
}

fn verify(suite: &str, tol: Option<f64>, seed: u64, json: bool, fault: Option<f64>) -> Result<(), Failure> {
    let suite: Suite = suite.parse()?;
    let config = SuiteConfig { tolerance: tol, seed, fault, ..SuiteConfig::default() };
    let reports = run_suite(suite, &config)?;
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let (passed, failed, inconclusive) = (count(Status::Pass), count(Status::Fail), count(Status::Inconclusive));
    if json {
        let summary = json!({
            "suite": suite.to_string(),
            "seed": seed,
            "tolerance": tol.unwrap_or(suite.default_tolerance()),
            "total": reports.len(),
            "passed": passed,
            "failed": failed,
            "inconclusive": inconclusive,
            "reports": reports,
        });
        println!("{}", serde_json::to_string_pretty(&summary).expect("reports serialize"));
    } else {
        for r in &reports {
            println!("{r}");
        }
        println!("{passed} passed, {failed} failed, {inconclusive} inconclusive");
    }
    if failed + inconclusive > 0 {
        return Err(Failure::Verification(failed + inconclusive));
    }
    Ok(())
}

fn figure(id: &str, out: Option<PathBuf>, grid: Option<Grid>) -> Result<(), Failure> {
    let fig: Figure = id.parse()?;
    let path =
        out.or_else(|| std::env::var_os(OUT_DIR_VAR).map(|d| PathBuf::from(d).join(format!("{}.csv", fig.id()))));
    let csv = fig.csv(&grid.unwrap_or(Figure::default_grid()))?;
    match path {
        Some(p) => {
            write_atomically(&p, &csv)?;
            eprintln!("wrote {}", p.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn table(zs: &[f64]) -> Result<(), Failure> {
    let lines = comparison_table(zs)?;
    print!("{}", render_table(&lines));
    let worst = lines.iter().map(|l| l.rel_diff).fold(0.0, f64::max);
    println!("max rel_diff {worst:.2e}");
    Ok(())
}

fn dual(q: &str) -> Result<(), Failure> {
    let as_ratio = q.split_once('/').map(|(n, d)| (n.trim().parse::<i64>(), d.trim().parse::<i64>()));
    let whole = q.trim().parse::<i64>().ok().map(|n| (n, 1));
    let exact = match (as_ratio, whole) {
        (Some((Ok(n), Ok(d))), _) if d != 0 => Some((n, d)),
        (_, Some(nd)) => Some(nd),
        _ => None,
    };
    if let Some((n, d)) = exact {
        let r = duality_exact(num_rational::Ratio::new(n, d))?;
        println!("{}/{}", r.numer(), r.denom());
        return Ok(());
    }
    let qf = parse_q(q).map_err(qgauss::Error::Unsupported)?;
    println!("{}", fmt_g17(duality(qf)?));
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Eval { dist: d, x } => println!("{}", fmt_g17(dist(&d)?.pdf(x))),
        Command::Cdf { dist: d, x } => println!("{}", fmt_g17(dist(&d)?.cdf(x))),
        Command::Quantile { dist: d, p } => println!("{}", fmt_g17(dist(&d)?.quantile(p)?)),
        Command::Transform { q, q_prime, z, grid, check, tol } => transform(q, q_prime, z, grid, check, tol)?,
        Command::Compose { path, z } => compose_path(&path, z)?,
        Command::Sample { dist: d, n, seed } => {
            let mut out = String::new();
            for x in dist(&d)?.sample(n, seed)? {
                out.push_str(&fmt_g17(x));
                out.push('\n');
            }
            print!("{out}");
        }
        Command::Verify { suite, tol, seed, json, inject_fault } => verify(&suite, tol, seed, json, inject_fault)?,
        Command::Figure { id, out, grid } => figure(&id, out, grid)?,
        Command::Table { z } => table(&z)?,
        Command::Dual { q } => dual(&q)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Io(p, e) => eprintln!("error: {}: {e}", p.display()),
                Failure::Verification(n) => eprintln!("verification failed: {n} checks did not pass"),
            }
            ExitCode::from(f.code())
        }
    }
}

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sharpineq::constants::SwCase;
use sharpineq::harness::{self, Config, RatioKind, SequenceFamily, Suite, SweepSpec, EXIT_FAIL, EXIT_OK, EXIT_USAGE};
use sharpineq::spectral::Grid1D;
use sharpineq::Error;

#[derive(Parser)]
#[command(name = "sharpineq", version, about = "Sharp constants, extremals and verification for higher-order weighted inequalities")]
struct Cli {
    /// TOML config with [tolerances], [grids] and [sweep] sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Default)]
struct Point {
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
}

impl Point {
    fn map(&self) -> BTreeMap<String, f64> {
        let pairs = [
            ("gamma", self.gamma),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("mu", self.mu),
            ("a", self.a),
            ("b", self.b),
            ("lambda", self.lambda),
        ];
        pairs.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))).collect()
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SwKind {
    Diag,
    T2,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeqKind {
    Powercut,
    Tail,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ratio {
    Weakhr,
    Rellich1d,
    Hardy1d,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form constants and exponents at one parameter point.
    Constants {
        #[arg(long)]
        family: String,
        #[arg(long = "N")]
        n: u32,
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        json: bool,
    },
    /// Rayleigh quotient of a named profile against the sharp constant.
    Rayleigh {
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "extremal")]
        profile: String,
        #[arg(long = "N")]
        n: u32,
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        center: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        width: Option<f64>,
    },
    /// Run a verification suite and emit a JSON report.
    Verify {
        /// Suite name, or `all`.
        #[arg(long)]
        suite: String,
        #[arg(long, allow_hyphen_values = true)]
        tol: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        draws: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Discrete per-mode minima of a weak Hardy-Rellich or weighted Rellich quotient.
    Spectral {
        #[arg(long)]
        family: String,
        #[arg(long = "N")]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long = "grid-n")]
        grid_n: Option<usize>,
        #[arg(long = "half-width")]
        half_width: Option<f64>,
    },
    /// Evaluate a parameter grid and write CSV.
    Sweep {
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stein-Weiss checks for an extremal pair.
    Steinweiss {
        #[arg(long = "case", value_enum)]
        case: SwKind,
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        b: f64,
        #[arg(long, allow_hyphen_values = true)]
        tol: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Ratios along a minimizing sequence, with fitted order and limit.
    Convergence {
        #[arg(long, value_enum)]
        family: SeqKind,
        #[arg(long = "N")]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        #[arg(long, value_enum, default_value = "weakhr")]
        ratio: Ratio,
    },
}

fn usage_error(e: &Error) -> bool {
    matches!(e, Error::Config(_) | Error::Invalid(_) | Error::Domain(_) | Error::Singular(_))
}

fn io(e: std::io::Error) -> Error {
    Error::Config(e.to_string())
}

fn json<T: serde::Serialize>(v: &T) -> sharpineq::Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Numerical(e.to_string()))
}

fn run(cli: Cli) -> sharpineq::Result<i32> {
    harness::configure_threads()?;
    let mut config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    match cli.cmd {
        Cmd::Constants { family, n, point, json: as_json } => {
            let rows = harness::constants_table(&family, n, &point.map())?;
            if as_json {
                let m: BTreeMap<String, f64> = rows.into_iter().collect();
                println!("{}", json(&m)?);
            } else {
                for (k, v) in rows {
                    println!("{k:<22} {v}");
                }
            }
            Ok(EXIT_OK)
        }
        Cmd::Rayleigh { family, profile, n, point, k, eps, center, width } => {
            let mut p = point.map();
            for (key, v) in [("k", k.map(f64::from)), ("eps", eps), ("center", center), ("width", width)] {
                if let Some(v) = v {
                    p.insert(key.to_string(), v);
                }
            }
            let c = harness::rayleigh_case(&family, &profile, n, &p)?;
            println!("{}", json(&c)?);
            Ok(EXIT_OK)
        }
        Cmd::Verify { suite, tol, seed, draws, report } => {
            if let Some(s) = seed {
                config.seed = s;
            }
            if let Some(d) = draws {
                config.draws = d;
            }
            let suites: Vec<Suite> =
                if suite.eq_ignore_ascii_case("all") { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
            let mut reports = Vec::new();
            for s in suites {
                let mut c = config.clone();
                if let Some(t) = tol {
                    c.tolerances.set_primary(s, t);
                }
                let r = harness::run_suite(s, &c)?;
                if let Some(log) = &c.log {
                    harness::append_run_log(log.as_ref(), &r)?;
                }
                eprintln!("{:<15} {}/{} {}", r.suite, r.summary.passed, r.summary.total, if r.all_pass() { "PASS" } else { "FAIL" });
                for w in &r.warnings {
                    eprintln!("  warning: {w}");
                }
                reports.push(r);
            }
            let text = if reports.len() == 1 { reports[0].to_json()? } else { json(&reports)? };
            match report {
                Some(p) => std::fs::write(&p, text + "\n").map_err(io)?,
                None => println!("{text}"),
            }
            Ok(if reports.iter().all(|r| r.all_pass()) { EXIT_OK } else { EXIT_FAIL })
        }
        Cmd::Spectral { family, n, a, kmax, grid_n, half_width } => {
            let g = &config.grids;
            let grid = Grid1D::symmetric(half_width.unwrap_or(g.spectral_half_width), grid_n.unwrap_or(g.spectral_n))?;
            let s = harness::spectral_summary(&family, n, a, kmax.unwrap_or(g.k_max), &grid)?;
            println!("{}", json(&s)?);
            Ok(EXIT_OK)
        }
        Cmd::Sweep { spec, out } => {
            let spec = match spec {
                Some(p) => SweepSpec::from_toml_str(&std::fs::read_to_string(&p).map_err(io)?)?,
                None => config.sweep.clone().ok_or_else(|| Error::Config("no sweep spec given".into()))?,
            };
            let csv = harness::sweep(&spec)?.to_csv()?;
            match out {
                Some(p) => std::fs::write(p, csv).map_err(io)?,
                None => print!("{csv}"),
            }
            Ok(EXIT_OK)
        }
        Cmd::Steinweiss { case, n, b, tol, seed } => {
            let c = match case {
                SwKind::Diag => SwCase::Diagonal,
                SwKind::T2 => SwCase::TSquared,
            };
            let r = harness::steinweiss_report(c, n, b, tol, seed.unwrap_or(config.seed))?;
            println!("{}", r.to_json()?);
            Ok(r.exit_code())
        }
        Cmd::Convergence { family, n, a, k, eps, ratio } => {
            let fam = match family {
                SeqKind::Powercut => SequenceFamily::PowerCut,
                SeqKind::Tail => SequenceFamily::TailIntegral,
            };
            let ratio = match ratio {
                Ratio::Weakhr => RatioKind::WeakHR,
                Ratio::Rellich1d => RatioKind::Rellich1D,
                Ratio::Hardy1d => RatioKind::Hardy1D,
            };
            let eps = if eps.is_empty() { config.grids.eps.clone() } else { eps };
            let t = harness::convergence_study(fam, ratio, n, a, k, &eps)?;
            print!("{}", t.to_csv()?);
            eprintln!("target {} limit {} fitted order {:.3}", t.target, t.limit, t.fitted_order);
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if usage_error(&e) { EXIT_USAGE } else { EXIT_FAIL } as u8)
        }
    }
}

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use heegner_lift::cli::suite::{
    acceptance_suite, run_criterion, verify_charsum, verify_current, verify_cusp, verify_degree, verify_kronecker,
    verify_lemmacoset, verify_theta_modularity, CriterionOutcome,
};
use heegner_lift::cli::table::{eisenstein_table, green_profile, theta_heatmap};
use heegner_lift::cli::{parse_rational, Manifest, RunConfig};
use heegner_lift::heegner::twisted_divisor;
use heegner_lift::lattice::UpperHalfPoint;
use heegner_lift::lifts::{
    csv_summary, hodge_pairing_coefficient, verify_eisenstein_lift, verify_log_delta_lift, verify_unfolding,
    verify_vanishing_lift, VerificationReport,
};
use heegner_lift::Error;
use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "heegner-lift", version, about = "Twisted Heegner divisors, Green functions and theta lifts on X0(N)")]
struct Cli {
    /// `key = value` configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Level N (squarefree).
    #[arg(short = 'N', long = "level", global = true)]
    level: Option<i64>,
    /// Fundamental discriminant Δ > 0.
    #[arg(short = 'D', long = "delta", global = true)]
    delta: Option<i64>,
    /// Twist residue r with r² ≡ Δ (mod 4N).
    #[arg(short = 'r', long = "twist-r", global = true)]
    twist_r: Option<i64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for the manifest, the JSON reports and CSV tables.
    #[arg(long = "out", global = true)]
    out: Option<PathBuf>,
    /// Truncation budget for lattice sums.
    #[arg(long, global = true)]
    budget: Option<f64>,
    /// Seed for sampled points.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Square grid size of the fundamental-domain quadrature.
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the twisted Heegner divisor Z_Δ,r(n, μ) as JSON.
    Divisor(Stratum),
    /// Check one identity and print a JSON report.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Write a CSV table.
    Table {
        #[command(subcommand)]
        table: Table,
    },
}

#[derive(Args, Debug, Clone)]
struct Stratum {
    /// Index n as p/q.
    #[arg(short = 'n', long, default_value = "1", allow_hyphen_values = true)]
    n: String,
    /// Coset μ mod 2N.
    #[arg(short = 'm', long = "mu", default_value_t = 0)]
    mu: i64,
}

#[derive(Args, Debug, Clone)]
struct WithV {
    #[command(flatten)]
    stratum: Stratum,
    /// Im τ.
    #[arg(long, default_value_t = 1.0)]
    v: f64,
}

#[derive(Subcommand, Debug)]
enum Check {
    /// Degree zero of every nonempty divisor with n ≤ nmax.
    Degree {
        #[arg(long, default_value = "5")]
        nmax: String,
    },
    /// Character sums and α-coefficients on square strata.
    Charsum {
        #[arg(long, default_value_t = 400)]
        dmax: i64,
    },
    /// The orbit-count identity and its closed form on square strata.
    Lemmacoset {
        #[arg(long, default_value_t = 400)]
        dmax: i64,
    },
    /// Decay of the Green function at every cusp.
    Cusp {
        #[command(flatten)]
        at: WithV,
        #[arg(long, default_value_t = 1e-4)]
        tolerance: f64,
    },
    /// Finite-difference current equation at points x,y.
    Current {
        #[command(flatten)]
        at: WithV,
        #[arg(long = "z", required = true, value_parser = parse_pair)]
        points: Vec<(f64, f64)>,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
    },
    /// Modularity of the theta kernel at τ = u,v and z = x,y.
    Theta {
        #[arg(long, default_value = "0,1", value_parser = parse_tau)]
        tau: (f64, f64),
        #[arg(long, default_value = "0,2", value_parser = parse_pair)]
        z: (f64, f64),
    },
    /// Lift of the Eisenstein series and its unfolded form at τ = u,v.
    Eislift {
        #[arg(long, default_value = "0,1", value_parser = parse_tau)]
        tau: (f64, f64),
        #[arg(long, default_value_t = 2.5)]
        s: f64,
    },
    /// The lift of the constant function 1 at τ = u,v.
    Vanish {
        #[arg(long, default_value = "0,1", value_parser = parse_tau)]
        tau: (f64, f64),
    },
    /// Kronecker limit formula at seeded random points.
    Kronecker {
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Fourier coefficient of the lift of log‖Δ_N‖.
    Logdelta(WithV),
    /// Pairing of log‖Δ_N‖ against ω_Δ,r(n, μ).
    Hodge(WithV),
    /// One acceptance criterion (1 to 10).
    Criterion { number: u8 },
    /// The whole acceptance suite.
    All,
}

#[derive(Subcommand, Debug)]
enum Table {
    /// Normalized E_L(τ, s) on a τ grid.
    Eisenstein {
        #[arg(long, default_value_t = 2.5)]
        s: f64,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 0.5)]
        v_min: f64,
        #[arg(long, default_value_t = 3.0)]
        v_max: f64,
    },
    /// |Θ(τ, z)| over the fundamental domain.
    Theta {
        #[arg(long, default_value = "0,1", value_parser = parse_tau)]
        tau: (f64, f64),
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 3.0)]
        y_max: f64,
    },
    /// The Green function along x + iy.
    Green {
        #[command(flatten)]
        at: WithV,
        #[arg(long, default_value_t = 0.0)]
        x: f64,
        #[arg(long, default_value_t = 1.0)]
        y_min: f64,
        #[arg(long, default_value_t = 40.0)]
        y_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected x,y but got '{s}'"))?;
    let a = a.trim().parse().map_err(|_| format!("bad number '{a}'"))?;
    let b = b.trim().parse().map_err(|_| format!("bad number '{b}'"))?;
    Ok((a, b))
}

/// τ as `u,v`, or in complex notation such as `i`, `0.25+i` or `(1+4i)/4`.
fn parse_tau(s: &str) -> std::result::Result<(f64, f64), String> {
    let s = s.trim().replace(' ', "");
    if !s.contains('i') {
        return parse_pair(&s);
    }
    let bad = || format!("cannot read '{s}' as a complex number");
    let (num, den) = match s.rsplit_once('/') {
        Some((n, d)) if !d.contains('i') => (n.trim_start_matches('(').trim_end_matches(')'), d.parse::<f64>().map_err(|_| bad())?),
        _ => (s.as_str(), 1.0),
    };
    let body = num.strip_suffix('i').ok_or_else(bad)?;
    // split at the last sign that is not a leading one or part of an exponent
    let cut = body
        .char_indices()
        .filter(|&(k, ch)| (ch == '+' || ch == '-') && k > 0 && !matches!(body.as_bytes()[k - 1], b'e' | b'E'))
        .map(|(k, _)| k)
        .next_back();
    let (re, im) = match cut {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => t.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok((re / den, im / den))
}

fn point((x, y): (f64, f64)) -> Result<UpperHalfPoint> {
    Ok(UpperHalfPoint::new(x, y)?)
}

fn tau((u, v): (f64, f64)) -> Result<Complex64> {
    if v <= 0.0 {
        return Err(Error::InvalidParameter(format!("τ = {u} + {v}i is not in the upper half-plane")).into());
    }
    Ok(Complex64::new(u, v))
}

fn rational(s: &str) -> Result<Rational64> {
    Ok(parse_rational(s)?)
}

fn config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(n) = cli.level {
        cfg.level = n;
    }
    if let Some(d) = cli.delta {
        cfg.delta = d;
    }
    if let Some(r) = cli.twist_r {
        cfg.twist_r = r;
    }
    if let Some(b) = cli.budget {
        cfg.budget = b;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(g) = cli.grid {
        cfg.quadrature.nx = g;
        cfg.quadrature.ny = g;
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = Some(o.clone());
    }
    cfg.quadrature.validate()?;
    heegner_lift::lattice::Level::new(cfg.level)?;
    Ok(cfg)
}

fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> Result<()> {
    let path = dir.join(name);
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
}

enum Outcome {
    Reports(Vec<VerificationReport>),
    Criteria(Vec<CriterionOutcome>),
    Json(serde_json::Value),
    Csv(String),
}

fn execute(cli: &Cli, cfg: &RunConfig) -> Result<Outcome> {
    // commands that only need the level do not require a valid twist
    let twist = || cfg.twist();
    let spec = &cfg.quadrature;
    Ok(match &cli.command {
        Command::Divisor(s) => Outcome::Json(twisted_divisor(&twist()?, rational(&s.n)?, s.mu)?.to_json()),
        Command::Verify { check } => match check {
            Check::Degree { nmax } => Outcome::Reports(vec![verify_degree(twist()?, rational(nmax)?)?]),
            Check::Charsum { dmax } => Outcome::Reports(vec![verify_charsum(twist()?, *dmax)?]),
            Check::Lemmacoset { dmax } => Outcome::Reports(vec![verify_lemmacoset(twist()?, *dmax)?]),
            Check::Cusp { at, tolerance } => Outcome::Reports(vec![verify_cusp(
                twist()?,
                rational(&at.stratum.n)?,
                at.stratum.mu,
                at.v,
                cfg.budget,
                *tolerance,
            )?]),
            Check::Current { at, points, h } => {
                let pts = points.iter().map(|&p| point(p)).collect::<Result<Vec<_>>>()?;
                Outcome::Reports(vec![verify_current(
                    twist()?,
                    rational(&at.stratum.n)?,
                    at.stratum.mu,
                    at.v,
                    &pts,
                    *h,
                    cfg.budget,
                )?])
            }
            Check::Theta { tau: t, z } => {
                Outcome::Reports(vec![verify_theta_modularity(twist()?, tau(*t)?, point(*z)?, cfg.budget)?])
            }
            Check::Eislift { tau: t, s } => {
                let t = tau(*t)?;
                Outcome::Reports(vec![
                    verify_eisenstein_lift(twist()?, t, *s, spec, cfg.c_max)?,
                    verify_unfolding(twist()?, t, *s, spec, cfg.c_max)?,
                ])
            }
            Check::Vanish { tau: t } => Outcome::Reports(vec![verify_vanishing_lift(twist()?, tau(*t)?, spec)?]),
            Check::Kronecker { samples } => Outcome::Reports(vec![verify_kronecker(cfg.level, *samples, cfg.seed)?]),
            Check::Logdelta(at) => {
                Outcome::Reports(vec![verify_log_delta_lift(twist()?, rational(&at.stratum.n)?, at.stratum.mu, at.v, spec)?])
            }
            Check::Hodge(at) => Outcome::Reports(vec![hodge_pairing_coefficient(
                twist()?,
                rational(&at.stratum.n)?,
                at.stratum.mu,
                at.v,
                spec,
            )?]),
            Check::Criterion { number } => {
                let o = run_criterion(*number, spec, cfg.seed);
                eprintln!("{}", o.line());
                Outcome::Criteria(vec![o])
            }
            Check::All => Outcome::Criteria(acceptance_suite(spec, cfg.seed, |o| eprintln!("{}", o.line()))),
        },
        Command::Table { table } => Outcome::Csv(match table {
            Table::Eisenstein { s, points, v_min, v_max } => {
                eisenstein_table(cfg.level, *s, (*v_min, *v_max), *points, cfg.c_max)?
            }
            Table::Theta { tau: t, points, y_max } => theta_heatmap(twist()?, tau(*t)?, *y_max, *points, cfg.budget)?,
            Table::Green { at, x, y_min, y_max, points } => green_profile(
                twist()?,
                rational(&at.stratum.n)?,
                at.stratum.mu,
                at.v,
                *x,
                (*y_min, *y_max),
                *points,
                cfg.budget,
            )?,
        }),
    })
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = config(cli)?;
    let threads = match cli.threads {
        Some(k) => {
            rayon::ThreadPoolBuilder::new().num_threads(k).build_global().context("starting the thread pool")?;
            k
        }
        None => rayon::current_num_threads(),
    };
    let outcome = execute(cli, &cfg)?;
    let dir = cfg.output_dir.clone();
    if let Some(d) = &dir {
        std::fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
        write_json(d, "manifest.json", &Manifest::new(std::env::args().collect(), &cfg, threads))?;
    }
    let passed = match outcome {
        Outcome::Reports(reports) => {
            println!("{}", serde_json::to_string_pretty(&reports)?);
            if let Some(d) = &dir {
                write_json(d, "report.json", &reports)?;
                std::fs::write(d.join("report.csv"), csv_summary(&reports))?;
            }
            reports.iter().all(|r| r.passed)
        }
        Outcome::Criteria(outcomes) => {
            for o in &outcomes {
                println!("{}", o.line());
            }
            if let Some(d) = &dir {
                write_json(d, "report.json", &outcomes)?;
                let reports: Vec<VerificationReport> = outcomes.iter().flat_map(|o| o.reports.clone()).collect();
                std::fs::write(d.join("report.csv"), csv_summary(&reports))?;
            }
            outcomes.iter().all(|o| o.passed)
        }
        Outcome::Json(v) => {
            println!("{}", serde_json::to_string_pretty(&v)?);
            if let Some(d) = &dir {
                write_json(d, "divisor.json", &v)?;
            }
            true
        }
        Outcome::Csv(text) => {
            match &dir {
                Some(d) => std::fs::write(d.join("table.csv"), &text)?,
                None => print!("{text}"),
            }
            true
        }
    };
    Ok(passed)
}

fn main() -> ExitCode {
    // accept the single-dash spelling `-mu`
    let args = std::env::args().map(|a| if a == "-mu" { "--mu".to_string() } else { a });
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<Error>().map(Error::exit_code).unwrap_or(3);
            ExitCode::from(code as u8)
        }
    }
}

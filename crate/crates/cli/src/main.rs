use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use eisenshift::census::{
    exact_census_with, monte_carlo, ExperimentReport, MonteCarloConfig, CSV_HEADER, DEFAULT_ENUM_CAP,
    REPORT_FOOTER,
};
use eisenshift::density::{density_report, DensityReport, DEFAULT_PRIME_COUNT};
use eisenshift::eisenstein::{
    eisenstein_primes, naive_shift_scan, shifted_eisenstein, ShiftedDecision, DEFAULT_SCAN_CAP,
};
use eisenshift::primes::{first_primes, DEFAULT_RHO_ITERATIONS, DEFAULT_SEED, DEFAULT_TRIAL_BOUND};
use eisenshift::serde_big;
use eisenshift::{Error, FactorBudget, IntPoly};

/// Eisenstein and shifted-Eisenstein certificates, density constants and census experiments.
///
/// Polynomials are comma-separated integer coefficients in ascending order:
/// `5,4,1` is x^2 + 4x + 5.
#[derive(Debug, Parser)]
#[command(name = "eisenshift", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for sampling and for the randomized factoring steps.
    #[arg(long, global = true, env = "EISENSHIFT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Primes up to this bound are removed by trial division.
    #[arg(long, global = true, default_value_t = DEFAULT_TRIAL_BOUND)]
    trial_bound: u64,

    /// Pollard rho iterations allowed per composite.
    #[arg(long, global = true, default_value_t = DEFAULT_RHO_ITERATIONS)]
    rho_iterations: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test the Eisenstein conditions and list every witness prime.
    Check {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Decide whether some integer shift of the polynomial is Eisenstein.
    Shift {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// Scan every shift up to the proven bound instead of using the decision procedure.
        #[arg(long)]
        oracle: bool,
        /// Largest shift bound the oracle scan accepts.
        #[arg(long, default_value_t = DEFAULT_SCAN_CAP)]
        scan_cap: u64,
    },
    /// Density constants rho_n, tau_n, gamma_n and P_n.
    Density {
        #[arg(long = "degree", required = true, num_args = 1..)]
        degrees: Vec<usize>,
        /// Number of primes in the truncated sums and products.
        #[arg(long, default_value_t = DEFAULT_PRIME_COUNT)]
        primes: usize,
    },
    /// Classify every polynomial of the given degree and height.
    Census {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        enum_cap: u64,
        #[command(flatten)]
        run: RunOptions,
    },
    /// Estimate counts from uniformly sampled polynomials.
    Montecarlo {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        samples: u64,
        #[command(flatten)]
        run: RunOptions,
    },
}

#[derive(Debug, Args)]
struct Shape {
    #[arg(long)]
    degree: usize,
    #[arg(long)]
    height: u64,
}

#[derive(Debug, Args)]
struct RunOptions {
    /// Also write the report as a CSV row to this path.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Serialize)]
struct CheckRecord<'a> {
    command: &'static str,
    polynomial: &'a IntPoly,
    eisenstein: bool,
    #[serde(with = "serde_big::uint_vec")]
    witnesses: Vec<num_bigint::BigUint>,
}

#[derive(Serialize)]
struct ShiftRecord<'a> {
    command: &'static str,
    polynomial: &'a IntPoly,
    method: &'static str,
    decision: &'a ShiftedDecision,
}

#[derive(Serialize)]
struct DensityRecord<'a> {
    command: &'static str,
    prime_count: usize,
    largest_prime: u64,
    reports: &'a [DensityReport],
}

#[derive(Serialize)]
struct ExperimentRecord<'a> {
    command: &'static str,
    report: &'a ExperimentReport,
    note: &'static str,
}

enum Failure {
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn budget(cli: &Cli) -> FactorBudget {
    FactorBudget {
        trial_bound: cli.trial_bound,
        rho_iterations: cli.rho_iterations,
        seed: cli.seed,
        ..FactorBudget::default()
    }
}

fn parse_poly(s: &str) -> Result<IntPoly, Failure> {
    let f: IntPoly = s.parse()?;
    if f.is_zero() {
        return Err(Failure::Input("the zero polynomial is not allowed".into()));
    }
    Ok(f)
}

fn emit_json<T: Serialize>(record: &T) -> Result<(), Failure> {
    let line = serde_json::to_string(record).map_err(|e| Failure::Input(e.to_string()))?;
    println!("{line}");
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Check { poly } => cmd_check(cli, poly),
        Command::Shift {
            poly,
            oracle,
            scan_cap,
        } => cmd_shift(cli, poly, *oracle, *scan_cap),
        Command::Density { degrees, primes } => cmd_density(cli, degrees, *primes),
        Command::Census {
            shape,
            enum_cap,
            run,
        } => {
            let report = exact_census_with(shape.degree, shape.height, *enum_cap, &budget(cli), run.workers)?;
            emit_experiment(cli, "census", &report, run.csv.as_deref())
        }
        Command::Montecarlo {
            shape,
            samples,
            run,
        } => {
            let cfg = MonteCarloConfig {
                n: shape.degree,
                height: shape.height,
                samples: *samples,
                seed: cli.seed,
                budget: budget(cli),
                workers: run.workers,
            };
            let report = monte_carlo(&cfg)?;
            emit_experiment(cli, "montecarlo", &report, run.csv.as_deref())
        }
    }
}

fn cmd_check(cli: &Cli, poly: &str) -> Outcome {
    let f = parse_poly(poly)?;
    let witnesses = eisenstein_primes(&f)?;
    let eisenstein = !witnesses.is_empty();
    match cli.format {
        Format::Json => emit_json(&CheckRecord {
            command: "check",
            polynomial: &f,
            eisenstein,
            witnesses: witnesses.clone(),
        })?,
        Format::Text if eisenstein => {
            let list: Vec<String> = witnesses.iter().map(|p| p.to_string()).collect();
            println!("{}: Eisenstein at {}", f.pretty(), list.join(", "));
        }
        Format::Text => println!("{}: not Eisenstein", f.pretty()),
    }
    Ok(if eisenstein { 0 } else { 1 })
}

fn cmd_shift(cli: &Cli, poly: &str, oracle: bool, scan_cap: u64) -> Outcome {
    let f = parse_poly(poly)?;
    let decision = if oracle {
        naive_shift_scan(&f, scan_cap)?
    } else {
        shifted_eisenstein(&f, &budget(cli))?
    };
    match cli.format {
        Format::Json => emit_json(&ShiftRecord {
            command: "shift",
            polynomial: &f,
            method: if oracle { "oracle-scan" } else { "decision" },
            decision: &decision,
        })?,
        Format::Text => match &decision {
            ShiftedDecision::Yes { certificate } => println!(
                "YES {certificate}: f(x + {}) = {}",
                certificate.shift,
                f.taylor_shift(&certificate.shift).pretty()
            ),
            ShiftedDecision::NoCertified { reason } => {
                println!("NO (certified): {}", serde_json::to_value(reason).unwrap_or_default().as_str().unwrap_or(""))
            }
            ShiftedDecision::NoHeuristic { diagnostics } => {
                let cands: Vec<String> = diagnostics.candidates.iter().map(|p| p.to_string()).collect();
                println!(
                    "NO (heuristic): unsplit cofactor {}; candidate primes [{}]; raise --rho-iterations to retry",
                    diagnostics.uncertified_cofactor,
                    cands.join(", ")
                );
            }
        },
    }
    Ok(match decision {
        ShiftedDecision::Yes { .. } => 0,
        ShiftedDecision::NoCertified { .. } => 1,
        ShiftedDecision::NoHeuristic { .. } => 3,
    })
}

fn cmd_density(cli: &Cli, degrees: &[usize], count: usize) -> Outcome {
    if count == 0 {
        return Err(Failure::Input("--primes must be at least 1".into()));
    }
    let primes = first_primes(count);
    let reports = degrees
        .iter()
        .map(|&n| density_report(n, &primes))
        .collect::<Result<Vec<_>, _>>()?;
    let largest = *primes.last().expect("count >= 1");
    match cli.format {
        Format::Json => emit_json(&DensityRecord {
            command: "density",
            prime_count: count,
            largest_prime: largest,
            reports: &reports,
        })?,
        Format::Text => {
            println!("first {count} primes (largest {largest})");
            println!(
                "{:>3}  {:>14}  {:>14}  {:>14}  {:>14}  {:>14}",
                "n", "rho_n", "tau_n", "gamma_n", "P_n", "P_n tail <="
            );
            for r in &reports {
                println!(
                    "{:>3}  {:>14}  {:>14}  {:>14}  {:>14}  {:>14}",
                    r.n,
                    r.rho.to_sci(6),
                    r.tau.to_sci(6),
                    r.gamma.to_sci(6),
                    r.p_n.to_sci(6),
                    r.tail_bound.to_sci(3)
                );
            }
        }
    }
    Ok(0)
}

fn write_csv(path: &Path, report: &ExperimentReport) -> Result<(), Failure> {
    let io = |e: csv::Error| Failure::Input(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(CSV_HEADER).map_err(io)?;
    w.write_record(report.csv_record()).map_err(io)?;
    w.flush()
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn emit_experiment(cli: &Cli, command: &'static str, report: &ExperimentReport, csv: Option<&Path>) -> Outcome {
    if let Some(path) = csv {
        write_csv(path, report)?;
    }
    match cli.format {
        Format::Json => emit_json(&ExperimentRecord {
            command,
            report,
            note: REPORT_FOOTER,
        })?,
        Format::Text => {
            let opt = |v: Option<f64>, digits: usize| v.map_or("n/a".to_string(), |x| format!("{x:.digits$}"));
            println!("kind:                 {}", report.kind);
            println!("degree:               {}", report.n);
            println!("maximum height:       {}", report.height);
            println!("polynomials:          {}", report.samples);
            println!("shifted Eisenstein:   {}", report.shifted_count);
            println!("Eisenstein:           {}", report.eisenstein_count);
            println!("F set (f, f(x+1)):    {}", report.f_count);
            println!("ratio:                {}", opt(report.ratio, 4));
            if report.ci_low.is_some() {
                println!(
                    "95% interval:         [{}, {}]",
                    opt(report.ci_low, 4),
                    opt(report.ci_high, 4)
                );
            }
            if let Some(seed) = report.seed {
                println!("seed:                 {seed}");
            }
            println!("unresolved:           {}", report.unresolved_count);
            println!();
            println!("{REPORT_FOOTER}");
        }
    }
    Ok(0)
}

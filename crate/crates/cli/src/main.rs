use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use randrep::exact::Effect;
use randrep::simulation::{
    ecdf_curves, expectation_oracle, lambda_sweep_curve, parse_grid, run_table, write_curve_csv,
    write_table_csv, SimulationSetting,
};
use randrep::validity::{exact_lfc_cdf, exact_rand_cdf, unit_grid, write_curves_csv};
use randrep::{analyze, AnalysisParams, Error, PValueKind, ReplicabilityConfig, ZScoreMatrix};

mod args;

use args::{parse_kinds, parse_sweep, parse_theta};

#[derive(Debug, Parser)]
#[command(name = "randrep", version, about = "Randomized p-values for replicability analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo table of E[pi0_hat(lambda)] over a grid of settings.
    SimulateTable {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides `reps` from the config file.
        #[arg(long)]
        reps: Option<usize>,
        /// Overrides `seed` from the config file.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Comma-separated subset of lfc,rand,stouffer,fisher.
        #[arg(long)]
        pvalue_kind: Option<String>,
    },
    /// Semi-analytic expectations for the LFC and randomized kinds (Z model).
    OracleTable {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// ECDFs of one replicate, or the mean estimator over a lambda sweep.
    SimulateCurves {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// `a:b:step`; without it, the p-value ECDFs of one replicate are written.
        #[arg(long)]
        lambda_sweep: Option<String>,
        #[arg(long, default_value_t = 0)]
        replicate: usize,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        pvalue_kind: Option<String>,
    },
    /// Exact CDFs of the LFC and randomized p-values for one effect column.
    CdfCurves {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        gamma: usize,
        #[arg(long)]
        n: usize,
        /// Per-study effects, e.g. `-0.2121x5,1x5`; `inf` marks an infinite effect.
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long, default_value_t = 1001)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// BH selection on a primary study, then replicability p-values and pi0 estimates.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        primary: String,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        gamma: usize,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        #[arg(long, default_value_t = 100_000)]
        rand_repeats: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Report destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) => 1,
        Error::Data(_) | Error::Io(_) => 2,
        Error::Domain(_)
        | Error::DegenerateSample(_)
        | Error::UnsupportedModel(_)
        | Error::Precondition(_) => 3,
    }
}

/// First output line: the full invocation.
fn provenance() -> String {
    let args: Vec<String> = std::env::args().skip(1).collect();
    format!("# randrep {} {}\n", env!("CARGO_PKG_VERSION"), args.join(" "))
}

fn create(path: &Path) -> randrep::Result<BufWriter<File>> {
    let mut f = BufWriter::new(File::create(path)?);
    f.write_all(provenance().as_bytes())?;
    Ok(f)
}

fn load_grid(
    path: &Path,
    reps: Option<usize>,
    seed: Option<u64>,
    kinds: Option<&str>,
) -> randrep::Result<Vec<SimulationSetting>> {
    let text = std::fs::read_to_string(path)?;
    let mut spec = parse_grid(&text)?;
    if let Some(r) = reps {
        spec.base.reps = r;
    }
    if let Some(s) = seed {
        spec.base.seed = s;
    }
    if let Some(k) = kinds {
        spec.base.pvalue_kinds = parse_kinds(k)?;
    }
    spec.validate()?;
    Ok(spec.settings())
}

fn run(command: Command) -> randrep::Result<()> {
    match command {
        Command::SimulateTable {
            config,
            out,
            reps,
            seed,
            workers,
            pvalue_kind,
        } => {
            let grid = load_grid(&config, reps, seed, pvalue_kind.as_deref())?;
            let cells = run_table(&grid, workers)?;
            let mut f = create(&out)?;
            write_table_csv(&mut f, &cells)?;
            f.flush()?;
        }
        Command::OracleTable { config, out } => {
            let grid = load_grid(&config, None, None, None)?;
            let mut f = create(&out)?;
            writeln!(f, "gamma,pi0,mu_min,mu_max,kind,expected,lambda")?;
            for s in &grid {
                for kind in [PValueKind::Lfc, PValueKind::Rand] {
                    let e = expectation_oracle(s, kind)?;
                    writeln!(
                        f,
                        "{},{},{},{},{kind},{e},{}",
                        s.gamma, s.pi0, s.mu_min, s.mu_max, s.lambda
                    )?;
                }
            }
            f.flush()?;
        }
        Command::SimulateCurves {
            config,
            out,
            lambda_sweep,
            replicate,
            points,
            reps,
            seed,
            workers,
            pvalue_kind,
        } => {
            let grid = load_grid(&config, reps, seed, pvalue_kind.as_deref())?;
            let [setting] = grid.as_slice() else {
                return Err(Error::Config(format!(
                    "curves need a single setting, the config describes {}",
                    grid.len()
                )));
            };
            let curve = match lambda_sweep {
                Some(spec) => lambda_sweep_curve(setting, &parse_sweep(&spec)?, workers)?,
                None => {
                    if points < 2 {
                        return Err(Error::Config("need at least 2 points".into()));
                    }
                    ecdf_curves(setting, replicate, &unit_grid(points))?
                }
            };
            let mut f = create(&out)?;
            write_curve_csv(&mut f, &curve)?;
            f.flush()?;
        }
        Command::CdfCurves {
            s,
            gamma,
            n,
            theta,
            points,
            out,
        } => {
            let cfg = ReplicabilityConfig::with_half(s, gamma)?;
            let effects: Vec<Effect> = parse_theta(&theta)?;
            if effects.len() != s {
                return Err(Error::Config(format!(
                    "--theta has {} effects but --s is {s}",
                    effects.len()
                )));
            }
            if n == 0 || points < 2 {
                return Err(Error::Config("need n >= 1 and at least 2 points".into()));
            }
            let grid = unit_grid(points);
            let lfc = exact_lfc_cdf(&effects, &cfg, n, &grid)?;
            let rand = exact_rand_cdf(&effects, &cfg, n, &grid)?;
            let mut f = create(&out)?;
            write_curves_csv(&mut f, &lfc, &rand)?;
            f.flush()?;
        }
        Command::Analyze {
            input,
            primary,
            q,
            gamma,
            lambda,
            rand_repeats,
            seed,
            workers,
            out,
        } => {
            let matrix = ZScoreMatrix::from_path(&input)?;
            let params = AnalysisParams {
                primary_study: primary,
                q,
                gamma,
                lambda,
                rand_repeats,
                seed,
            };
            let report = analyze(&matrix, &params, workers)?;
            match out {
                Some(path) => {
                    let mut f = create(&path)?;
                    write!(f, "{report}")?;
                    f.flush()?;
                }
                None => {
                    let mut stdout = io::stdout().lock();
                    stdout.write_all(provenance().as_bytes())?;
                    write!(stdout, "{report}")?;
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("randrep: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

//! Batch driver: parse a config, run one command, write its artifacts.
//!
//! Exit codes: 0 success, 2 configuration or I/O error, 3 numeric refusal.

mod artifact;
mod commands;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use randfourier::coefficients::CoefficientSequence;
use randfourier::hypotheses::Hypothesis;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use artifact::{CommandKind, Format, Manifest, Outcome};
use config::{BoundScanConfig, ConditionsConfig, CounterexampleCliConfig, HypothesisConfig, SimulateConfig, SupStatConfig};

#[derive(Parser)]
#[command(name = "randfourier", version, about = "Experiments on randomly sampled Fourier series")]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON config; defaults are used for absent fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "H")]
    H,
    #[value(name = "Hprime")]
    Hprime,
    #[value(name = "Hsecond")]
    Hsecond,
}

#[derive(Subcommand)]
enum Command {
    /// Cauchy profile of one realization.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Coefficient conditions, total variation and block criterion.
    CheckConditions {
        #[command(flatten)]
        common: Common,
    },
    /// Grid scan of one of the mean-part hypotheses.
    CheckHypothesis {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        which: Option<Which>,
    },
    /// Dirichlet integrals and the L² identity for the integer counterexample.
    Counterexample {
        #[command(flatten)]
        common: Common,
        /// Use `a_k = k^-delta`.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        kmax: Option<u64>,
    },
    /// Normalized centered sums over a wide `α` range.
    BoundScan {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha_max: Option<f64>,
    },
    /// Monte-Carlo normalized sup statistic.
    SupStat {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        seeds: Option<u64>,
    },
    /// Repeat the run recorded in an artifact's embedded manifest.
    Rerun {
        #[arg(long)]
        from: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

enum Failure {
    Config(String),
    Refusal { kind: String, reason: String },
}

impl From<randfourier::Error> for Failure {
    fn from(e: randfourier::Error) -> Self {
        if e.is_numeric_refusal() {
            Failure::Refusal { kind: refusal_kind(&e).to_string(), reason: e.to_string() }
        } else {
            Failure::Config(e.to_string())
        }
    }
}

fn refusal_kind(e: &randfourier::Error) -> &'static str {
    use randfourier::Error::*;
    match e {
        Divergent(_) => "divergent",
        Overflow { .. } => "overflow",
        InfiniteMoment { .. } => "infinite_moment",
        MomentUnavailable { .. } => "moment_unavailable",
        GridTooCoarse(_) => "grid_too_coarse",
        AperiodicityViolated { .. } => "aperiodicity_violated",
        QuadratureUnderResolved(_) => "quadrature_under_resolved",
        InvalidParameter(_) | Expression { .. } => "invalid",
    }
}

fn parse_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, Failure> {
    let Some(path) = path else { return Ok(T::default()) };
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::Config(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
    })
}

fn from_manifest<T: DeserializeOwned>(v: &Value) -> Result<T, Failure> {
    serde_json::from_value(v.clone()).map_err(|e| Failure::Config(format!("embedded config: {e}")))
}

fn to_value<T: Serialize>(c: &T) -> Value {
    serde_json::to_value(c).expect("configs serialize")
}

/// Builds the manifest for a fresh run: file config, then flag overrides.
fn resolve(command: Command) -> Result<(Manifest, PathBuf), Failure> {
    let (kind, common, config) = match command {
        Command::Simulate { common } => {
            let c: SimulateConfig = parse_config(common.config.as_deref())?;
            (CommandKind::Simulate, common, to_value(&c))
        }
        Command::CheckConditions { common } => {
            let c: ConditionsConfig = parse_config(common.config.as_deref())?;
            (CommandKind::CheckConditions, common, to_value(&c))
        }
        Command::CheckHypothesis { common, which } => {
            let mut c: HypothesisConfig = parse_config(common.config.as_deref())?;
            if let Some(w) = which {
                c.which = match w {
                    Which::H => Hypothesis::H,
                    Which::Hprime => Hypothesis::Hprime,
                    Which::Hsecond => Hypothesis::Hsecond,
                };
            }
            (CommandKind::CheckHypothesis, common, to_value(&c))
        }
        Command::Counterexample { common, delta, kmax } => {
            let mut c: CounterexampleCliConfig = parse_config(common.config.as_deref())?;
            if let Some(d) = delta {
                c.a = CoefficientSequence::power_law(d, 1.0)?;
            }
            if let Some(k) = kmax {
                c.k_max = k;
            }
            (CommandKind::Counterexample, common, to_value(&c))
        }
        Command::BoundScan { common, alpha_max } => {
            let mut c: BoundScanConfig = parse_config(common.config.as_deref())?;
            if let Some(a) = alpha_max {
                c.alpha_max = a;
            }
            (CommandKind::BoundScan, common, to_value(&c))
        }
        Command::SupStat { common, seeds } => {
            let mut c: SupStatConfig = parse_config(common.config.as_deref())?;
            if let Some(s) = seeds {
                c.seeds = s;
            }
            (CommandKind::SupStat, common, to_value(&c))
        }
        Command::Rerun { from, out } => {
            let m = artifact::read_manifest(&from).map_err(Failure::Config)?;
            return Ok((m, out));
        }
    };
    Ok((Manifest { command: kind, seed: common.seed, format: common.format, config }, common.out))
}

fn execute(m: &Manifest) -> Result<Outcome, Failure> {
    let seed = m.seed;
    let out = match m.command {
        CommandKind::Simulate => {
            let c: SimulateConfig = from_manifest(&m.config)?;
            c.validate()?;
            commands::simulate(&c, seed)?
        }
        CommandKind::CheckConditions => {
            let c: ConditionsConfig = from_manifest(&m.config)?;
            c.validate()?;
            commands::check_conditions(&c)?
        }
        CommandKind::CheckHypothesis => {
            let c: HypothesisConfig = from_manifest(&m.config)?;
            c.validate()?;
            commands::check_hypothesis(&c)?
        }
        CommandKind::Counterexample => {
            let c: CounterexampleCliConfig = from_manifest(&m.config)?;
            c.validate()?;
            commands::counterexample(&c, seed)?
        }
        CommandKind::BoundScan => {
            let c: BoundScanConfig = from_manifest(&m.config)?;
            c.validate()?;
            commands::bound_scan(&c, seed)?
        }
        CommandKind::SupStat => {
            let c: SupStatConfig = from_manifest(&m.config)?;
            c.validate()?;
            commands::sup_stat(&c, seed)?
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (manifest, out) = match resolve(cli.command) {
        Ok(r) => r,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Refusal { reason, .. }) => {
            eprintln!("config error: {reason}");
            return ExitCode::from(2);
        }
    };
    match execute(&manifest) {
        Ok(outcome) => match artifact::write_outcome(&out, &manifest, &outcome) {
            Ok(paths) => {
                for p in paths {
                    println!("{}", p.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: writing to {}: {e}", out.display());
                ExitCode::from(2)
            }
        },
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Refusal { kind, reason }) => {
            eprintln!("refused: {reason}");
            match artifact::write_refusal(&out, &manifest, &kind, &reason) {
                Ok(p) => println!("{}", p.display()),
                Err(e) => eprintln!("error: writing to {}: {e}", out.display()),
            }
            ExitCode::from(3)
        }
    }
}

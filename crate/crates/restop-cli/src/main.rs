//! `restop` — command-line harness for repeated optimal stopping experiments.
//!
//! Subcommands: `simulate` runs a JSON-described experiment; `counterexample`
//! runs the single-sample baseline on its linear-regret instance;
//! `lower-bound` evaluates the exact follow-the-leader regret oracle;
//! `schedule` tabulates the switching margins; `verify-oracle` cross-checks
//! the exact machinery against independent computations.
//!
//! Exit codes: 0 success, 1 unexpected I/O failure, 2 configuration error,
//! 3 oracle-check failure.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use restop_core::harness::{run_experiment, ExperimentConfig, Selector};
use restop_core::lower_bound::ftl_exact_regret_with;
use restop_core::model::ProfitKind;
use restop_core::switching::{schedule, Delta1Form, ScheduleConfig, ScheduleVariant};

mod verify;

#[derive(Parser)]
#[command(
    name = "restop",
    version,
    about = "Experiment harness for repeated optimal stopping"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_variant(s: &str) -> Result<ScheduleVariant, String> {
    match s {
        "general" => Ok(ScheduleVariant::General),
        "pi-refined" => Ok(ScheduleVariant::PiRefined),
        other => Err(format!("unknown schedule variant '{other}' (expected 'general' or 'pi-refined')")),
    }
}

fn parse_delta1_form(s: &str) -> Result<Delta1Form, String> {
    match s {
        "theorem" => Ok(Delta1Form::Theorem),
        "corollary" => Ok(Delta1Form::Corollary),
        other => Err(format!("unknown delta1 form '{other}' (expected 'theorem' or 'corollary')")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config file.
    Simulate {
        /// Path to the experiment description.
        config: PathBuf,
    },
    /// Exact expected regret of follow-the-empirical-leader on the
    /// two-policy separation pair.
    LowerBound {
        /// Horizon (number of rounds).
        #[arg(long = "T")]
        t: u64,
        /// Perturbation of the hard pair; defaults to 1/(8·sqrt(T)).
        #[arg(long)]
        eps: Option<f64>,
        /// Break count ties toward the accept-1/2 policy instead.
        #[arg(long)]
        tie_minus: bool,
    },
    /// Run the single-sample baseline on the instance where its per-round
    /// guarantee coexists with linear regret.
    Counterexample {
        /// Gap parameter of the two-step instance (0 < eps < 1/2).
        #[arg(long)]
        eps: f64,
        /// Horizon (number of rounds).
        #[arg(long = "T")]
        t: u64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print the switching schedule as a CSV table for t = 2..=t-max.
    Schedule {
        #[arg(long)]
        t_max: u64,
        #[arg(long, default_value = "general", value_parser = parse_variant)]
        variant: ScheduleVariant,
        /// Multiplier on the played margin.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value = "theorem", value_parser = parse_delta1_form)]
        delta1_form: Delta1Form,
        /// Pattern-count parameter.
        #[arg(long, default_value_t = 2)]
        kappa: u64,
        /// Profit bound.
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Split-point floor.
        #[arg(long, default_value_t = 1)]
        t0: u64,
    },
    /// Cross-check the exact optima, the regret oracle, and the schedule
    /// against independent recomputations.
    VerifyOracle {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Why a subcommand could not finish, mapped onto the exit codes.
pub enum Failure {
    /// Bad flags, bad JSON, or an invalid model/config (exit 2).
    Config(String),
    /// The environment failed an I/O operation (exit 1).
    Io(String),
    /// One or more oracle checks failed (exit 3).
    Checks,
}

impl From<restop_core::Error> for Failure {
    fn from(e: restop_core::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli.command) {
        Ok(()) => 0,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Io(msg)) => {
            eprintln!("i/o error: {msg}");
            1
        }
        Err(Failure::Checks) => 3,
    };
    std::process::exit(code);
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Simulate { config } => cmd_simulate(&config),
        Command::LowerBound { t, eps, tie_minus } => cmd_lower_bound(t, eps, tie_minus),
        Command::Counterexample { eps, t, trials, seed } => {
            cmd_counterexample(eps, t, trials, seed)
        }
        Command::Schedule { t_max, variant, scale, delta1_form, kappa, b, t0 } => {
            cmd_schedule(t_max, variant, scale, delta1_form, kappa, b, t0)
        }
        Command::VerifyOracle { seed } => verify::run(seed),
    }
}

/// Emit a finished report: rows to the configured output file with the
/// summary on stdout, or rows to stdout with the summary on stderr.
fn emit_report(report: &restop_core::harness::Report) -> Result<(), Failure> {
    let summary = serde_json::to_string(&report.summary_json(None)).expect("summary serializes");
    match &report.config.output {
        Some(path) => {
            let file = File::create(path)?;
            let mut w = BufWriter::new(file);
            report.write_csv(&mut w)?;
            w.flush()?;
            println!("{summary}");
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            report.write_csv(&mut w)?;
            w.flush()?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn cmd_simulate(path: &std::path::Path) -> Result<(), Failure> {
    let text = std::fs::read_to_string(path)?;
    let config: ExperimentConfig =
        serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let report = run_experiment(&config)?;
    emit_report(&report)
}

fn cmd_lower_bound(t: u64, eps: Option<f64>, tie_minus: bool) -> Result<(), Failure> {
    let eps = eps.unwrap_or(1.0 / (8.0 * (t as f64).sqrt()));
    let regret = ftl_exact_regret_with(t, eps, ProfitKind::Reward, !tie_minus)?;
    let out = json!({
        "T": t,
        "eps": eps,
        "tie_to_plus": !tie_minus,
        "regret": regret,
        "regret_over_sqrt_t": regret / (t as f64).sqrt(),
    });
    println!("{out}");
    Ok(())
}

fn cmd_counterexample(eps: f64, t: u64, trials: u64, seed: u64) -> Result<(), Failure> {
    let instance = restop_core::lower_bound::counterexample_instance(eps)?;
    let config = ExperimentConfig {
        instance,
        t_rounds: t,
        trials,
        seed,
        selector: Selector::BaselineOnly,
        family: restop_core::baselines::BaselineFamily::ProphetSingleSample,
        learner: restop_core::dp::LearnerMode::MarginalDp,
        schedule: Default::default(),
        output: None,
    };
    let report = run_experiment(&config)?;
    emit_report(&report)
}

#[allow(clippy::too_many_arguments)]
fn cmd_schedule(
    t_max: u64,
    variant: ScheduleVariant,
    scale: f64,
    delta1_form: Delta1Form,
    kappa: u64,
    b: f64,
    t0: u64,
) -> Result<(), Failure> {
    if t_max < 2 {
        return Err(Failure::Config("t-max must be at least 2".into()));
    }
    let cfg = ScheduleConfig::new(t0, variant, b, kappa, scale, delta1_form)?;
    let stdout = std::io::stdout();
    let mut w = BufWriter::new(stdout.lock());
    writeln!(w, "t,zeta,eps1,delta1,eps,delta")?;
    for t in 2..=t_max {
        let sv = schedule(t, &cfg)?;
        writeln!(
            w,
            "{},{},{},{},{},{}",
            t,
            sv.zeta,
            restop_core::harness::format_sig12(sv.eps1_at_zeta),
            restop_core::harness::format_sig12(sv.delta1_at_zeta),
            restop_core::harness::format_sig12(sv.eps_t),
            restop_core::harness::format_sig12(sv.delta_t),
        )?;
    }
    w.flush()?;
    Ok(())
}

//! The `mqtm` command line: `run`, `trials`, `compile` and `validate`.
//!
//! Exit status is 0 on success (a halting run, a conformant machine), 2 when
//! a run exhausts its step budget, and 1 on any error or violation.

mod input;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

pub use input::InputSpec;
pub use report::{run_trials, sig, ClassComparison, RunReport, RunStats, TrialStats};

use crate::compiler::{check_conformance, compile, Backend};
use crate::error::{Error, Result};
use crate::machine::{
    format_machine, parse_machine, seeded_rng, FreshCells, MachineDefinition, RunOptions, DEFAULT_MAX_STEPS,
};
use crate::observables::ModelName;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Fresh {
    /// Unvisited cells start in |0>.
    #[default]
    Zero,
    /// Unvisited cells start in a random product state fixed by the seed.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum BackendArg {
    #[default]
    Transfer,
    Teleport,
}

#[derive(Debug, Parser)]
#[command(name = "mqtm", version, about = "Simulate and compile measurement-based quantum Turing machines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    /// Machine description file.
    pub machine: PathBuf,
    /// Input: a basis string (`011`), per-qubit terms (`0.6|0>+0.8|1>; |1>`)
    /// or an amplitude vector (`[c0,c1,...]`).
    #[arg(long, short, default_value = "")]
    pub input: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
    #[arg(long, value_enum, default_value_t)]
    pub fresh: Fresh,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one seeded simulation.
    Run {
        #[command(flatten)]
        args: RunArgs,
        /// Print every step.
        #[arg(long)]
        trace: bool,
    },
    /// Run seeded simulations with seeds `seed, seed+1, ...` and summarize.
    Trials {
        #[command(flatten)]
        args: RunArgs,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Lower a machine to a smaller resource model.
    Compile {
        machine: PathBuf,
        /// Model the machine is written for.
        #[arg(long)]
        from: ModelName,
        /// Model to lower to.
        #[arg(long = "model", visible_alias = "to")]
        to: ModelName,
        #[arg(long, value_enum, default_value_t)]
        backend: BackendArg,
        /// Write the lowered machine here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check a machine against a resource model.
    Validate {
        machine: PathBuf,
        #[arg(long)]
        model: ModelName,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

fn load(path: &Path) -> Result<MachineDefinition> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    parse_machine(&text)
}

fn prepare(args: &RunArgs, err: &mut dyn Write) -> Result<(MachineDefinition, crate::quantum::RegisterState, RunOptions)> {
    let m = load(&args.machine)?;
    let spec = InputSpec::parse(&args.input)?;
    if let Some(w) = &spec.warning {
        let _ = writeln!(err, "warning: {w}");
    }
    let input = spec.place(m.input_cells(spec.qubits))?;
    let opts = RunOptions {
        max_steps: args.max_steps,
        fresh: match args.fresh {
            Fresh::Zero => FreshCells::Zero,
            Fresh::Random => FreshCells::RandomProduct { seed: args.seed },
        },
        ..Default::default()
    };
    Ok((m, input, opts))
}

fn emit(out: &mut dyn Write, format: Format, text: String, json: String) {
    let _ = match format {
        Format::Text => write!(out, "{text}"),
        Format::Json => writeln!(out, "{json}"),
    };
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data")
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Run { args, trace } => {
            let (m, input, opts) = prepare(&args, err)?;
            let r = m.run(&input, &mut seeded_rng(args.seed), &opts)?;
            let report = RunReport::new(&r, trace)?;
            emit(out, args.format, report.to_text(), json(&report));
            if r.halted {
                Ok(0)
            } else {
                let _ = writeln!(err, "fuel exhausted at {} steps", r.final_config.step_count);
                Ok(2)
            }
        }
        Command::Trials { args, trials } => {
            if trials == 0 {
                return Err(Error::Precondition("--trials must be at least 1".into()));
            }
            let (m, input, opts) = prepare(&args, err)?;
            let stats = run_trials(&m, &input, trials, args.seed, &opts, 1 << 12)?;
            let body = serde_json::json!({
                "halted": stats.halted_fraction,
                "steps": stats.steps_mean,
                "outcomes": stats.histogram.keys().collect::<Vec<_>>(),
                "output_state": [],
                "stats": stats,
            });
            emit(out, args.format, stats.to_text(), json(&body));
            Ok(0)
        }
        Command::Compile {
            machine,
            from,
            to,
            backend,
            output,
            format,
        } => {
            let m = load(&machine)?;
            let backend = match backend {
                BackendArg::Transfer => Backend::Transfer,
                BackendArg::Teleport => Backend::Teleport,
            };
            let (lowered, report) = compile(&m, from, to, backend)?;
            let text = format_machine(&lowered);
            match output {
                Some(path) => {
                    std::fs::write(&path, &text)
                        .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))?;
                    emit(out, format, report.to_text(), report.to_json());
                }
                None => {
                    let _ = write!(out, "{text}");
                    emit(err, format, report.to_text(), report.to_json());
                }
            }
            Ok(0)
        }
        Command::Validate { machine, model, format } => {
            let m = load(&machine)?;
            let v = check_conformance(&m, model);
            let text = if v.is_empty() {
                "[]\n".to_string()
            } else {
                v.iter().map(|x| format!("{x}\n")).collect()
            };
            emit(out, format, text, json(&v));
            Ok(if v.is_empty() { 0 } else { 1 })
        }
    }
}

/// Run the command line with explicit arguments and streams; returns the
/// exit status.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

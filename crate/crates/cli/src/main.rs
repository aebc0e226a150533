//! `fridge`: cooling curves, crossing points, summaries and oracle checks
//! for minimal quantum refrigerators.

mod config;
mod format;
mod summary;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fridge_core::crossing::find_crossing;
use fridge_core::curves::{self, AlgoStart, CoolingCurve};
use fridge_core::ladder::{coherent_ladder, incoherent_ladder, LadderOutcome, LadderSpec, PreheatModel};
use fridge_core::protocols::Repetitions;
use fridge_core::{FridgeError, MachineSpec, Temperature};
use fridge_oracle::verify::{run_suite, VerifyOptions, DEFAULT_SEED};

use config::{layered, parse_energy, parse_seed, parse_temperature, resolve_seed, FileConfig};
use format::{write_csv, Precision};

#[derive(Parser)]
#[command(name = "fridge", version, about = "Minimal quantum refrigerators: curves, crossings, summaries and oracle checks")]
struct Cli {
    /// Key-value file with keys E, E_C, T_R, T_H, N, seed; flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a cooling curve as CSV (control,delta_f,temperature,r).
    Curve(CurveArgs),
    /// Locate where the incoherent and coherent single-cycle curves cross.
    Crossing {
        #[command(flatten)]
        machine: MachineArgs,
        /// Bisection tolerance on ΔF.
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
    /// Lowest temperatures and work costs of every protocol, as JSON.
    Summary {
        #[command(flatten)]
        machine: MachineArgs,
    },
    /// Run the closed-form vs oracle suite; exits 1 if any check fails.
    Verify {
        /// Oracle seed (decimal or 0x hex); FRIDGE_SEED is used when absent.
        #[arg(long, value_parser = parse_seed)]
        seed: Option<u64>,
        /// Haar unitaries for the optimality sweep; 0 skips it.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Corrupt the named check to confirm it can fail.
        #[arg(long, value_name = "CHECK")]
        mutate: Option<String>,
    },
    /// Coherent and incoherent ladder outcomes, as JSON.
    Ladder {
        #[command(flatten)]
        machine: MachineArgs,
        #[command(flatten)]
        ladder: LadderArgs,
        /// Number of stages.
        #[arg(long = "stages", short = 'N')]
        stages: Option<usize>,
    },
}

#[derive(Args, Clone)]
struct MachineArgs {
    /// Target gap E.
    #[arg(long = "e", value_name = "E", value_parser = parse_energy)]
    e: Option<f64>,
    /// Gap E_C; the machine is resonant, E_B = E + E_C.
    #[arg(long = "e-c", value_name = "E_C", value_parser = parse_energy)]
    e_c: Option<f64>,
    /// Room temperature T_R (or `inf`).
    #[arg(long = "t-room", value_name = "T_R", value_parser = parse_temperature)]
    t_room: Option<Temperature>,
    /// Hot-bath temperature T_H (or `inf`).
    #[arg(long = "t-hot", value_name = "T_H", value_parser = parse_temperature)]
    t_hot: Option<Temperature>,
}

#[derive(Args, Clone)]
struct LadderArgs {
    /// Final target temperature T_C of the ladder.
    #[arg(long = "t-cold", default_value_t = 0.5)]
    t_cold: f64,
    #[arg(long, value_enum, default_value_t = Preheat::Embedded)]
    preheat: Preheat,
    /// Ground offset E_g of the embedded ladder; default 50·max(T_H, T_R)·(N+1).
    #[arg(long = "e-ground")]
    e_ground: Option<f64>,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long, value_enum)]
    scenario: Scenario,
    #[command(flatten)]
    machine: MachineArgs,
    /// Number of rows; ladders use N = 1..=grid.
    #[arg(long, default_value_t = 100)]
    grid: usize,
    /// Output file; stdout when absent or `-`.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Print every number with round-trip precision instead of 6 significant digits.
    #[arg(long)]
    full_precision: bool,
    /// Cycles per point for inc-repeat (integer or `inf`); the config key N also sets it.
    #[arg(long, value_parser = parse_repetitions)]
    repetitions: Option<Repetitions>,
    /// Precooling fraction ν for algo.
    #[arg(long, default_value_t = 1.0)]
    nu: f64,
    /// Starting point of algo.
    #[arg(long, value_enum, default_value_t = Start::Coherent)]
    start: Start,
    #[command(flatten)]
    ladder: LadderArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scenario {
    IncSingle,
    CohSingle,
    IncRepeat,
    CohRepeat,
    Algo,
    InternalInc,
    InternalCoh,
    LadderCoh,
    LadderInc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Start {
    /// Thermal target, no prior cooling.
    Thermal,
    /// After infinitely many coherent cycles, whose cost is included.
    Coherent,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preheat {
    Embedded,
    Real,
}

impl From<Preheat> for PreheatModel {
    fn from(p: Preheat) -> Self {
        match p {
            Preheat::Embedded => PreheatModel::Embedded,
            Preheat::Real => PreheatModel::RealQubits,
        }
    }
}

fn parse_repetitions(s: &str) -> Result<Repetitions, String> {
    match s.trim() {
        "inf" | "infinity" => Ok(Repetitions::Infinite),
        n => n.parse().map(Repetitions::Finite).map_err(|_| format!("invalid repetition count {s:?}")),
    }
}

/// Failure classes, mapped to exit codes 1 and 2.
enum Failure {
    Verification,
    Usage(String),
}

impl From<FridgeError> for Failure {
    fn from(e: FridgeError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Usage(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Resolved {
    e: f64,
    e_c: f64,
    t_room: Temperature,
    t_hot: Option<Temperature>,
}

impl MachineArgs {
    fn resolve(&self, file: &FileConfig) -> Result<Resolved, String> {
        Ok(Resolved {
            e: layered(self.e, file, "E", parse_energy, Some(1.0))?.expect("default"),
            e_c: layered(self.e_c, file, "E_C", parse_energy, Some(0.4))?.expect("default"),
            t_room: layered(self.t_room, file, "T_R", parse_temperature, Some(Temperature::Finite(1.0)))?
                .expect("default"),
            t_hot: layered(self.t_hot, file, "T_H", parse_temperature, None)?,
        })
    }

    fn spec(&self, file: &FileConfig) -> Result<MachineSpec, Failure> {
        let r = self.resolve(file)?;
        Ok(MachineSpec::two_qubit_resonant(r.e, r.e_c, r.t_room, r.t_hot)?)
    }
}

fn ladder_spec(m: &MachineArgs, l: &LadderArgs, n: usize, file: &FileConfig) -> Result<LadderSpec, Failure> {
    let r = m.resolve(file)?;
    let Temperature::Finite(tr) = r.t_room else {
        return Err(Failure::Usage("ladders need a finite room temperature".into()));
    };
    let mut spec = LadderSpec::coherent(n, l.t_cold, tr)?;
    spec.target_gap = r.e;
    spec.e_ground_offset = l.e_ground;
    if let Some(th) = r.t_hot {
        spec = spec.with_hot(th, l.preheat.into());
    }
    Ok(spec)
}

fn print_json(value: &impl Serialize) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn curve(args: &CurveArgs, file: &FileConfig) -> Result<(), Failure> {
    let m = &args.machine;
    let curve: CoolingCurve = match args.scenario {
        Scenario::IncSingle => curves::incoherent_single_curve(&m.spec(file)?, args.grid)?,
        Scenario::CohSingle => curves::coherent_single_curve(&m.spec(file)?, args.grid)?,
        Scenario::IncRepeat => {
            let n = layered(args.repetitions, file, "N", parse_repetitions, Some(Repetitions::Infinite))?
                .expect("default");
            curves::incoherent_repeat_curve(&m.spec(file)?, n, args.grid)?
        }
        Scenario::CohRepeat => curves::coherent_repeat_curve(&m.spec(file)?, args.grid)?,
        Scenario::Algo => {
            let start = match args.start {
                Start::Thermal => AlgoStart::Thermal,
                Start::Coherent => AlgoStart::CoherentAsymptote,
            };
            curves::algorithmic_curve(&m.spec(file)?, args.nu, start, args.grid)?
        }
        Scenario::InternalInc => curves::internal_incoherent_curve(&m.spec(file)?, args.grid)?,
        Scenario::InternalCoh => curves::internal_coherent_curve(&m.spec(file)?, args.grid)?,
        Scenario::LadderCoh => curves::ladder_curve(&ladder_spec(m, &args.ladder, 1, file)?, false, args.grid)?,
        Scenario::LadderInc => {
            let base = ladder_spec(m, &args.ladder, 1, file)?;
            if base.t_hot.is_none() {
                return Err(Failure::Usage("ladder-inc needs a hot bath (--t-hot or T_H)".into()));
            }
            curves::ladder_curve(&base, true, args.grid)?
        }
    };
    let precision = if args.full_precision { Precision::Full } else { Precision::Short };
    match args.output.as_deref() {
        None => write_csv(&mut io::stdout().lock(), &curve, precision)?,
        Some(p) if p.as_os_str() == "-" => write_csv(&mut io::stdout().lock(), &curve, precision)?,
        Some(p) => {
            let f = File::create(p).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
            let mut w = BufWriter::new(f);
            write_csv(&mut w, &curve, precision)?;
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct LadderReport {
    coherent: LadderOutcome,
    incoherent: Option<LadderOutcome>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    match &cli.command {
        Command::Curve(args) => curve(args, &file),
        Command::Crossing { machine, tolerance } => print_json(&find_crossing(&machine.spec(&file)?, *tolerance)?),
        Command::Summary { machine } => print_json(&summary::summarize(&machine.spec(&file)?)?),
        Command::Verify { seed, samples, mutate } => {
            let env = std::env::var("FRIDGE_SEED").ok();
            let seed = resolve_seed(*seed, env.as_deref(), &file, DEFAULT_SEED)?;
            let report = run_suite(&VerifyOptions {
                seed,
                samples: *samples,
                mutate: mutate.clone(),
            })?;
            print_json(&report)?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Ladder { machine, ladder, stages } => {
            let n = layered(*stages, &file, "N", |s| s.parse::<usize>().map_err(|e| e.to_string()), Some(16))?
                .expect("default");
            let spec = ladder_spec(machine, ladder, n, &file)?;
            let incoherent = match spec.t_hot {
                Some(_) => Some(incoherent_ladder(&spec)?),
                None => None,
            };
            print_json(&LadderReport {
                coherent: coherent_ladder(&spec)?,
                incoherent,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

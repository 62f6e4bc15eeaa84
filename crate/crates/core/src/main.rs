use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use echogate::cli::{exit_code, run_command, Command, RunConfig};
use echogate::Error;

#[derive(Parser)]
#[command(name = "echogate", version, about = "Spin-echo Rydberg gate simulator")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    /// JSON run configuration; every field is optional.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Dotted override, e.g. `gate.eta=12` or `L=16`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    /// CSV destination (default: `output.csv` from the config, else stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// spin_echo or traditional
    #[arg(long, global = true)]
    protocol: Option<String>,
    /// dressing or near_resonant
    #[arg(long, global = true)]
    regime: Option<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Derived frequencies, durations and closed-form leakage.
    Derive,
    /// Per-substep populations of the control-excited branch.
    Trace,
    /// Error budget at `gate_error.ta_uk`.
    GateError,
    /// Error budget over `sweep.ta_uk`.
    SweepTemp,
    /// Forward/swap/backward many-body echo.
    Manybody,
    /// Spin-echo and traditional budgets side by side.
    Compare,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Derive => Command::Derive,
            Cmd::Trace => Command::Trace,
            Cmd::GateError => Command::GateError,
            Cmd::SweepTemp => Command::SweepTemp,
            Cmd::Manybody => Command::Manybody,
            Cmd::Compare => Command::Compare,
        }
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("ECHOGATE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("ECHOGATE_THREADS={raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}

fn run(args: &Args) -> Result<(), Error> {
    configure_threads()?;
    let mut overrides = args.set.clone();
    // flags win over --set
    if let Some(s) = args.seed {
        overrides.push(format!("sweep.seed={s}"));
    }
    if let Some(n) = args.samples {
        overrides.push(format!("sweep.samples={n}"));
    }
    if let Some(p) = &args.protocol {
        let p: echogate::echogate::Protocol = p.parse()?;
        overrides.push(format!("protocol=\"{}\"", p.as_str()));
    }
    if let Some(r) = &args.regime {
        let r: echogate::manybody::Regime = r.parse()?;
        overrides.push(format!("manybody.regime={}", serde_json::to_string(&r).expect("enum")));
    }
    let cfg = RunConfig::load(args.config.as_deref(), &overrides)?;
    let table = run_command(args.command.into(), &cfg)?;
    match args.out.as_ref().or(cfg.output.csv.as_ref()) {
        Some(path) => {
            let f = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            table.write(BufWriter::new(f))
        }
        None => table.write(io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("echogate: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

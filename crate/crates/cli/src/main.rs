use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use semrra::harness::{crossover_mu, emit_csv, run_fig3_comparison, run_scenario, write_csv};
use semrra::link_adaptation::check_builtin_tables;
use semrra::scenario::load_scenario;
use semrra::{Error, RecordParam, SweepParam, SweepRecord};

/// Semantic-aware radio resource allocation experiments.
#[derive(Parser, Debug)]
#[command(name = "semrra", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario (optionally a sweep) and write one CSV row per system and point.
    Run {
        scenario: PathBuf,
        /// Output CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the number of drops.
        #[arg(long)]
        drops: Option<usize>,
        /// Override the base seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Ideal-system assignment with fixed k versus the jointly optimized model.
    Fig3 {
        scenario: PathBuf,
        /// Comma-separated fixed symbols-per-word values.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        k: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inspect the builtin CQI tables.
    Tables {
        /// Verify the transcribed efficiencies against pinned digests.
        #[arg(long)]
        check: bool,
    },
}

fn output(records: &[SweepRecord], out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => emit_csv(records, path),
        None => write_csv(records, std::io::stdout().lock()),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            scenario,
            out,
            drops,
            seed,
        } => {
            let mut cfg = load_scenario(&scenario)?;
            if let Some(n) = drops {
                cfg.n_drops = n;
            }
            if let Some(s) = seed {
                cfg.base_seed = s;
            }
            let records = run_scenario(&cfg)?;
            output(&records, out.as_deref())?;
            let is_mu_sweep = records
                .iter()
                .any(|r| r.sweep_param == RecordParam::Sweep(SweepParam::Mu));
            if is_mu_sweep {
                for c in crossover_mu(&records) {
                    let mu = c.mu.map_or("none".to_string(), |m| format!("{m:.4}"));
                    eprintln!("crossover {} vs semantic: mu = {mu}", c.system);
                }
            }
            Ok(())
        }
        Command::Fig3 { scenario, k, out } => {
            let cfg = load_scenario(&scenario)?;
            let records = run_fig3_comparison(&cfg, &k)?;
            output(&records, out.as_deref())
        }
        Command::Tables { check } => {
            let checks = check_builtin_tables();
            for c in &checks {
                if check {
                    let status = if c.ok() { "ok" } else { "MISMATCH" };
                    println!("{status}  {}  {}", c.name, c.actual);
                } else {
                    println!("{}  {}", c.name, c.actual);
                }
            }
            if check && !checks.iter().all(|c| c.ok()) {
                return Err(Error::Validation("CQI transcription digest mismatch".into()));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_io() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

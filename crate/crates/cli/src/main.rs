use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "liewave", version, about = "Damped wave experiments on tori, SU(2) and SO(3)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run { config: PathBuf },
    /// Parse and validate a config file without running it.
    Validate { config: PathBuf },
    /// List the initial-data presets and experiments.
    Presets,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    liewave_cli::configure_threads();
    let code = match cli.command {
        Command::Presets => {
            print!("{}", liewave_cli::presets_listing());
            0
        }
        Command::Validate { config } => match liewave_cli::config::load(&config) {
            Ok(c) => {
                println!("ok: {} on {} (B = {})", c.config.experiment.name(), c.spec.name(), c.spec.bandlimit());
                0
            }
            Err(e) => {
                eprintln!("{e}");
                e.exit_code()
            }
        },
        Command::Run { config } => match liewave_cli::run(&config) {
            Ok(s) => {
                let r = &s.report;
                for v in &r.verdicts {
                    println!("{:<26} {}", v.name, v.verdict);
                }
                if let Some(d) = &r.diagnostic {
                    eprintln!("{d}");
                }
                println!("{} -> {} ({:.2}s)", r.experiment, s.output_dir.display(), r.wall_time_s);
                r.exit_code
            }
            Err(e) => {
                eprintln!("{e}");
                e.exit_code()
            }
        },
    };
    ExitCode::from(code as u8)
}

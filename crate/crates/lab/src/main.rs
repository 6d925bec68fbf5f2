use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mixlab::{export_report, run_experiment, verify, write_report, ExperimentConfig, Format, LabError, Report, SCENARIOS};

#[derive(Parser)]
#[command(name = "mixlab", about = "Exact mixing and largeness experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a JSON config, or a bare scenario name with default parameters.
    Run {
        config: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Re-run a saved JSON report and compare everything but wall time.
    Verify { report: PathBuf },
    /// List the available scenarios.
    ListScenarios,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

fn read(path: &std::path::Path) -> Result<String, LabError> {
    std::fs::read_to_string(path).map_err(|source| LabError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_config(arg: &str) -> Result<ExperimentConfig, LabError> {
    let path = std::path::Path::new(arg);
    if !path.exists() && SCENARIOS.contains(&arg) {
        return ExperimentConfig::default_for(arg);
    }
    ExperimentConfig::from_json(&read(path)?)
}

fn run(cli: Cli) -> Result<bool, LabError> {
    match cli.command {
        Command::Run {
            config,
            out,
            format,
            budget,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(b) = budget {
                cfg.set_budget(b);
            }
            let rep = run_experiment(&cfg)?;
            let format = match format {
                FormatArg::Json => Format::Json,
                FormatArg::Csv => Format::Csv,
            };
            match out {
                Some(path) => write_report(&rep, format, &path)?,
                None => {
                    let bytes = export_report(&rep, format)?;
                    print!("{}", String::from_utf8_lossy(&bytes));
                }
            }
            eprintln!("{}: {}", if rep.verdict.pass { "PASS" } else { "FAIL" }, rep.verdict.line);
            Ok(rep.verdict.pass)
        }
        Command::Verify { report } => {
            let rep = Report::from_json(&read(&report)?)?;
            let v = verify(&rep)?;
            if v.reproduced {
                println!("reproduced: {}", rep.verdict.line);
            } else {
                println!("mismatch: stored \"{}\", rerun \"{}\"", rep.verdict.line, v.rerun.verdict.line);
            }
            Ok(v.reproduced)
        }
        Command::ListScenarios => {
            for name in SCENARIOS {
                println!("{name}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use toroidal_cli::{dump, run_scenario, CliError, DumpKind, ScenarioConfig};

#[derive(Parser)]
#[command(name = "toroidal", version, about = "Exact checks for twisted toroidal vertex operators")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Basis,
    Operator,
    Closure,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the checks of a scenario (a JSON path or a bundled name).
    Run {
        config: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated check names, replacing the scenario's list.
        #[arg(long)]
        checks: Option<String>,
        /// Comma-separated `key=value` cap overrides.
        #[arg(long)]
        caps: Option<String>,
    },
    /// Write a JSON artifact: the module bases, an operator matrix, or the field closure.
    Dump {
        what: What,
        config: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// For `operator`: `c` or `LABEL@T0@M1,...,Mr`.
        #[arg(long)]
        element: Option<String>,
        #[arg(long)]
        caps: Option<String>,
    },
}

fn load(config: &str, caps: Option<&str>) -> Result<ScenarioConfig, CliError> {
    let mut cfg = ScenarioConfig::load(config)?;
    if let Some(c) = caps {
        cfg.override_caps(c)?;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<u8, CliError> = match cli.cmd {
        Cmd::Run { config, out, seed, checks, caps } => (|| {
            let mut cfg = load(&config, caps.as_deref())?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(c) = checks {
                cfg.select_checks(&c)?;
            }
            let out = out.unwrap_or_else(|| cfg.output.clone());
            let summary = run_scenario(&cfg, &out)?;
            for c in &summary.checks {
                println!("{} {} (checked {}, failures {}, skipped {})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.checked, c.failure_count, c.skipped);
            }
            println!("reports in {}", out.display());
            Ok(u8::from(!summary.passed))
        })(),
        Cmd::Dump { what, config, out, element, caps } => (|| {
            let cfg = load(&config, caps.as_deref())?;
            let kind = match what {
                What::Basis => DumpKind::Basis,
                What::Operator => DumpKind::Operator,
                What::Closure => DumpKind::Closure,
            };
            let out = out.unwrap_or_else(|| cfg.output.clone());
            let path = dump(&cfg, kind, element.as_deref(), &out)?;
            println!("{}", path.display());
            Ok(0)
        })(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}

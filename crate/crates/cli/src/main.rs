//! Command-line front end for the radial Dirac finite element solver.

mod config;
mod error;
mod render;
mod run;

use std::env;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Overrides, RunConfig, CONFIG_ENV};
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "dirac-fem",
    version,
    about = "Finite element spectra of the radial Coulomb-Dirac operator"
)]
struct Cli {
    /// Config file of `key = value` lines (default: $DIRAC_FEM_CONFIG)
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

fn config_path(cli: &Cli) -> Option<PathBuf> {
    cli.config.clone().or_else(|| {
        env::var_os(CONFIG_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    })
}

/// Writes every artifact or none of them.
fn emit(text: &str, out: Option<&PathBuf>, files: Vec<(PathBuf, Vec<u8>)>) -> Result<(), CliError> {
    let mut written: Vec<PathBuf> = Vec::new();
    let mut targets = files;
    if let Some(path) = out {
        targets.insert(0, (path.clone(), text.as_bytes().to_vec()));
    }
    for (path, bytes) in &targets {
        if let Err(e) = fs::write(path, bytes) {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(CliError::Output(format!(
                "cannot write {}: {e}",
                path.display()
            )));
        }
        written.push(path.clone());
    }
    if out.is_none() {
        io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Output(e.to_string()))?;
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let file = match config_path(&cli) {
        Some(path) => Overrides::load(&path)?,
        None => Overrides::default(),
    };
    let cfg = RunConfig::resolve(file.layered_under(cli.overrides))?;
    let report = run::run(&cfg)?;
    let text = render::render(&report)?;
    let dumps = match &cfg.dump {
        Some(prefix) => report
            .dumps
            .iter()
            .map(|(suffix, bytes)| {
                (
                    PathBuf::from(format!("{}.{suffix}", prefix.display())),
                    bytes.clone(),
                )
            })
            .collect(),
        None => Vec::new(),
    };
    emit(&text, cfg.out.as_ref(), dumps)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dirac-fem: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

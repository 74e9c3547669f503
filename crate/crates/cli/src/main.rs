//! `enzpair`: spectra of vacuum photon pairs from a Kerr-modulated ENZ film.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{DispersionArgs, OracleArgs, PhotonsArgs, SpectrumArgs, ValidateArgs};

#[derive(Debug, Parser)]
#[command(name = "enzpair", version, about)]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<std::path::PathBuf>,

    /// Figure preset (fig2, fig4, fig5); `dispersion` also takes material presets.
    #[arg(long, global = true, value_name = "NAME")]
    pub preset: Option<String>,

    /// Output file (a directory for `sweep`). Defaults to stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,

    /// Output format: csv or json.
    #[arg(long, global = true, value_name = "FORMAT")]
    pub format: Option<String>,

    /// Worker threads for mode solves; all cores when omitted.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate ε′, ε″, n_r, n_i and Kerr factors against wavelength.
    Dispersion(DispersionArgs),
    /// Solve one spectrum at the configured rise time.
    Spectrum(SpectrumArgs),
    /// One spectrum per rise time in `sweep.taus_fs`.
    Sweep(SpectrumArgs),
    /// Closed-form nondispersive spectrum.
    Oracle(OracleArgs),
    /// Recompute photon numbers of a spectrum CSV for another geometry.
    Photons(PhotonsArgs),
    /// Check a configuration and run the invariant suite on a few modes.
    Validate(ValidateArgs),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = e
                .downcast_ref::<enzpair_core::Error>()
                .map_or("cli", enzpair_core::Error::kind);
            let report = serde_json::json!({
                "error": kind,
                "message": format!("{e:#}"),
            });
            eprintln!("{report}");
            ExitCode::FAILURE
        }
    }
}

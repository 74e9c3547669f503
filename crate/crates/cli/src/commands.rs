use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use enzpair_core::config::{self, OutputFormat, RunConfig, FIGURE_PRESETS, MATERIAL_PRESETS};
use enzpair_core::io::{self as eio, DispersionRow, Report, RunReport};
use enzpair_core::mode_solver::WRONSKIAN_TOLERANCE;
use enzpair_core::units::{fs_to_s, nm_to_m, um_to_m, C};
use enzpair_core::{
    enz_crossing, frequency_trajectory, kerr_factors, permittivity, photon_number, run_spectrum,
    sech2_spectrum, solve_mode, tau_sweep, EmissionGeometry, Medium, ModeProblem,
    NondispersiveSetup, Scenario, SolverSettings, SpectrumResult, SpectrumRow, VacuumMode,
};
use serde::Serialize;

use crate::{Cli, Command};

#[derive(Debug, Args)]
pub struct DispersionArgs {
    #[arg(long, default_value_t = 800.0)]
    pub lambda_min_nm: f64,
    #[arg(long, default_value_t = 2400.0)]
    pub lambda_max_nm: f64,
    #[arg(long, default_value_t = 1601)]
    pub n_points: usize,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Override `pulse.tau_fs` (`spectrum`) or `sweep.taus_fs` (`sweep`, comma separated).
    #[arg(long, value_delimiter = ',')]
    pub tau_fs: Option<Vec<f64>>,
    /// Override `grid.n_points`.
    #[arg(long)]
    pub n_points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 1.0)]
    pub n0: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub delta: f64,
    #[arg(long, default_value_t = 5.0)]
    pub tau_fs: f64,
    /// Lower grid bound on c·k·τ.
    #[arg(long, default_value_t = 0.1)]
    pub k_scaled_min: f64,
    #[arg(long, default_value_t = 20.0)]
    pub k_scaled_max: f64,
    #[arg(long, default_value_t = 200)]
    pub n_points: usize,
    #[arg(long, default_value_t = 1.0)]
    pub l_um: f64,
    #[arg(long)]
    pub damping_factor: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PhotonsArgs {
    /// Spectrum CSV to post-process.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub l_um: f64,
    #[arg(long)]
    pub damping_factor: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Spectrum CSV whose rows should be reproduced.
    #[arg(long)]
    pub against: Option<PathBuf>,
    /// Recompute every row of `--against` instead of a sample.
    #[arg(long)]
    pub all_rows: bool,
}

pub fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    match &cli.command {
        Command::Dispersion(a) => dispersion(cli, a),
        Command::Spectrum(a) => spectrum(cli, a),
        Command::Sweep(a) => sweep(cli, a),
        Command::Oracle(a) => oracle(cli, a),
        Command::Photons(a) => photons(cli, a),
        Command::Validate(a) => validate(cli, a),
    }
}

fn load_config(cli: &Cli) -> Result<(RunConfig, Vec<String>)> {
    let (mut config, defaults) = match (&cli.config, &cli.preset) {
        (Some(_), Some(_)) => bail!("give either --config or --preset, not both"),
        (Some(path), None) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            config::parse_config_with_defaults(&text)?
        }
        (None, Some(name)) => {
            config::parse_config_with_defaults(&format!("preset = \"{name}\"\n"))?
        }
        (None, None) => bail!("a run needs --config PATH or --preset NAME"),
    };
    if let Some(f) = &cli.format {
        config.output.format = f.parse()?;
    }
    if let Some(out) = &cli.out {
        config.output.path = Some(out.display().to_string());
    }
    Ok((config, defaults))
}

fn apply_overrides(config: &mut RunConfig, args: &SpectrumArgs, sweep: bool) -> Result<()> {
    if let Some(taus) = &args.tau_fs {
        if sweep {
            config.taus_fs = taus.clone();
        } else {
            let [tau] = taus[..] else {
                bail!("`spectrum` takes a single --tau-fs");
            };
            config.pulse.tau_fs = tau;
        }
    }
    if let Some(n) = args.n_points {
        config.grid.n_points = n;
    }
    config.validate()?;
    Ok(())
}

fn writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

fn run_report(result: &SpectrumResult, with_rows: bool) -> RunReport {
    RunReport {
        metadata: result.metadata.clone(),
        failures: result.failures(),
        peak: result.peak().copied(),
        rows: with_rows.then(|| result.rows.clone()),
    }
}

fn report(config: &RunConfig, defaults: Vec<String>, runs: Vec<RunReport>) -> Report {
    Report {
        config_sha256: config.hash(),
        config: config.to_toml(),
        defaults_applied: defaults,
        runs,
    }
}

fn log_summary(result: &SpectrumResult) {
    if result.failures() > 0 {
        log::warn!(
            "{} of {} modes failed",
            result.failures(),
            result.rows.len()
        );
    }
    if let Some(p) = result.peak() {
        log::info!(
            "tau = {:.3} fs: peak |β|² = {:.4e} at λ = {:.2} nm",
            result.metadata.pulse.tau * 1e15,
            p.beta_sq,
            p.lambda * 1e9
        );
    }
}

fn spectrum(cli: &Cli, args: &SpectrumArgs) -> Result<()> {
    let (mut config, defaults) = load_config(cli)?;
    apply_overrides(&mut config, args, false)?;
    let result = run_spectrum(
        &config.medium()?,
        &config.pulse(),
        config.scenario,
        &config.grid_spec(),
        &config.geometry()?,
        &config.solver,
    )?;
    log_summary(&result);
    let out = config.output.path.as_deref().map(Path::new);
    match config.output.format {
        OutputFormat::Csv => {
            eio::write_spectrum_csv(writer(out)?, &result.rows, &config.hash())?;
            if let Some(path) = out {
                let r = report(&config, defaults, vec![run_report(&result, false)]);
                eio::write_report(writer(Some(&sidecar_path(path)))?, &r)?;
            }
        }
        OutputFormat::Json => {
            let r = report(&config, defaults, vec![run_report(&result, true)]);
            eio::write_report(writer(out)?, &r)?;
        }
    }
    Ok(())
}

fn sweep(cli: &Cli, args: &SpectrumArgs) -> Result<()> {
    let (mut config, defaults) = load_config(cli)?;
    apply_overrides(&mut config, args, true)?;
    let results = tau_sweep(
        &config.medium()?,
        &config.pulse(),
        config.scenario,
        &config.grid_spec(),
        &config.geometry()?,
        &config.solver,
        &config.taus(),
    )?;
    results.iter().for_each(log_summary);
    let dir = config
        .output
        .path
        .clone()
        .map_or_else(|| PathBuf::from("."), PathBuf::from);
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let json = config.output.format == OutputFormat::Json;
    if !json {
        for (&tau_fs, result) in config.taus_fs.iter().zip(&results) {
            // each file carries the single-τ configuration that reproduces it
            let mut single = config.clone();
            single.pulse.tau_fs = tau_fs;
            single.taus_fs = vec![tau_fs];
            let path = dir.join(format!("spectrum_tau{tau_fs}fs.csv"));
            eio::write_spectrum_csv(writer(Some(&path))?, &result.rows, &single.hash())?;
            let r = report(&single, defaults.clone(), vec![run_report(result, false)]);
            eio::write_report(writer(Some(&sidecar_path(&path)))?, &r)?;
        }
    }
    let runs = results.iter().map(|r| run_report(r, json)).collect();
    eio::write_report(
        writer(Some(&dir.join("sweep.json")))?,
        &report(&config, defaults, runs),
    )?;
    Ok(())
}

fn dispersion_medium(cli: &Cli) -> Result<Medium> {
    if cli.config.is_none() {
        let name = cli.preset.as_deref().unwrap_or(MATERIAL_PRESETS[0]);
        if MATERIAL_PRESETS.contains(&name) {
            return Ok(Medium::DrudeLorentz(config::material_preset(name)?));
        }
        if !FIGURE_PRESETS.contains(&name) {
            bail!(
                "unknown preset `{name}`; expected one of {}, {}",
                MATERIAL_PRESETS.join(", "),
                FIGURE_PRESETS.join(", ")
            );
        }
    }
    Ok(load_config(cli)?.0.medium()?)
}

fn dispersion(cli: &Cli, args: &DispersionArgs) -> Result<()> {
    let medium = dispersion_medium(cli)?;
    if !(args.lambda_min_nm > 0.0 && args.lambda_min_nm < args.lambda_max_nm) || args.n_points < 2 {
        bail!("need 0 < --lambda-min-nm < --lambda-max-nm and --n-points >= 2");
    }
    if let Medium::DrudeLorentz(m) = &medium {
        let w = enz_crossing(m)?;
        log::info!(
            "ENZ crossing at ω = {w:.6e} rad/s, λ = {:.3} nm",
            2.0 * std::f64::consts::PI * C / w * 1e9
        );
    }
    let n = args.n_points;
    let rows = (0..n)
        .map(|i| {
            let lambda_nm = args.lambda_min_nm
                + (args.lambda_max_nm - args.lambda_min_nm) * i as f64 / (n - 1) as f64;
            let mode = VacuumMode::from_wavelength(nm_to_m(lambda_nm))?;
            let index = medium.index(mode.omega_vac)?;
            let eps = match &medium {
                Medium::DrudeLorentz(m) => permittivity(m, mode.omega_vac)?.as_complex(),
                Medium::Constant { .. } => index.as_complex().powi(2),
            };
            let d = kerr_factors(index)?;
            Ok(DispersionRow {
                lambda: mode.lambda_vac,
                omega: mode.omega_vac,
                eps_real: eps.re,
                eps_imag: eps.im,
                n_real: index.n_real,
                n_imag: index.n_imag,
                d_real: d.d_real,
                d_imag: d.d_imag,
            })
        })
        .collect::<enzpair_core::Result<Vec<_>>>()?;
    eio::write_dispersion_csv(writer(cli.out.as_deref())?, &rows)?;
    Ok(())
}

fn geometry(l_um: f64, damping_factor: Option<f64>) -> Result<EmissionGeometry> {
    let g = EmissionGeometry {
        transverse_extent: um_to_m(l_um),
        damping_factor: damping_factor.unwrap_or(EmissionGeometry::default().damping_factor),
    };
    g.validate()?;
    Ok(g)
}

fn oracle(cli: &Cli, a: &OracleArgs) -> Result<()> {
    let tau = fs_to_s(a.tau_fs);
    let base = NondispersiveSetup {
        n0: a.n0,
        delta: a.delta,
        tau,
        k: 1.0 / (C * tau),
    };
    base.validate()?;
    let g = geometry(a.l_um, a.damping_factor)?;
    let grid = enzpair_core::GridSpec::scaled_k(a.k_scaled_min, a.k_scaled_max, a.n_points);
    let rows: Vec<SpectrumRow> = grid
        .wavenumbers(tau)?
        .into_iter()
        .map(|k| {
            let beta_sq = sech2_spectrum(&NondispersiveSetup { k, ..base });
            SpectrumRow {
                k,
                omega: C * k / a.n0,
                lambda: 2.0 * std::f64::consts::PI / k,
                beta_sq,
                n_photons: photon_number(k, beta_sq, &g),
                converged: true,
            }
        })
        .collect();
    let tag = format!(
        "oracle:n0={:?},delta={:?},tau_fs={:?}",
        a.n0, a.delta, a.tau_fs
    );
    eio::write_spectrum_csv(writer(cli.out.as_deref())?, &rows, &tag)?;
    Ok(())
}

fn photons(cli: &Cli, a: &PhotonsArgs) -> Result<()> {
    let file = File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?;
    let table = eio::read_spectrum_csv(BufReader::new(file))?;
    let g = geometry(a.l_um, a.damping_factor)?;
    let rows: Vec<SpectrumRow> = table
        .rows
        .iter()
        .map(|r| SpectrumRow {
            n_photons: photon_number(r.k, r.beta_sq, &g),
            ..*r
        })
        .collect();
    let hash = table.config_hash.unwrap_or_default();
    eio::write_spectrum_csv(writer(cli.out.as_deref())?, &rows, &hash)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Modes probed by `validate`: both grid ends and the middle.
fn probe_wavenumbers(config: &RunConfig) -> Result<Vec<f64>> {
    let ks = config.grid_spec().wavenumbers(config.pulse().tau)?;
    Ok(vec![ks[0], ks[ks.len() / 2], ks[ks.len() - 1]])
}

fn invariant_checks(config: &RunConfig) -> Result<Vec<Check>> {
    let medium = config.medium()?;
    let pulse = config.pulse();
    let mut checks = Vec::new();
    for k in probe_wavenumbers(config)? {
        let traj = frequency_trajectory(&medium, VacuumMode::from_k(k)?, pulse, config.scenario)?;
        let r = solve_mode(&ModeProblem::new(traj, config.solver)?)?;
        let label = format!("k={k:.6e}");
        checks.push(Check::new(
            format!("finite[{label}]"),
            r.beta_sq.is_finite() && r.alpha.norm().is_finite(),
            format!("beta_sq={:e}", r.beta_sq),
        ));
        if traj.is_lossless() {
            checks.push(Check::new(
                format!("wronskian[{label}]"),
                r.wronskian_residual <= WRONSKIAN_TOLERANCE,
                format!("residual={:e}", r.wronskian_residual),
            ));
        }
        let wide = SolverSettings {
            window_factor: 2.0 * config.solver.window_factor,
            ..config.solver
        };
        let r2 = solve_mode(&ModeProblem::new(traj, wide)?)?;
        let rel = (r2.beta_sq / r.beta_sq - 1.0).abs();
        let resolved = r.beta_sq >= 1e-25;
        checks.push(Check::new(
            format!("window_doubling[{label}]"),
            !resolved || rel <= 1e-3,
            if resolved {
                format!("relative change {rel:e}")
            } else {
                "below 1e-25, skipped".to_string()
            },
        ));
        if config.scenario == Scenario::Nondispersive {
            let Medium::Constant { n0 } = medium else {
                unreachable!()
            };
            let exact = sech2_spectrum(&NondispersiveSetup {
                n0,
                delta: pulse.delta_r,
                tau: pulse.tau,
                k,
            });
            let rel = (r.beta_sq / exact - 1.0).abs();
            checks.push(Check::new(
                format!("oracle[{label}]"),
                exact < 1e-25 || rel <= 1e-2,
                format!("solver {:e}, closed form {exact:e}", r.beta_sq),
            ));
        }
    }
    Ok(checks)
}

fn reproduction_checks(config: &RunConfig, path: &Path, all: bool) -> Result<Vec<Check>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let table = eio::read_spectrum_csv(BufReader::new(file))?;
    let mut checks = vec![Check::new(
        "config_hash",
        table.config_hash.as_deref() == Some(config.hash().as_str()),
        format!("file {:?}, config {}", table.config_hash, config.hash()),
    )];
    let n = table.rows.len();
    let picks: Vec<usize> = if all || n <= 5 {
        (0..n).collect()
    } else {
        (0..5).map(|i| i * (n - 1) / 4).collect()
    };
    let medium = config.medium()?;
    let pulse = config.pulse();
    let g = config.geometry()?;
    for i in picks {
        let row = &table.rows[i];
        let traj =
            frequency_trajectory(&medium, VacuumMode::from_k(row.k)?, pulse, config.scenario)?;
        let r = solve_mode(&ModeProblem::new(traj, config.solver)?)?;
        let n_ph = photon_number(row.k, r.beta_sq, &g);
        let close = |a: f64, b: f64| (a.is_nan() && b.is_nan()) || (a - b).abs() <= 1e-12 * b.abs();
        checks.push(Check::new(
            format!("reproduce[row {i}]"),
            close(r.beta_sq, row.beta_sq) && close(n_ph, row.n_photons),
            format!("file {:e}, recomputed {:e}", row.beta_sq, r.beta_sq),
        ));
    }
    Ok(checks)
}

fn validate(cli: &Cli, a: &ValidateArgs) -> Result<()> {
    let (config, defaults) = load_config(cli)?;
    let mut checks = invariant_checks(&config)?;
    if let Some(path) = &a.against {
        checks.extend(reproduction_checks(&config, path, a.all_rows)?);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let summary = serde_json::json!({
        "config_sha256": config.hash(),
        "defaults_applied": defaults,
        "checks": checks,
        "failed": failed,
    });
    let mut out = writer(None)?;
    serde_json::to_writer_pretty(&mut out, &summary)?;
    writeln!(out)?;
    out.flush()?;
    if failed > 0 {
        bail!("{failed} invariant check(s) failed");
    }
    Ok(())
}

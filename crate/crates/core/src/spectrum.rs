//! Wavenumber sweeps: one independent mode solve per grid point, run in parallel and
//! gathered in ascending `k`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::{Medium, VacuumMode};
use crate::error::{Error, Result};
use crate::mode_solver::{solve_mode, ModeProblem, SolverSettings};
use crate::modulation::{normalize_kerr, FrequencyTrajectory, PumpPulse, Scenario};
use crate::units::C;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    LinearLambda,
    LinearK,
    LogK,
}

/// Extent of a grid, either in vacuum wavelength or in `k` relative to `1/(cτ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridRange {
    /// Bounds in metres.
    Wavelength { min: f64, max: f64 },
    /// Bounds on `c k τ`; the physical grid follows the pulse's rise time.
    ScaledK { min: f64, max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub range: GridRange,
    pub n_points: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn wavelength(lambda_min: f64, lambda_max: f64, n_points: usize) -> Self {
        GridSpec {
            range: GridRange::Wavelength {
                min: lambda_min,
                max: lambda_max,
            },
            n_points,
            spacing: Spacing::LinearLambda,
        }
    }

    pub fn scaled_k(min: f64, max: f64, n_points: usize) -> Self {
        GridSpec {
            range: GridRange::ScaledK { min, max },
            n_points,
            spacing: Spacing::LinearK,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (min, max) = match self.range {
            GridRange::Wavelength { min, max } | GridRange::ScaledK { min, max } => (min, max),
        };
        if !(min > 0.0 && min < max && max.is_finite()) {
            return Err(Error::validation("grid", "0 < min < max"));
        }
        if self.n_points < 2 {
            return Err(Error::validation("grid.n_points", "n_points >= 2"));
        }
        Ok(())
    }

    /// Vacuum wavenumbers in ascending order for a pulse of rise time `tau`.
    pub fn wavenumbers(&self, tau: f64) -> Result<Vec<f64>> {
        self.validate()?;
        let (k_min, k_max) = match self.range {
            GridRange::Wavelength { min, max } => (2.0 * PI / max, 2.0 * PI / min),
            GridRange::ScaledK { min, max } => (min / (C * tau), max / (C * tau)),
        };
        let n = self.n_points;
        let frac = |i: usize| i as f64 / (n - 1) as f64;
        let mut ks: Vec<f64> = match self.spacing {
            Spacing::LinearK => (0..n).map(|i| k_min + (k_max - k_min) * frac(i)).collect(),
            Spacing::LogK => {
                let (a, b) = (k_min.ln(), k_max.ln());
                (0..n).map(|i| (a + (b - a) * frac(i)).exp()).collect()
            }
            Spacing::LinearLambda => {
                let (l_min, l_max) = (2.0 * PI / k_max, 2.0 * PI / k_min);
                (0..n)
                    .rev()
                    .map(|i| 2.0 * PI / (l_min + (l_max - l_min) * frac(i)))
                    .collect()
            }
        };
        // pin the ends against rounding in the transforms
        ks[0] = k_min;
        ks[n - 1] = k_max;
        Ok(ks)
    }
}

/// Phase-space and loss bookkeeping for a two-dimensional emission plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmissionGeometry {
    /// `L`, m.
    pub transverse_extent: f64,
    pub damping_factor: f64,
}

impl Default for EmissionGeometry {
    fn default() -> Self {
        EmissionGeometry {
            transverse_extent: 1e-6,
            damping_factor: (-2.0f64).exp(),
        }
    }
}

impl EmissionGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.transverse_extent > 0.0 && self.transverse_extent.is_finite()) {
            return Err(Error::validation("geometry.l_um", "L > 0"));
        }
        if !(self.damping_factor > 0.0 && self.damping_factor <= 1.0) {
            return Err(Error::validation(
                "geometry.damping_factor",
                "0 < damping_factor <= 1",
            ));
        }
        Ok(())
    }

    /// `N_k / |β_k|² = 2πk · πL² · damping`.
    pub fn photons_per_pair_weight(&self, k: f64) -> f64 {
        2.0 * PI * k * PI * self.transverse_extent * self.transverse_extent * self.damping_factor
    }
}

/// Photons emitted into wavenumber `k` per pulse.
pub fn photon_number(k: f64, beta_sq: f64, geometry: &EmissionGeometry) -> f64 {
    geometry.photons_per_pair_weight(k) * beta_sq
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    /// Vacuum wavenumber, m⁻¹.
    pub k: f64,
    /// Asymptotic mode frequency, rad/s.
    pub omega: f64,
    /// Vacuum wavelength, m.
    pub lambda: f64,
    pub beta_sq: f64,
    pub n_photons: f64,
    pub converged: bool,
}

/// Everything needed to rerun a spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMetadata {
    pub scenario: Scenario,
    pub medium: Medium,
    pub pulse: PumpPulse,
    pub grid: GridSpec,
    pub geometry: EmissionGeometry,
    pub solver: SolverSettings,
    /// Scale applied to the Kerr factors.
    pub kerr_norm: f64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub rows: Vec<SpectrumRow>,
    pub metadata: SpectrumMetadata,
}

impl SpectrumResult {
    /// Converged row with the largest finite `|β|²`.
    pub fn peak(&self) -> Option<&SpectrumRow> {
        self.rows
            .iter()
            .filter(|r| r.converged && r.beta_sq.is_finite())
            .max_by(|a, b| a.beta_sq.total_cmp(&b.beta_sq))
    }

    /// Copy keeping only rows with vacuum wavelength in `[lambda_min, lambda_max]`.
    pub fn restrict_wavelength(&self, lambda_min: f64, lambda_max: f64) -> SpectrumResult {
        SpectrumResult {
            rows: self
                .rows
                .iter()
                .filter(|r| r.lambda >= lambda_min && r.lambda <= lambda_max)
                .copied()
                .collect(),
            metadata: self.metadata.clone(),
        }
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.converged).count()
    }
}

/// Solves every mode of `grid` on the current rayon pool.
///
/// A failing mode yields a row with `converged = false` and NaN values; the sweep
/// itself only fails on invalid inputs.
pub fn run_spectrum(
    medium: &Medium,
    pulse: &PumpPulse,
    scenario: Scenario,
    grid: &GridSpec,
    geometry: &EmissionGeometry,
    solver: &SolverSettings,
) -> Result<SpectrumResult> {
    medium.validate()?;
    pulse.validate()?;
    geometry.validate()?;
    solver.validate()?;
    if scenario == Scenario::Nondispersive && !matches!(medium, Medium::Constant { .. }) {
        return Err(Error::ScenarioMismatch {
            scenario: scenario.as_str(),
            medium: medium.label(),
        });
    }
    let kerr_norm = normalize_kerr(medium, pulse)?;
    let ks = grid.wavenumbers(pulse.tau)?;

    let rows = ks
        .par_iter()
        .map(|&k| solve_row(medium, pulse, scenario, geometry, solver, kerr_norm, k))
        .collect();

    Ok(SpectrumResult {
        rows,
        metadata: SpectrumMetadata {
            scenario,
            medium: *medium,
            pulse: *pulse,
            grid: *grid,
            geometry: *geometry,
            solver: *solver,
            kerr_norm,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
    })
}

fn solve_row(
    medium: &Medium,
    pulse: &PumpPulse,
    scenario: Scenario,
    geometry: &EmissionGeometry,
    solver: &SolverSettings,
    kerr_norm: f64,
    k: f64,
) -> SpectrumRow {
    let lambda = 2.0 * PI / k;
    let attempt = || -> Result<(f64, f64, bool)> {
        let mode = VacuumMode::from_k(k)?;
        let traj = FrequencyTrajectory::with_norm(medium, mode, *pulse, scenario, kerr_norm)?;
        let omega = traj.omega_asymptotic;
        let r = solve_mode(&ModeProblem::new(traj, *solver)?)?;
        Ok((omega, r.beta_sq, r.converged))
    };
    match attempt() {
        Ok((omega, beta_sq, converged)) => SpectrumRow {
            k,
            omega,
            lambda,
            beta_sq,
            n_photons: photon_number(k, beta_sq, geometry),
            converged,
        },
        Err(e) => {
            log::warn!("mode k = {k:e} m⁻¹ failed: {e}");
            SpectrumRow {
                k,
                omega: C * k,
                lambda,
                beta_sq: f64::NAN,
                n_photons: f64::NAN,
                converged: false,
            }
        }
    }
}

/// One spectrum per rise time, all other inputs shared.
pub fn tau_sweep(
    medium: &Medium,
    pulse: &PumpPulse,
    scenario: Scenario,
    grid: &GridSpec,
    geometry: &EmissionGeometry,
    solver: &SolverSettings,
    taus: &[f64],
) -> Result<Vec<SpectrumResult>> {
    taus.iter()
        .map(|&tau| {
            let pulse = PumpPulse { tau, ..*pulse };
            run_spectrum(medium, &pulse, scenario, grid, geometry, solver)
        })
        .collect()
}

/// Ratio of the peak `|β|²` of `enz` to that of `baseline`.
pub fn enhancement_ratio(enz: &SpectrumResult, baseline: &SpectrumResult) -> Result<f64> {
    let top = |r: &SpectrumResult| r.peak().map(|row| row.beta_sq).ok_or(Error::EmptySpectrum);
    Ok(top(enz)? / top(baseline)?)
}

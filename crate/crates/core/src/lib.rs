//! Spontaneous photon-pair production from vacuum in a homogeneous medium whose
//! refractive index is modulated in time by a Kerr pump.
//!
//! Each vacuum wavenumber `k` obeys an independent oscillator equation
//! `Ë + ω_k(t)² E = 0`. A purely positive-frequency input is integrated through the
//! pump pulse and the late-time field is projected onto plane waves; the weight of the
//! negative-frequency part, `|β_k|²`, counts the produced pairs.
//!
//! Modules, bottom-up:
//! - [`dispersion`]: Drude-Lorentz permittivity, complex index, ENZ crossing.
//! - [`modulation`]: pump profile, Kerr factors and the complex `ω_k(t)`.
//! - [`mode_solver`]: adaptive integration and Bogoliubov extraction.
//! - [`oracle`]: closed forms used to check the solver.
//! - [`spectrum`]: parallel sweeps over wavenumber grids and rise times.
//! - [`config`] and [`io`]: run configuration, presets and file formats.

// `!(x > y)` is used on purpose so NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod config;
pub mod dispersion;
pub mod error;
pub mod io;
pub mod mode_solver;
pub mod modulation;
mod ode;
pub mod oracle;
pub mod spectrum;
pub mod units;

pub use dispersion::{
    enz_crossing, material_wavenumber, permittivity, refractive_index, ComplexPermittivity,
    DrudeLorentzMaterial, Medium, RefractiveIndex, VacuumMode,
};
pub use error::{Error, Result};
pub use mode_solver::{
    extract_bogoliubov, initial_condition, integrate, solve_mode, BogoliubovResult, ModeFrequency,
    ModeProblem, ModeState, SmoothQuench, SolverSettings,
};
pub use modulation::{
    frequency_trajectory, intensity_profile, kerr_factors, normalize_kerr, time_dependent_index,
    FrequencyTrajectory, KerrFactors, PulseShape, PumpPulse, Scenario,
};
pub use oracle::{sech2_peak, sech2_small_delta, sech2_spectrum, sudden_step, NondispersiveSetup};
pub use spectrum::{
    enhancement_ratio, photon_number, run_spectrum, tau_sweep, EmissionGeometry, GridRange,
    GridSpec, Spacing, SpectrumResult, SpectrumRow,
};

pub use num_complex::Complex64;

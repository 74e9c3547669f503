//! Fixtures shared by the criterion benches.

use enzpair_core::{
    units::C, DrudeLorentzMaterial, GridSpec, Medium, PumpPulse, Scenario, SolverSettings,
};

pub const TAU: f64 = 5e-15;

pub fn ito() -> Medium {
    Medium::DrudeLorentz(DrudeLorentzMaterial::ITO_LUK2015)
}

pub fn vacuum() -> Medium {
    Medium::Constant { n0: 1.0 }
}

/// Wavenumber at the nondispersive peak, `c k τ ≈ 0.61`.
pub fn peak_k() -> f64 {
    0.61 / (C * TAU)
}

pub fn weak_pulse() -> PumpPulse {
    PumpPulse::sech2(TAU, 1e-3)
}

pub fn strong_pulse() -> PumpPulse {
    PumpPulse::sech2(TAU, 1.0)
}

pub fn enz_grid(n_points: usize) -> GridSpec {
    GridSpec::wavelength(800e-9, 2400e-9, n_points)
}

pub fn settings() -> SolverSettings {
    SolverSettings::default()
}

pub const SCENARIOS: [Scenario; 3] = Scenario::ALL;

//! Pump-driven modulation of the refractive index and the resulting complex
//! instantaneous frequency `ω_k(t)` of each vacuum mode.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::{enz_crossing, Medium, RefractiveIndex, VacuumMode};
use crate::error::{Error, Result};
use crate::units::C;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PulseShape {
    #[default]
    Sech2,
    Gaussian,
}

/// Temporal profile and strength of the Kerr drive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpPulse {
    pub shape: PulseShape,
    /// Rise time τ, s.
    pub tau: f64,
    /// Peak change of the real index at the reference frequency.
    pub delta_r: f64,
    /// Strength of the imaginary Kerr channel relative to the real one.
    pub delta_i_scale: f64,
}

impl PumpPulse {
    pub fn sech2(tau: f64, delta_r: f64) -> Self {
        PumpPulse {
            shape: PulseShape::Sech2,
            tau,
            delta_r,
            delta_i_scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::Domain {
                name: "tau",
                value: self.tau,
                constraint: "tau > 0",
            });
        }
        if !(self.delta_r >= 0.0 && self.delta_r.is_finite()) {
            return Err(Error::Domain {
                name: "delta_r",
                value: self.delta_r,
                constraint: "delta_r >= 0",
            });
        }
        if !self.delta_i_scale.is_finite() {
            return Err(Error::Domain {
                name: "delta_i_scale",
                value: self.delta_i_scale,
                constraint: "finite",
            });
        }
        Ok(())
    }
}

/// Normalised pump intensity `I(t)`, peak 1 at `t = 0`.
pub fn intensity_profile(pulse: &PumpPulse, t: f64) -> f64 {
    let x = t / pulse.tau;
    match pulse.shape {
        PulseShape::Sech2 => {
            // sech²x = 4e^{-2|x|}/(1+e^{-2|x|})², finite for every x
            let e = (-2.0 * x.abs()).exp();
            4.0 * e / ((1.0 + e) * (1.0 + e))
        }
        PulseShape::Gaussian => (-x * x).exp(),
    }
}

/// Dispersion of the Kerr response of a medium with linear index `n₀`, assuming a
/// dispersion-free χ⁽³⁾ with equal real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KerrFactors {
    /// `(n₀r + n₀i)/(n₀r² + n₀i²)`
    pub d_real: f64,
    /// `(n₀r − n₀i)/(n₀r² + n₀i²)`
    pub d_imag: f64,
}

pub fn kerr_factors(n0: RefractiveIndex) -> Result<KerrFactors> {
    let norm = n0.norm_sqr();
    if norm == 0.0 {
        return Err(Error::DegenerateIndex);
    }
    Ok(KerrFactors {
        d_real: (n0.n_real + n0.n_imag) / norm,
        d_imag: (n0.n_real - n0.n_imag) / norm,
    })
}

/// `n_r(t) = n₀r + norm·D_r·I(t)`, `n_i(t) = n₀i + s·norm·D_i·I(t)` with `s` the pulse's
/// imaginary-channel scale.
pub fn time_dependent_index(
    n0: RefractiveIndex,
    factors: KerrFactors,
    pulse: &PumpPulse,
    norm: f64,
    t: f64,
) -> RefractiveIndex {
    let i = intensity_profile(pulse, t);
    RefractiveIndex::new(
        n0.n_real + norm * factors.d_real * i,
        n0.n_imag + pulse.delta_i_scale * norm * factors.d_imag * i,
    )
}

/// Scale turning Kerr factors into index changes, fixed so the peak real-index change
/// at the reference frequency equals `pulse.delta_r`.
///
/// The reference is ω_ENZ for a Drude-Lorentz medium; a constant-index medium is
/// dispersion-free so any frequency will do.
pub fn normalize_kerr(medium: &Medium, pulse: &PumpPulse) -> Result<f64> {
    if !(pulse.delta_r >= 0.0) {
        return Err(Error::Domain {
            name: "delta_r",
            value: pulse.delta_r,
            constraint: "delta_r >= 0",
        });
    }
    if pulse.delta_r == 0.0 {
        return Ok(0.0);
    }
    let n_ref = match medium {
        Medium::DrudeLorentz(m) => medium.index(enz_crossing(m)?)?,
        Medium::Constant { n0 } => RefractiveIndex::new(*n0, 0.0),
    };
    Ok(pulse.delta_r / kerr_factors(n_ref)?.d_real)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Constant background index, weak modulation.
    Nondispersive,
    /// Dispersive medium with the imaginary index dropped everywhere.
    EnzRealOnly,
    /// Dispersive medium with the full complex index.
    EnzFull,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [
        Scenario::Nondispersive,
        Scenario::EnzRealOnly,
        Scenario::EnzFull,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Nondispersive => "nondispersive",
            Scenario::EnzRealOnly => "enz_real_only",
            Scenario::EnzFull => "enz_full",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.as_str() == s)
            .ok_or_else(|| {
                Error::validation(
                    "scenario.kind",
                    "one of nondispersive, enz_real_only, enz_full",
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Law {
    /// `ω² = ω∞²(1 − 2δ I(t)/n₀)`: the index perturbation kept to first order in `ω²`.
    Linearized { two_delta_over_n0: f64 },
    /// `ω = cK/n(t)` with `n(t) = n₀ + Δn·I(t)`.
    Index { n0: Complex64, dn: Complex64 },
}

/// Complex instantaneous frequency of one mode. Immutable; evaluation is pure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyTrajectory {
    pub mode: VacuumMode,
    /// Material wavenumber `K`, conserved through the modulation.
    pub wavenumber: Complex64,
    /// Value of `ω_k(t)` long before and after the pulse.
    pub omega_asymptotic: f64,
    pub pulse: PumpPulse,
    pub scenario: Scenario,
    law: Law,
}

/// Builds `ω_k(t)` for `scenario`, normalising the Kerr strength with [`normalize_kerr`].
pub fn frequency_trajectory(
    medium: &Medium,
    mode: VacuumMode,
    pulse: PumpPulse,
    scenario: Scenario,
) -> Result<FrequencyTrajectory> {
    let norm = normalize_kerr(medium, &pulse)?;
    FrequencyTrajectory::with_norm(medium, mode, pulse, scenario, norm)
}

impl FrequencyTrajectory {
    /// As [`frequency_trajectory`], with a precomputed Kerr normalisation.
    pub fn with_norm(
        medium: &Medium,
        mode: VacuumMode,
        pulse: PumpPulse,
        scenario: Scenario,
        norm: f64,
    ) -> Result<Self> {
        medium.validate()?;
        pulse.validate()?;
        let n0 = medium.index(mode.omega_vac)?;
        let factors = kerr_factors(n0)?;
        let (omega_asymptotic, wavenumber, law) = match scenario {
            Scenario::Nondispersive => {
                let Medium::Constant { n0 } = *medium else {
                    return Err(Error::ScenarioMismatch {
                        scenario: scenario.as_str(),
                        medium: medium.label(),
                    });
                };
                let delta = norm * factors.d_real;
                (
                    C * mode.k / n0,
                    Complex64::new(mode.k * n0, 0.0),
                    Law::Linearized {
                        two_delta_over_n0: 2.0 * delta / n0,
                    },
                )
            }
            Scenario::EnzRealOnly => {
                let n0 = Complex64::new(n0.n_real, 0.0);
                (
                    C * mode.k,
                    mode.k * n0,
                    Law::Index {
                        n0,
                        dn: Complex64::new(norm * factors.d_real, 0.0),
                    },
                )
            }
            Scenario::EnzFull => {
                let n0 = n0.as_complex();
                let dn =
                    norm * Complex64::new(factors.d_real, pulse.delta_i_scale * factors.d_imag);
                (C * mode.k, mode.k * n0, Law::Index { n0, dn })
            }
        };
        Ok(FrequencyTrajectory {
            mode,
            wavenumber,
            omega_asymptotic,
            pulse,
            scenario,
            law,
        })
    }

    /// Index seen by the mode at time `t` (constant `n₀` for the linearised law).
    pub fn index_at(&self, t: f64) -> Complex64 {
        match self.law {
            Law::Linearized { two_delta_over_n0 } => {
                let n0 = self.wavenumber.re / self.mode.k;
                Complex64::new(
                    n0 + 0.5 * two_delta_over_n0 * n0 * intensity_profile(&self.pulse, t),
                    0.0,
                )
            }
            Law::Index { n0, dn } => n0 + dn * intensity_profile(&self.pulse, t),
        }
    }

    pub fn omega(&self, t: f64) -> Complex64 {
        match self.law {
            Law::Linearized { two_delta_over_n0 } => {
                let i = intensity_profile(&self.pulse, t);
                self.omega_asymptotic * Complex64::new(1.0 - two_delta_over_n0 * i, 0.0).sqrt()
            }
            Law::Index { n0, dn } => {
                let n = n0 + dn * intensity_profile(&self.pulse, t);
                C * self.wavenumber / n
            }
        }
    }

    /// `ω_k(t)² − ω∞²`, evaluated without cancellation so it vanishes with the pulse.
    pub fn omega_sq_offset(&self, t: f64) -> Complex64 {
        let w2 = self.omega_asymptotic * self.omega_asymptotic;
        let i = intensity_profile(&self.pulse, t);
        match self.law {
            Law::Linearized { two_delta_over_n0 } => {
                Complex64::new(-w2 * two_delta_over_n0 * i, 0.0)
            }
            Law::Index { n0, dn } => {
                let delta = dn * i;
                let n = n0 + delta;
                -w2 * delta * (2.0 * n0 + delta) / (n * n)
            }
        }
    }

    /// True when `ω_k(t)` stays real for all `t`.
    pub fn is_lossless(&self) -> bool {
        match self.law {
            Law::Linearized { two_delta_over_n0 } => two_delta_over_n0 < 1.0,
            Law::Index { n0, dn } => n0.im == 0.0 && dn.im == 0.0,
        }
    }
}

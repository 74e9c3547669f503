//! Per-mode evolution `Ë + ω_k(t)² E = 0` and Bogoliubov extraction.
//!
//! The field pair `(E, Ė)` is integrated in the plane-wave frame of the outgoing
//! frequency `ω`:
//!
//! ```text
//! E = (a e^{-iωt} + b e^{+iωt}) / √(2ω)
//! Ė = -iω (a e^{-iωt} − b e^{+iωt}) / √(2ω)
//! ```
//!
//! an invertible linear change of variables under which the system reads
//! `ȧ = -i Δ/(2ω) (a + b e^{2iωt})`, `ḃ = i Δ/(2ω) (a e^{-2iωt} + b)` with
//! `Δ = ω_k(t)² − ω²`. Away from the pulse `Δ → 0` and the amplitudes freeze, so tiny
//! `|β|²` is resolved relative to itself instead of against the unit-norm carrier.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modulation::FrequencyTrajectory;
use crate::ode::{self, Tolerances};

/// Minimum number of accepted steps per local oscillation period.
pub const MIN_STEPS_PER_PERIOD: f64 = 20.0;
/// Smallest integration half-window in units of the modulation time scale.
pub const MIN_WINDOW_FACTOR: f64 = 20.0;
/// `|β|²` below this is rounding noise from the projection and is clamped.
pub const BETA_SQ_FLOOR: f64 = 1e-30;
/// Bound on `||α|² − |β|² − 1|` for lossless evolutions.
pub const WRONSKIAN_TOLERANCE: f64 = 1e-6;
/// Largest `|Im ω|/|ω|` accepted at the ends of the window.
pub const ASYMPTOTIC_IMAG_LIMIT: f64 = 1e-9;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A time-dependent mode frequency that is real and constant far from `t = 0`.
pub trait ModeFrequency: Sync {
    fn omega(&self, t: f64) -> Complex64;

    /// Late-time (real) frequency used for extraction and as the rotating frame.
    fn omega_out(&self) -> f64;

    /// `ω(t)² − ω_out²`. Implementors should override this with a form that
    /// vanishes exactly where the modulation does.
    fn omega_sq_offset(&self, t: f64) -> Complex64 {
        self.omega(t).powi(2) - self.omega_out().powi(2)
    }

    /// Duration of the modulation; sets the integration window.
    fn time_scale(&self) -> f64;

    /// True when `ω(t)` is real throughout, so `|α|² − |β|² = 1` must hold.
    fn is_lossless(&self) -> bool;
}

impl ModeFrequency for FrequencyTrajectory {
    fn omega(&self, t: f64) -> Complex64 {
        FrequencyTrajectory::omega(self, t)
    }

    fn omega_out(&self) -> f64 {
        self.omega_asymptotic
    }

    fn omega_sq_offset(&self, t: f64) -> Complex64 {
        FrequencyTrajectory::omega_sq_offset(self, t)
    }

    fn time_scale(&self) -> f64 {
        self.pulse.tau
    }

    fn is_lossless(&self) -> bool {
        FrequencyTrajectory::is_lossless(self)
    }
}

/// Smooth frequency jump `ω(t)² = ω̄² + ½(ω₂² − ω₁²) tanh(t/τ)` from `ω₁` to `ω₂`.
/// With `τ` far below the oscillation period it realises an instantaneous quench.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothQuench {
    pub omega1: f64,
    pub omega2: f64,
    pub tau: f64,
}

impl ModeFrequency for SmoothQuench {
    fn omega(&self, t: f64) -> Complex64 {
        (self.omega_out().powi(2) + self.omega_sq_offset(t)).sqrt()
    }

    fn omega_out(&self) -> f64 {
        self.omega2
    }

    fn omega_sq_offset(&self, t: f64) -> Complex64 {
        // (ω₁² − ω₂²)(1 − tanh x)/2 with 1 − tanh x = 2/(1 + e^{2x})
        let x = t / self.tau;
        let lower = if x > 0.0 {
            let e = (-2.0 * x).exp();
            2.0 * e / (1.0 + e)
        } else {
            2.0 / (1.0 + (2.0 * x).exp())
        };
        let jump = (self.omega1 - self.omega2) * (self.omega1 + self.omega2);
        Complex64::new(0.5 * jump * lower, 0.0)
    }

    fn time_scale(&self) -> f64 {
        self.tau
    }

    fn is_lossless(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub rtol: f64,
    /// Absolute tolerance in units of the normalised input amplitude.
    pub atol: f64,
    /// Half-window in units of the modulation time scale.
    pub window_factor: f64,
    pub max_steps: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            rtol: 1e-10,
            atol: 1e-14,
            window_factor: 25.0,
            max_steps: 5_000_000,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.rtol < 1.0) {
            return Err(Error::validation("solver.rtol", "0 < rtol < 1"));
        }
        if !(self.atol > 0.0 && self.atol.is_finite()) {
            return Err(Error::validation("solver.atol", "atol > 0"));
        }
        if !(self.window_factor >= MIN_WINDOW_FACTOR && self.window_factor.is_finite()) {
            return Err(Error::validation(
                "solver.window_factor",
                format!("window_factor >= {MIN_WINDOW_FACTOR}"),
            ));
        }
        if self.max_steps == 0 {
            return Err(Error::validation("solver.max_steps", "max_steps > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ModeProblem<T> {
    pub trajectory: T,
    pub t_start: f64,
    pub t_end: f64,
    pub settings: SolverSettings,
}

impl<T: ModeFrequency> ModeProblem<T> {
    /// Symmetric window `±window_factor·τ`.
    pub fn new(trajectory: T, settings: SolverSettings) -> Result<Self> {
        let half = settings.window_factor * trajectory.time_scale();
        Self::with_window(trajectory, -half, half, settings)
    }

    pub fn with_window(
        trajectory: T,
        t_start: f64,
        t_end: f64,
        settings: SolverSettings,
    ) -> Result<Self> {
        settings.validate()?;
        let tau = trajectory.time_scale();
        if !(t_start < 0.0 && t_end > 0.0) {
            return Err(Error::validation("window", "t_start < 0 < t_end"));
        }
        if t_start.abs() < MIN_WINDOW_FACTOR * tau || t_end < MIN_WINDOW_FACTOR * tau {
            return Err(Error::validation(
                "window",
                format!("|t_start|, t_end >= {MIN_WINDOW_FACTOR}·τ"),
            ));
        }
        let w_out = trajectory.omega_out();
        if !(w_out > 0.0 && w_out.is_finite()) {
            return Err(Error::Domain {
                name: "omega_out",
                value: w_out,
                constraint: "omega_out > 0",
            });
        }
        for t in [t_start, t_end] {
            let w = trajectory.omega(t);
            let ratio = w.im.abs() / w.norm();
            if !(ratio <= ASYMPTOTIC_IMAG_LIMIT) {
                return Err(Error::NonAsymptoticStart {
                    ratio,
                    limit: ASYMPTOTIC_IMAG_LIMIT,
                });
            }
        }
        Ok(ModeProblem {
            trajectory,
            t_start,
            t_end,
            settings,
        })
    }
}

/// Field amplitude and its time derivative at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeState {
    pub t: f64,
    pub e: Complex64,
    pub de_dt: Complex64,
}

impl ModeState {
    /// Normalised plane wave `e^{∓iωt}/√(2ω)`; `positive` selects the upper sign.
    pub fn plane_wave(omega: f64, t: f64, positive: bool) -> Self {
        let sign = if positive { -1.0 } else { 1.0 };
        let e = Complex64::from_polar(1.0, sign * omega * t) / (2.0 * omega).sqrt();
        ModeState {
            t,
            e,
            de_dt: I * sign * omega * e,
        }
    }

    /// `i(Ē·Ė − E·conj(Ė))`, equal to 1 for the normalised positive-frequency wave.
    pub fn wronskian(&self) -> f64 {
        2.0 * (self.e * self.de_dt.conj()).im
    }

    fn to_amplitudes(self, omega: f64) -> [Complex64; 2] {
        let scale = (0.5 * omega).sqrt();
        let phase = Complex64::from_polar(1.0, omega * self.t);
        let d = I * self.de_dt / omega;
        [
            phase * scale * (self.e + d),
            phase.conj() * scale * (self.e - d),
        ]
    }

    fn from_amplitudes(t: f64, omega: f64, [a, b]: [Complex64; 2]) -> Self {
        let norm = (2.0 * omega).sqrt();
        let minus = a * Complex64::from_polar(1.0, -omega * t);
        let plus = b * Complex64::from_polar(1.0, omega * t);
        ModeState {
            t,
            e: (minus + plus) / norm,
            de_dt: -I * omega * (minus - plus) / norm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovResult {
    pub alpha: Complex64,
    pub beta: Complex64,
    /// `|β|²`, clamped to [`BETA_SQ_FLOOR`] when smaller.
    pub beta_sq: f64,
    pub wronskian_residual: f64,
    pub converged: bool,
    /// Set when `beta_sq` was clamped.
    pub below_floor: bool,
    pub steps: usize,
}

/// Unit-norm positive-frequency wave at the local frequency `ω_k(t_start)`.
pub fn initial_condition<T: ModeFrequency>(problem: &ModeProblem<T>) -> Result<ModeState> {
    let w = problem.trajectory.omega(problem.t_start);
    let ratio = w.im.abs() / w.norm();
    if !(ratio <= ASYMPTOTIC_IMAG_LIMIT) || !(w.re > 0.0) {
        return Err(Error::NonAsymptoticStart {
            ratio,
            limit: ASYMPTOTIC_IMAG_LIMIT,
        });
    }
    Ok(ModeState::plane_wave(w.re, problem.t_start, true))
}

/// Evolves the initial condition to `t_end`.
pub fn integrate<T: ModeFrequency>(problem: &ModeProblem<T>) -> Result<ModeState> {
    integrate_counted(problem).map(|(state, _)| state)
}

fn integrate_counted<T: ModeFrequency>(problem: &ModeProblem<T>) -> Result<(ModeState, usize)> {
    let traj = &problem.trajectory;
    let omega = traj.omega_out();
    let start = initial_condition(problem)?;
    let y0 = start.to_amplitudes(omega);

    let rhs = |t: f64, y: &[Complex64; 2]| {
        let coupling = -I * traj.omega_sq_offset(t) / (2.0 * omega);
        let rot = Complex64::from_polar(1.0, 2.0 * omega * t);
        [
            coupling * (y[0] + y[1] * rot),
            -coupling * (y[0] * rot.conj() + y[1]),
        ]
    };
    let cap = |t: f64| {
        let local = traj.omega(t).re.abs().max(omega);
        2.0 * PI / (MIN_STEPS_PER_PERIOD * local)
    };
    let s = &problem.settings;
    let (y, stats) = ode::integrate(
        rhs,
        cap,
        problem.t_start,
        y0,
        problem.t_end,
        Tolerances {
            rtol: s.rtol,
            atol: s.atol,
            max_steps: s.max_steps,
        },
    )?;
    Ok((
        ModeState::from_amplitudes(problem.t_end, omega, y),
        stats.accepted,
    ))
}

/// Projects a late-time state onto the normalised plane waves of frequency `omega_out`.
pub fn extract_bogoliubov(state: &ModeState, omega_out: f64) -> BogoliubovResult {
    let [alpha, beta] = state.to_amplitudes(omega_out);
    let raw = beta.norm_sqr();
    let below_floor = raw < BETA_SQ_FLOOR;
    BogoliubovResult {
        alpha,
        beta,
        beta_sq: if below_floor { BETA_SQ_FLOOR } else { raw },
        wronskian_residual: (alpha.norm_sqr() - raw - 1.0).abs(),
        converged: true,
        below_floor,
        steps: 0,
    }
}

/// Initial condition, integration and extraction for one mode.
///
/// `converged` is false when a lossless evolution violates the Wronskian bound; for
/// complex `ω(t)` the residual is reported but not thresholded.
pub fn solve_mode<T: ModeFrequency>(problem: &ModeProblem<T>) -> Result<BogoliubovResult> {
    let (state, steps) = integrate_counted(problem)?;
    let mut result = extract_bogoliubov(&state, problem.trajectory.omega_out());
    result.steps = steps;
    result.converged =
        !problem.trajectory.is_lossless() || result.wronskian_residual <= WRONSKIAN_TOLERANCE;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{Medium, VacuumMode};
    use crate::modulation::{frequency_trajectory, PumpPulse, Scenario};
    use crate::units::C;
    use approx::assert_relative_eq;

    const TAU: f64 = 5e-15;

    fn nondispersive(k: f64, delta: f64) -> FrequencyTrajectory {
        frequency_trajectory(
            &Medium::Constant { n0: 1.0 },
            VacuumMode::from_k(k).unwrap(),
            PumpPulse::sech2(TAU, delta),
            Scenario::Nondispersive,
        )
        .unwrap()
    }

    /// Exact |β|² for the tanh ramp (Bernard-Duncan form), test-only oracle.
    fn tanh_ramp_beta_sq(w1: f64, w2: f64, tau: f64) -> f64 {
        let num = (PI * (w2 - w1) * tau / 2.0).sinh().powi(2);
        num / ((PI * w1 * tau).sinh() * (PI * w2 * tau).sinh())
    }

    #[test]
    fn initial_condition_unit_frequency() {
        let s = ModeState::plane_wave(1.0, 0.0, true);
        assert_relative_eq!(s.e.re, 0.5f64.sqrt(), max_relative = 1e-15);
        assert_eq!(s.e.im, 0.0);
        assert_relative_eq!(s.de_dt.im, -(0.5f64.sqrt()), max_relative = 1e-15);
        assert!(s.de_dt.re.abs() < 1e-16);
    }

    #[test]
    fn initial_condition_normalisation_and_wronskian() {
        let traj = nondispersive(1.36e15 / C, 1e-3);
        let problem =
            ModeProblem::with_window(traj, -100e-15, 100e-15, SolverSettings::default()).unwrap();
        let s = initial_condition(&problem).unwrap();
        let w = traj.omega_asymptotic;
        assert_relative_eq!(s.e.norm_sqr() * 2.0 * w, 1.0, max_relative = 1e-13);
        assert_relative_eq!(s.wronskian(), 1.0, max_relative = 1e-12);
        assert_eq!(s.t, -100e-15);
    }

    #[test]
    fn free_evolution_stays_a_plane_wave() {
        let k = 1.0 / (C * TAU);
        let traj = nondispersive(k, 0.0);
        let problem = ModeProblem::new(traj, SolverSettings::default()).unwrap();
        let end = integrate(&problem).unwrap();
        let exact = ModeState::plane_wave(C * k, problem.t_end, true);
        assert!((end.e - exact.e).norm() / exact.e.norm() < 1e-10);
        let r = solve_mode(&problem).unwrap();
        assert!(r.beta_sq <= 1e-20);
        assert!(r.converged);
    }

    #[test]
    fn projection_of_pure_waves() {
        let w = 2.0e15;
        let t = 3.3e-14;
        let r = extract_bogoliubov(&ModeState::plane_wave(w, t, true), w);
        assert!((r.alpha - 1.0).norm() < 1e-12 && r.beta.norm() < 1e-12);
        let r = extract_bogoliubov(&ModeState::plane_wave(w, t, false), w);
        assert!(r.alpha.norm() < 1e-12 && (r.beta - 1.0).norm() < 1e-12);
        assert!(!r.below_floor);
        assert_eq!(r.beta_sq, r.beta.norm_sqr());
    }

    #[test]
    fn amplitude_frame_round_trip() {
        let s = ModeState {
            t: 1.7e-14,
            e: Complex64::new(0.3, -1.2),
            de_dt: Complex64::new(4e14, 9e13),
        };
        let back = ModeState::from_amplitudes(s.t, 1.1e15, s.to_amplitudes(1.1e15));
        assert!((back.e - s.e).norm() < 1e-14);
        assert!((back.de_dt - s.de_dt).norm() < 1e-14 * s.de_dt.norm());
    }

    #[test]
    fn quench_reaches_sudden_limit() {
        let (w1, w2) = (1.0e15, 4.0e15);
        let tau = 1e-3 / w2;
        let problem = ModeProblem::new(
            SmoothQuench {
                omega1: w1,
                omega2: w2,
                tau,
            },
            SolverSettings::default(),
        )
        .unwrap();
        let r = solve_mode(&problem).unwrap();
        let ramp = tanh_ramp_beta_sq(w1, w2, tau);
        assert_relative_eq!(r.beta_sq, ramp, max_relative = 1e-6);
        assert_relative_eq!(r.beta_sq, 9.0 / 16.0, max_relative = 1e-2);
        assert!(r.wronskian_residual < 1e-8);
    }

    #[test]
    fn slow_quench_matches_tanh_oracle() {
        let (w1, w2) = (1.0e15, 1.5e15);
        let tau = 0.4 / w1;
        let problem = ModeProblem::new(
            SmoothQuench {
                omega1: w1,
                omega2: w2,
                tau,
            },
            SolverSettings::default(),
        )
        .unwrap();
        let r = solve_mode(&problem).unwrap();
        assert_relative_eq!(
            r.beta_sq,
            tanh_ramp_beta_sq(w1, w2, tau),
            max_relative = 1e-6
        );
    }

    #[test]
    fn window_must_be_wide_enough() {
        let traj = nondispersive(1e6, 1e-3);
        let tight = SolverSettings {
            window_factor: 10.0,
            ..SolverSettings::default()
        };
        assert!(ModeProblem::new(traj, tight).is_err());
        assert!(ModeProblem::with_window(traj, 0.0, 1e-13, SolverSettings::default()).is_err());
    }

    #[test]
    fn lossy_start_is_rejected() {
        let traj = frequency_trajectory(
            &Medium::DrudeLorentz(crate::DrudeLorentzMaterial::ITO_LUK2015),
            VacuumMode::from_wavelength(1400e-9).unwrap(),
            PumpPulse::sech2(TAU, 1.0),
            Scenario::EnzFull,
        )
        .unwrap();
        let res = ModeProblem::with_window(traj, -TAU, 20.0 * TAU, SolverSettings::default());
        assert!(res.is_err());
    }

    #[test]
    fn step_budget_failure_surfaces() {
        let traj = nondispersive(1.0 / (C * TAU), 1e-3);
        let settings = SolverSettings {
            max_steps: 50,
            ..SolverSettings::default()
        };
        let problem = ModeProblem::new(traj, settings).unwrap();
        assert!(matches!(solve_mode(&problem), Err(Error::MaxSteps { .. })));
    }

    #[test]
    fn oscillations_are_resolved() {
        let k = 10.0 / (C * TAU);
        let problem = ModeProblem::new(nondispersive(k, 1e-3), SolverSettings::default()).unwrap();
        let r = solve_mode(&problem).unwrap();
        let periods = (problem.t_end - problem.t_start) * C * k / (2.0 * PI);
        assert!(r.steps as f64 >= MIN_STEPS_PER_PERIOD * periods * 0.999);
    }
}

//! Closed-form references for the non-dispersive `sech²` modulation and the sudden
//! quench, used to validate the numerical mode solver.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::C;

/// Background index `n0` perturbed by `δ sech²(t/τ)`, probed at vacuum wavenumber `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NondispersiveSetup {
    pub n0: f64,
    pub delta: f64,
    pub tau: f64,
    pub k: f64,
}

impl NondispersiveSetup {
    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64, bool, &'static str); 4] = [
            ("n0", self.n0, self.n0 > 0.0, "n0 > 0"),
            ("delta", self.delta, self.delta >= 0.0, "delta >= 0"),
            ("tau", self.tau, self.tau > 0.0, "tau > 0"),
            ("k", self.k, self.k > 0.0, "k > 0"),
        ];
        for (name, value, ok, constraint) in checks {
            if !ok || !value.is_finite() {
                return Err(Error::Domain {
                    name,
                    value,
                    constraint,
                });
            }
        }
        Ok(())
    }

    /// `π c k τ / n₀`
    fn sinh_argument(&self) -> f64 {
        PI * C * self.k * self.tau / self.n0
    }

    /// `8 c² k² δ τ² / n₀³`
    fn coupling(&self) -> f64 {
        let ckt = C * self.k * self.tau;
        8.0 * ckt * ckt * self.delta / self.n0.powi(3)
    }
}

fn ln_sinh(y: f64) -> f64 {
    if y < 20.0 {
        y.sinh().ln()
    } else {
        y - LN_2 + (-(-2.0 * y).exp()).ln_1p()
    }
}

fn ln_cosh(z: f64) -> f64 {
    z - LN_2 + (-2.0 * z).exp().ln_1p()
}

/// Exact `|β_k|² = cos²(½π√(1 − 8c²k²δτ²/n₀³)) / sinh²(πckτ/n₀)`.
///
/// For a negative root argument the cosine continues to `cosh`. Both factors are
/// combined in log space so deep-tail values do not underflow prematurely.
pub fn sech2_spectrum(setup: &NondispersiveSetup) -> f64 {
    let a = setup.coupling();
    let ln_num = if a <= 1.0 {
        // cos(½π√(1−a)) = sin(½π·a/(1+√(1−a))), exact zero at a = 0
        let s = (0.5 * PI * a / (1.0 + (1.0 - a).sqrt())).sin();
        if s == 0.0 {
            return 0.0;
        }
        2.0 * s.abs().ln()
    } else {
        2.0 * ln_cosh(0.5 * PI * (a - 1.0).sqrt())
    };
    (ln_num - 2.0 * ln_sinh(setup.sinh_argument())).exp()
}

/// Leading order in `δ`: `4π²c⁴k⁴τ⁴δ² / (n₀⁶ sinh²(πckτ/n₀))`.
pub fn sech2_small_delta(setup: &NondispersiveSetup) -> f64 {
    if setup.delta == 0.0 {
        return 0.0;
    }
    let ckt = C * setup.k * setup.tau;
    let ln_num =
        (4.0 * PI * PI).ln() + 4.0 * ckt.ln() + 2.0 * setup.delta.ln() - 6.0 * setup.n0.ln();
    (ln_num - 2.0 * ln_sinh(setup.sinh_argument())).exp()
}

/// Maximises [`sech2_spectrum`] over `k` by golden-section search on
/// `[0.1, 10]·n₀/(cτ)`. Returns `(k_peak, |β|²_peak)`; `setup.k` is ignored.
pub fn sech2_peak(setup: &NondispersiveSetup) -> (f64, f64) {
    if setup.delta > 0.1 {
        log::warn!(
            "δ = {} is outside the perturbative regime; the peak bracket may not hold",
            setup.delta
        );
    }
    let unit = setup.n0 / (C * setup.tau);
    let at = |k: f64| sech2_spectrum(&NondispersiveSetup { k, ..*setup });
    if setup.delta == 0.0 {
        return (unit, 0.0);
    }
    // search in ln k on the log of the spectrum
    let score = |lk: f64| at(lk.exp()).ln();
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = ((0.1 * unit).ln(), (10.0 * unit).ln());
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (score(x1), score(x2));
    while hi - lo > 1e-13 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = score(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = score(x1);
        }
    }
    let k = (0.5 * (lo + hi)).exp();
    (k, at(k))
}

/// Instantaneous jump `ω₁ → ω₂`: `|β|² = (ω₂ − ω₁)² / (4ω₁ω₂)`.
pub fn sudden_step(omega1: f64, omega2: f64) -> f64 {
    debug_assert!(omega1 > 0.0 && omega2 > 0.0);
    (omega2 - omega1).powi(2) / (4.0 * omega1 * omega2)
}

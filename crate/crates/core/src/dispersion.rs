//! Linear optical response: Drude-Lorentz permittivity, the principal complex
//! refractive index, the material wavenumber and the epsilon-near-zero crossing.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::C;

/// Free-carrier permittivity `ε(ω) = ε∞ − ωₚ²/(ω² + iωΓ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrudeLorentzMaterial {
    /// High-frequency permittivity ε∞.
    pub eps_inf: f64,
    /// Plasma frequency squared, rad²/s².
    pub omega_p_sq: f64,
    /// Damping rate Γ, rad/s.
    pub gamma: f64,
}

impl DrudeLorentzMaterial {
    /// ITO as characterised by Luk et al. (2015).
    pub const ITO_LUK2015: DrudeLorentzMaterial = DrudeLorentzMaterial {
        eps_inf: 4.082,
        omega_p_sq: 7.643e30,
        gamma: 1.239e14,
    };

    pub fn new(eps_inf: f64, omega_p_sq: f64, gamma: f64) -> Result<Self> {
        let material = DrudeLorentzMaterial {
            eps_inf,
            omega_p_sq,
            gamma,
        };
        material.validate()?;
        Ok(material)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_inf >= 1.0) {
            return Err(Error::Domain {
                name: "eps_inf",
                value: self.eps_inf,
                constraint: "eps_inf >= 1",
            });
        }
        if !(self.omega_p_sq > 0.0 && self.omega_p_sq.is_finite()) {
            return Err(Error::Domain {
                name: "omega_p_sq",
                value: self.omega_p_sq,
                constraint: "omega_p_sq > 0",
            });
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::Domain {
                name: "gamma",
                value: self.gamma,
                constraint: "gamma >= 0",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPermittivity {
    pub eps_real: f64,
    pub eps_imag: f64,
}

impl ComplexPermittivity {
    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.eps_real, self.eps_imag)
    }
}

/// `n = n_real + i n_imag`. Linear indices produced by [`refractive_index`] lie in the
/// closed first quadrant; time-dependent indices are stored in the same type without
/// that guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefractiveIndex {
    pub n_real: f64,
    pub n_imag: f64,
}

impl RefractiveIndex {
    pub const VACUUM: RefractiveIndex = RefractiveIndex {
        n_real: 1.0,
        n_imag: 0.0,
    };

    pub fn new(n_real: f64, n_imag: f64) -> Self {
        RefractiveIndex { n_real, n_imag }
    }

    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.n_real, self.n_imag)
    }

    pub fn norm_sqr(self) -> f64 {
        self.n_real * self.n_real + self.n_imag * self.n_imag
    }
}

/// A vacuum plane-wave label. `omega_vac = c k` and `lambda_vac = 2π/k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VacuumMode {
    pub k: f64,
    pub omega_vac: f64,
    pub lambda_vac: f64,
}

impl VacuumMode {
    pub fn from_k(k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Domain {
                name: "k",
                value: k,
                constraint: "k > 0",
            });
        }
        Ok(VacuumMode {
            k,
            omega_vac: C * k,
            lambda_vac: 2.0 * std::f64::consts::PI / k,
        })
    }

    pub fn from_wavelength(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain {
                name: "lambda",
                value: lambda,
                constraint: "lambda > 0",
            });
        }
        Self::from_k(2.0 * std::f64::consts::PI / lambda)
    }
}

/// The linear background a mode propagates in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Medium {
    DrudeLorentz(DrudeLorentzMaterial),
    /// Dispersion-free real index.
    Constant {
        n0: f64,
    },
}

impl Medium {
    pub fn validate(&self) -> Result<()> {
        match self {
            Medium::DrudeLorentz(m) => m.validate(),
            Medium::Constant { n0 } => {
                if *n0 > 0.0 && n0.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Domain {
                        name: "n0",
                        value: *n0,
                        constraint: "n0 > 0",
                    })
                }
            }
        }
    }

    /// Linear index at angular frequency `omega`.
    pub fn index(&self, omega: f64) -> Result<RefractiveIndex> {
        match self {
            Medium::DrudeLorentz(m) => Ok(refractive_index(permittivity(m, omega)?)),
            Medium::Constant { n0 } => Ok(RefractiveIndex::new(*n0, 0.0)),
        }
    }

    pub(crate) fn label(&self) -> &'static str {
        match self {
            Medium::DrudeLorentz(_) => "a Drude-Lorentz material",
            Medium::Constant { .. } => "a constant-index medium",
        }
    }
}

/// `ε′ = ε∞ − ωₚ²/(ω²+Γ²)`, `ε″ = ωₚ²Γ/(ω(ω²+Γ²))`.
pub fn permittivity(material: &DrudeLorentzMaterial, omega: f64) -> Result<ComplexPermittivity> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain {
            name: "omega",
            value: omega,
            constraint: "omega > 0",
        });
    }
    let denom = omega * omega + material.gamma * material.gamma;
    Ok(ComplexPermittivity {
        eps_real: material.eps_inf - material.omega_p_sq / denom,
        eps_imag: material.omega_p_sq * material.gamma / (omega * denom),
    })
}

/// Principal square root of the permittivity, branch cut on the negative real axis.
///
/// Evaluated as `t = √((|x| + |z|)/2)` to avoid cancellation when `x < 0` and `|y| ≪ |x|`.
pub fn refractive_index(eps: ComplexPermittivity) -> RefractiveIndex {
    let (x, y) = (eps.eps_real, eps.eps_imag);
    if x == 0.0 && y == 0.0 {
        return RefractiveIndex::new(0.0, 0.0);
    }
    let t = ((x.abs() + x.hypot(y)) * 0.5).sqrt();
    if x >= 0.0 {
        RefractiveIndex::new(t, y / (2.0 * t))
    } else {
        RefractiveIndex::new(y.abs() / (2.0 * t), t.copysign(y))
    }
}

/// Exact root of `Re ε(ω) = 0`: `ω = √(ωₚ²/ε∞ − Γ²)`.
pub fn enz_crossing(material: &DrudeLorentzMaterial) -> Result<f64> {
    let ratio = material.omega_p_sq / material.eps_inf;
    let gamma_sq = material.gamma * material.gamma;
    if !(ratio > gamma_sq) {
        return Err(Error::NoCrossing { ratio, gamma_sq });
    }
    Ok((ratio - gamma_sq).sqrt())
}

/// In-medium wavenumber `K = k (n₀r(ck) + i n₀i(ck))`, fixed through the modulation.
pub fn material_wavenumber(medium: &Medium, mode: &VacuumMode) -> Result<Complex64> {
    let n0 = medium.index(mode.omega_vac)?;
    Ok(mode.k * n0.as_complex())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const ITO: DrudeLorentzMaterial = DrudeLorentzMaterial::ITO_LUK2015;

    fn bisect_re_eps(material: &DrudeLorentzMaterial, mut lo: f64, mut hi: f64) -> f64 {
        let f = |w: f64| {
            material.eps_inf - material.omega_p_sq / (w * w + material.gamma * material.gamma)
        };
        assert!(f(lo) < 0.0 && f(hi) > 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn eps_real_vanishes_at_crossing() {
        let w = enz_crossing(&ITO).unwrap();
        let eps = permittivity(&ITO, w).unwrap();
        assert!(eps.eps_real.abs() < 1e-14, "{}", eps.eps_real);
    }

    #[test]
    fn lossless_plasma_edge() {
        let m = DrudeLorentzMaterial::new(1.0, 1e30, 0.0).unwrap();
        let eps = permittivity(&m, 1e15).unwrap();
        assert_eq!(eps.eps_real, 0.0);
        assert_eq!(eps.eps_imag, 0.0);
        assert_eq!(enz_crossing(&m).unwrap(), 1e15);
    }

    #[test]
    fn ito_golden_values() {
        // 40-digit evaluation of ε∞ − ωₚ²/(ω² + iωΓ) and its principal root.
        let eps = permittivity(&ITO, 2.0e15).unwrap();
        assert_relative_eq!(eps.eps_real, 2.1785550458038264603, max_relative = 1e-14);
        assert_relative_eq!(eps.eps_imag, 0.11791841491245295078, max_relative = 1e-14);
        let n = refractive_index(eps);
        assert_relative_eq!(n.n_real, 1.4765329383939310531, max_relative = 1e-14);
        assert_relative_eq!(n.n_imag, 0.039930844699176277833, max_relative = 1e-13);

        let n = refractive_index(permittivity(&ITO, 1.2e15).unwrap());
        assert_relative_eq!(n.n_real, 0.2445132705411043639, max_relative = 1e-13);
        assert_relative_eq!(n.n_imag, 1.1088011769538374768, max_relative = 1e-14);
        let back = n.as_complex() * n.as_complex();
        let eps = permittivity(&ITO, 1.2e15).unwrap().as_complex();
        assert!((back - eps).norm() / eps.norm() < 1e-12);
    }

    #[test]
    fn vacuum_and_pure_imaginary_permittivity() {
        let n = refractive_index(ComplexPermittivity {
            eps_real: 1.0,
            eps_imag: 0.0,
        });
        assert_eq!(n, RefractiveIndex::VACUUM);
        let n = refractive_index(ComplexPermittivity {
            eps_real: 0.0,
            eps_imag: 0.5,
        });
        assert_relative_eq!(n.n_real, 0.5, max_relative = 1e-15);
        assert_relative_eq!(n.n_imag, 0.5, max_relative = 1e-15);
    }

    #[test]
    fn negative_real_axis_is_approached_from_above() {
        let n = refractive_index(ComplexPermittivity {
            eps_real: -4.0,
            eps_imag: 0.0,
        });
        assert_eq!(n, RefractiveIndex::new(0.0, 2.0));
    }

    #[test]
    fn enz_crossing_matches_reported_ito_values() {
        let w = enz_crossing(&ITO).unwrap();
        assert_relative_eq!(w, 1.362723477825258775e15, max_relative = 1e-14);
        assert!((w - 1.36e15).abs() / 1.36e15 < 0.01);
        let lambda_nm = crate::units::m_to_nm(crate::units::omega_to_lambda(w));
        assert!((lambda_nm - 1377.0).abs() / 1377.0 < 0.01, "{lambda_nm}");
    }

    #[test]
    fn enz_crossing_agrees_with_bisection() {
        let exact = enz_crossing(&ITO).unwrap();
        let root = bisect_re_eps(&ITO, 1e14, 1e16);
        assert!((root - exact).abs() / exact < 1e-9);
        let below = permittivity(&ITO, exact * (1.0 - 1e-9)).unwrap().eps_real;
        let above = permittivity(&ITO, exact * (1.0 + 1e-9)).unwrap().eps_real;
        assert!(below < 0.0 && above > 0.0);
    }

    #[test]
    fn no_crossing_when_overdamped() {
        let m = DrudeLorentzMaterial::new(4.0, 4e28, 2e14).unwrap();
        assert!(matches!(enz_crossing(&m), Err(Error::NoCrossing { .. })));
    }

    #[test]
    fn permittivity_rejects_nonpositive_frequency() {
        assert!(permittivity(&ITO, 0.0).is_err());
        assert!(permittivity(&ITO, -1.0).is_err());
    }

    #[test]
    fn material_validation() {
        assert!(DrudeLorentzMaterial::new(0.5, 1e30, 0.0).is_err());
        assert!(DrudeLorentzMaterial::new(1.0, 0.0, 0.0).is_err());
        assert!(DrudeLorentzMaterial::new(1.0, 1e30, -1.0).is_err());
        assert!(Medium::Constant { n0: 0.0 }.validate().is_err());
    }

    #[test]
    fn material_wavenumber_two_paths() {
        let vac = Medium::Constant { n0: 1.0 };
        let mode = VacuumMode::from_k(3.3e6).unwrap();
        assert_eq!(
            material_wavenumber(&vac, &mode).unwrap(),
            Complex64::new(3.3e6, 0.0)
        );

        let mode = VacuumMode::from_k(4e6).unwrap();
        let medium = Medium::DrudeLorentz(ITO);
        let composed = material_wavenumber(&medium, &mode).unwrap();
        let direct = mode.k * permittivity(&ITO, C * 4e6).unwrap().as_complex().sqrt();
        assert!((composed - direct).norm() / direct.norm() < 1e-12);
        assert_relative_eq!(composed.re, 977253.96486489504899, max_relative = 1e-13);
        assert_relative_eq!(composed.im, 4447991.6676911510437, max_relative = 1e-13);
    }

    #[test]
    fn wavenumber_at_enz_has_equal_parts() {
        let w = enz_crossing(&ITO).unwrap();
        let mode = VacuumMode::from_k(w / C).unwrap();
        let big_k = material_wavenumber(&Medium::DrudeLorentz(ITO), &mode).unwrap();
        assert!((big_k.re - big_k.im).abs() / big_k.re < 1e-10);
        let n = Medium::DrudeLorentz(ITO).index(w).unwrap();
        assert!((n.n_real - n.n_imag).abs() <= 1e-10);
    }

    #[test]
    fn vacuum_mode_identities() {
        let mode = VacuumMode::from_wavelength(1.5e-6).unwrap();
        assert_eq!(mode.omega_vac, C * mode.k);
        assert_relative_eq!(mode.lambda_vac, 1.5e-6, max_relative = 1e-15);
        assert!(VacuumMode::from_k(0.0).is_err());
    }

    proptest! {
        #[test]
        fn ito_is_passive_on_the_working_band(log_w in 14.0f64..16.0) {
            let w = 10f64.powf(log_w);
            let eps = permittivity(&ITO, w).unwrap();
            let n = refractive_index(eps);
            prop_assert!(eps.eps_imag > 0.0);
            prop_assert!(n.n_imag > 0.0);
            prop_assert!(n.n_real >= 0.0);
        }

        #[test]
        fn re_eps_is_increasing(log_w in 14.0f64..16.0, step in 1e-6f64..0.1) {
            let w = 10f64.powf(log_w);
            let a = permittivity(&ITO, w).unwrap().eps_real;
            let b = permittivity(&ITO, w * (1.0 + step)).unwrap().eps_real;
            prop_assert!(b > a);
        }

        #[test]
        fn sqrt_squares_back(re in -1e3f64..1e3, im in 0.0f64..1e3) {
            prop_assume!(re != 0.0 || im != 0.0);
            let eps = ComplexPermittivity { eps_real: re, eps_imag: im };
            let n = refractive_index(eps);
            prop_assert!(n.n_real >= 0.0 && n.n_imag >= 0.0);
            let z = eps.as_complex();
            let back = n.as_complex() * n.as_complex();
            prop_assert!((back - z).norm() <= 1e-12 * z.norm());
        }
    }
}

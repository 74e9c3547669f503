//! Physical constants and the unit conversions used at the I/O boundary.
//! Everything inside the library is SI: s, m, rad/s.

use std::f64::consts::PI;

/// Speed of light in vacuum, m/s (exact).
pub const C: f64 = 299_792_458.0;

pub const FS: f64 = 1e-15;
pub const NM: f64 = 1e-9;
pub const UM: f64 = 1e-6;

// Dividing by an exactly representable power of ten rounds once, so `fs_to_s(5.0)`
// is the same double as the literal `5e-15`.

pub fn fs_to_s(fs: f64) -> f64 {
    fs / 1e15
}

pub fn nm_to_m(nm: f64) -> f64 {
    nm / 1e9
}

pub fn m_to_nm(m: f64) -> f64 {
    m * 1e9
}

pub fn um_to_m(um: f64) -> f64 {
    um / 1e6
}

/// Vacuum angular frequency → vacuum wavelength.
pub fn omega_to_lambda(omega: f64) -> f64 {
    2.0 * PI * C / omega
}

pub fn lambda_to_k(lambda: f64) -> f64 {
    2.0 * PI / lambda
}

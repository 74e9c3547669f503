//! Adaptive Dormand-Prince 8(5,3) integration of small complex systems `y' = f(t, y)`.
//!
//! Error control follows Hairer's `dop853`: the fifth- and third-order embedded
//! estimates are blended and weighted per component by `atol + rtol·max(|yᵢ|, |yᵢ'|)`.
//! The caller supplies a time-dependent cap on the step size.

mod tableau;

use num_complex::Complex64;

use crate::error::{Error, Result};
use tableau::{A, B, C, E3, E5, STAGES};

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

type State<const N: usize> = [Complex64; N];

fn axpy<const N: usize>(y: &State<N>, h: f64, k: &[State<N>], w: &[f64]) -> State<N> {
    let mut out = *y;
    for (kj, &wj) in k.iter().zip(w) {
        if wj == 0.0 {
            continue;
        }
        for i in 0..N {
            out[i] += kj[i] * (h * wj);
        }
    }
    out
}

/// Integrates from `t0` to `t1 > t0`, landing exactly on `t1`.
pub(crate) fn integrate<const N: usize, F, G>(
    mut f: F,
    step_cap: G,
    t0: f64,
    y0: State<N>,
    t1: f64,
    tol: Tolerances,
) -> Result<(State<N>, Stats)>
where
    F: FnMut(f64, &State<N>) -> State<N>,
    G: Fn(f64) -> f64,
{
    debug_assert!(t1 > t0);
    let mut stats = Stats::default();
    let mut t = t0;
    let mut y = y0;
    let mut k = [[Complex64::new(0.0, 0.0); N]; STAGES + 1];
    k[0] = f(t, &y);
    stats.evaluations += 1;

    let span = t1 - t0;
    let h_floor = 16.0 * f64::EPSILON * t0.abs().max(t1.abs()).max(span);
    let mut h = step_cap(t).min(span * 1e-3);
    let mut last_rejected = false;

    while t < t1 {
        if stats.accepted + stats.rejected >= tol.max_steps {
            return Err(Error::MaxSteps {
                max_steps: tol.max_steps,
                t,
            });
        }
        h = h.min(step_cap(t));
        let finishing = t + h >= t1;
        if finishing {
            h = t1 - t;
        }
        if h < h_floor && !finishing {
            return Err(Error::StepFailure { t, h });
        }

        for s in 1..STAGES {
            let ys = axpy(&y, h, &k[..s], &A[s][..s]);
            k[s] = f(t + C[s] * h, &ys);
        }
        let y_new = axpy(&y, h, &k[..STAGES], &B);
        let t_new = if finishing { t1 } else { t + h };
        k[STAGES] = f(t_new, &y_new);
        stats.evaluations += STAGES;

        if y_new.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { t: t_new });
        }

        let err = error_norm(&y, &y_new, &k, h, tol);
        if err <= 1.0 {
            stats.accepted += 1;
            t = t_new;
            y = y_new;
            k[0] = k[STAGES];
            let grow = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-1.0 / 8.0)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            h *= if last_rejected { grow.min(1.0) } else { grow };
            last_rejected = false;
        } else {
            stats.rejected += 1;
            h *= (SAFETY * err.powf(-1.0 / 8.0)).max(MIN_FACTOR);
            last_rejected = true;
        }
    }
    Ok((y, stats))
}

fn error_norm<const N: usize>(
    y: &State<N>,
    y_new: &State<N>,
    k: &[State<N>; STAGES + 1],
    h: f64,
    tol: Tolerances,
) -> f64 {
    let mut err5 = 0.0;
    let mut err3 = 0.0;
    for i in 0..N {
        let scale = tol.atol + tol.rtol * y[i].norm().max(y_new[i].norm());
        let mut e5 = Complex64::new(0.0, 0.0);
        let mut e3 = Complex64::new(0.0, 0.0);
        for j in 0..=STAGES {
            e5 += k[j][i] * E5[j];
            e3 += k[j][i] * E3[j];
        }
        err5 += (e5 / scale).norm_sqr();
        err3 += (e3 / scale).norm_sqr();
    }
    if err5 == 0.0 && err3 == 0.0 {
        return 0.0;
    }
    h.abs() * err5 / ((err5 + 0.01 * err3) * N as f64).sqrt()
}

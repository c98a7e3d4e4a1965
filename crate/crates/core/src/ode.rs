//! Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4)).
//!
//! One integrator serves the whole crate: the scalar profile equation, the
//! relative-error-controlled tail passes, and the complex shooting systems
//! (packed as interleaved real/imaginary components). Error control uses a
//! per-component scale `sc_i = atol_i + rtol * max(|y_i|, |y_new_i|)` so that
//! a co-integrated profile deviation can be held to *relative* accuracy while
//! the remaining components use an absolute floor.

use crate::{Error, Result};

/// Dormand-Prince 5(4) coefficients (the classic `ode45` tableau).
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
/// Fifth-order weights (also the last stage position: first-same-as-last).
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
/// Difference between the 5th- and embedded 4th-order weights.
const E1: f64 = B1 - 5179.0 / 57600.0;
const E3: f64 = B3 - 7571.0 / 16695.0;
const E4: f64 = B4 - 393.0 / 640.0;
const E5: f64 = B5 + 92097.0 / 339200.0;
const E6: f64 = B6 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;

/// Options for one integration run.
#[derive(Debug, Clone)]
pub struct OdeOptions {
    /// Absolute tolerance applied to every component unless overridden.
    pub abs_tol: f64,
    /// Relative tolerance.
    pub rel_tol: f64,
    /// Per-component absolute tolerances (overrides `abs_tol` when set).
    pub abs_tol_per: Option<Vec<f64>>,
    /// Cap on the step magnitude.
    pub h_max: Option<f64>,
    /// Initial step magnitude (heuristic when `None`).
    pub h_init: Option<f64>,
    /// Budget of accepted + rejected steps.
    pub max_steps: usize,
    /// Abort with an overflow error when the sup norm of the state exceeds
    /// this bound (guards shooting runs against picking a growing mode).
    pub norm_cap: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            abs_tol: 1e-6,
            rel_tol: 1e-8,
            abs_tol_per: None,
            h_max: None,
            h_init: None,
            max_steps: 2_000_000,
            norm_cap: None,
        }
    }
}

/// Accepted/rejected step counts and RHS evaluations for one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub steps: usize,
    pub rejected: usize,
    pub evals: usize,
}

impl OdeStats {
    pub fn absorb(&mut self, other: OdeStats) {
        self.steps += other.steps;
        self.rejected += other.rejected;
        self.evals += other.evals;
    }
}

fn sup_norm(y: &[f64]) -> f64 {
    y.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Integrate `y' = f(x, y)` from `x0` to `x1` (either direction).
///
/// `observer`, when present, is called at `(x0, y0)` and after every accepted
/// step; the profile solver uses it to record its dense-output nodes.
pub fn integrate<F>(
    mut f: F,
    x0: f64,
    x1: f64,
    y0: &[f64],
    opts: &OdeOptions,
    mut observer: Option<&mut dyn FnMut(f64, &[f64])>,
) -> Result<(Vec<f64>, OdeStats)>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y0.len();
    let mut stats = OdeStats::default();
    let span = x1 - x0;
    let mut y = y0.to_vec();
    if let Some(obs) = observer.as_deref_mut() {
        obs(x0, &y);
    }
    if span == 0.0 {
        return Ok((y, stats));
    }
    let dir = span.signum();
    let h_cap = opts.h_max.unwrap_or(f64::INFINITY).min(span.abs());

    let scale = |i: usize, yi: f64, yn: f64| -> f64 {
        let atol = opts
            .abs_tol_per
            .as_ref()
            .map(|v| v[i])
            .unwrap_or(opts.abs_tol);
        atol + opts.rel_tol * yi.abs().max(yn.abs())
    };

    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];

    let mut x = x0;
    f(x, &y, &mut k1);
    stats.evals += 1;

    // Hairer-style initial step guess unless the caller pinned one.
    let mut h = match opts.h_init {
        Some(h0) => h0.abs().min(h_cap),
        None => {
            let d0 = (0..n)
                .map(|i| (y[i] / scale(i, y[i], y[i])).powi(2))
                .sum::<f64>()
                .sqrt()
                / (n as f64).sqrt();
            let d1 = (0..n)
                .map(|i| (k1[i] / scale(i, y[i], y[i])).powi(2))
                .sum::<f64>()
                .sqrt()
                / (n as f64).sqrt();
            let h0 = if d0 < 1e-5 || d1 < 1e-5 {
                1e-6
            } else {
                0.01 * d0 / d1
            };
            h0.min(h_cap).min(span.abs() / 10.0).max(1e-10)
        }
    } * dir;

    loop {
        if stats.steps + stats.rejected >= opts.max_steps {
            return Err(Error::Integration(format!(
                "step budget {} exhausted at x = {x:.6e}",
                opts.max_steps
            )));
        }
        // Land exactly on the endpoint.
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        // A rounding sliver of the interval is arrival, not a collapsed step.
        if (x1 - x).abs() <= 1e-13 * x1.abs().max(1.0) {
            if let Some(obs) = observer.as_deref_mut() {
                obs(x1, &y);
            }
            return Ok((y, stats));
        }
        if h.abs() < 1e-14 * x.abs().max(1.0) {
            return Err(Error::Integration(format!(
                "step size collapsed at x = {x:.6e} (h = {h:.3e})"
            )));
        }

        for i in 0..n {
            ytmp[i] = y[i] + h * A21 * k1[i];
        }
        f(x + C[1] * h, &ytmp, &mut k2);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        f(x + C[2] * h, &ytmp, &mut k3);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        f(x + C[3] * h, &ytmp, &mut k4);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f(x + C[4] * h, &ytmp, &mut k5);
        for i in 0..n {
            ytmp[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        f(x + C[5] * h, &ytmp, &mut k6);
        for i in 0..n {
            ynew[i] =
                y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        f(x + h, &ynew, &mut k7);
        stats.evals += 6;

        let mut err_sq = 0.0;
        for i in 0..n {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = scale(i, y[i], ynew[i]);
            err_sq += (e / sc) * (e / sc);
        }
        let err = (err_sq / n as f64).sqrt();

        if !err.is_finite() {
            return Err(Error::Integration(format!(
                "non-finite error estimate at x = {x:.6e}"
            )));
        }

        if err <= 1.0 {
            x += h;
            y.copy_from_slice(&ynew);
            std::mem::swap(&mut k1, &mut k7); // first-same-as-last
            stats.steps += 1;
            if let Some(cap) = opts.norm_cap {
                if sup_norm(&y) > cap {
                    return Err(Error::Overflow(format!(
                        "state norm exceeded {cap:.1e} at x = {x:.6e}"
                    )));
                }
            }
            if let Some(obs) = observer.as_deref_mut() {
                obs(x, &y);
            }
            if (x - x1) * dir >= 0.0 {
                return Ok((y, stats));
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = (h.abs() * factor).min(h_cap) * dir;
        } else {
            stats.rejected += 1;
            let factor = (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            h = h.abs() * factor * dir;
        }
    }
}

/// Integrate to the endpoint without recording intermediate nodes.
pub fn integrate_to<F>(
    f: F,
    x0: f64,
    x1: f64,
    y0: &[f64],
    opts: &OdeOptions,
) -> Result<(Vec<f64>, OdeStats)>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    integrate(f, x0, x1, y0, opts, None)
}

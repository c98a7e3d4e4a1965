//! Layer parameters and the background boundary-layer profile.
//!
//! The profile `v̂` solves the scalar travelling-wave equation
//! `v̂' = H(v̂) = v̂ (v̂ - 1 + a (v̂^{-γ} - 1))` and connects the rest states
//! `v₋ = 1` (at -∞) and `v₊` (at +∞), with the boundary value `v̂(0) = v₀`
//! fixing the translate. The constant `a` is pinned by requiring both
//! endstates to be rest points. Inflow layers live on `[0, L]`, outflow
//! layers on `[-L, 0]`; the strong-layer limit `v₊ → 0` has the explicit
//! form `v̂⁰(x) = (1 - tanh((x - δ)/2))/2`.
//!
//! Two numerical subtleties are handled here once and for all:
//! - `δ` (where `v̂ = (1 + v₊)/2`) may lie outside the computational domain,
//!   so it is located on the full-line orbit by integrating towards it;
//! - shooting integrations need the *relative* deviation of `v̂` from the
//!   endstate at the far end of the domain (`tail_offset`), which an
//!   absolute-tolerance solve cannot deliver; a dedicated pass integrates
//!   the centered deviation with relative error control and a
//!   cancellation-free right-hand side built from `expm1`/`log1p`.

use crate::ode::{integrate, integrate_to, OdeOptions};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;

/// Which half-line the layer occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Fluid enters through the boundary: domain `[0, L]`, endstate `v₊` at +∞.
    Inflow,
    /// Fluid exits through the boundary: domain `[-L, 0]`, endstate `1` at -∞.
    Outflow,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Inflow => write!(f, "inflow"),
            Side::Outflow => write!(f, "outflow"),
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "inflow" | "in" => Ok(Side::Inflow),
            "outflow" | "out" => Ok(Side::Outflow),
            other => Err(Error::Config(format!("unknown side '{other}'"))),
        }
    }
}

/// Validated layer parameters plus derived constants.
///
/// `v_plus = 0` is the sentinel for the strong-layer (pressureless) limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerParams {
    /// Adiabatic exponent, `1 ≤ γ ≤ 3`.
    pub gamma: f64,
    /// Right endstate (density variable), `0 ≤ v₊ < v₀`.
    pub v_plus: f64,
    /// Boundary value `v̂(0)`, `v₊ < v₀ < 1`.
    pub v0: f64,
    pub side: Side,
    /// Pressure constant pinned by the endstate matching condition.
    pub a: f64,
    /// Layer location: the unique `x` with `v̂(x) = (1 + v₊)/2`.
    pub delta: f64,
}

/// Pressure constant `a` making both endstates rest points of the profile
/// equation: `a = v₊^γ (1 - v₊) / (1 - v₊^γ)` (continuously `a = v₊` at γ=1).
pub fn derive_constants(gamma: f64, v_plus: f64) -> Result<f64> {
    if !(1.0..=3.0).contains(&gamma) {
        return Err(Error::Domain(format!("gamma = {gamma} outside [1, 3]")));
    }
    if !(v_plus > 0.0 && v_plus < 1.0) {
        return Err(Error::Domain(format!("v_plus = {v_plus} outside (0, 1)")));
    }
    if gamma == 1.0 {
        return Ok(v_plus);
    }
    Ok(v_plus.powf(gamma) * (1.0 - v_plus) / (1.0 - v_plus.powf(gamma)))
}

/// Profile right-hand side `H(v) = v (v - 1 + a (v^{-γ} - 1))`.
pub fn profile_rhs(params: &LayerParams, v: f64) -> f64 {
    v * (v - 1.0 + params.a * (v.powf(-params.gamma) - 1.0))
}

impl LayerParams {
    /// Validate the parameter set and derive `a` and `δ`.
    pub fn new(gamma: f64, v_plus: f64, v0: f64, side: Side) -> Result<Self> {
        if !(1.0..=3.0).contains(&gamma) {
            return Err(Error::Domain(format!("gamma = {gamma} outside [1, 3]")));
        }
        if !(0.0..1.0).contains(&v_plus) {
            return Err(Error::Domain(format!("v_plus = {v_plus} outside [0, 1)")));
        }
        if !(v0 > v_plus && v0 < 1.0) {
            return Err(Error::Domain(format!(
                "compressive ordering violated: need v_plus < v0 < 1, got v_plus = {v_plus}, v0 = {v0}"
            )));
        }
        let a = if v_plus == 0.0 {
            0.0
        } else {
            derive_constants(gamma, v_plus)?
        };
        let mut params = LayerParams {
            gamma,
            v_plus,
            v0,
            side,
            a,
            delta: 0.0,
        };
        params.delta = locate_delta(&params)?;
        Ok(params)
    }

    /// `(1 + v₊)/2`, the profile value defining `δ`.
    pub fn midpoint(&self) -> f64 {
        0.5 * (1.0 + self.v_plus)
    }

    /// True when this parameter set is the strong-layer sentinel `v₊ = 0`.
    pub fn is_limiting(&self) -> bool {
        self.v_plus == 0.0
    }

    /// `(1 - v₊)/(1 - v₊^γ)`, the cancellation-free combination `a v₊^{-γ}`.
    pub(crate) fn q_plus(&self) -> f64 {
        if self.gamma == 1.0 {
            1.0
        } else {
            (1.0 - self.v_plus) / (1.0 - self.v_plus.powf(self.gamma))
        }
    }

    /// `H(v₊ + y)` evaluated without cancellation for tiny deviations `y > 0`.
    ///
    /// Uses `v - 1 + a(v^{-γ} - 1) = y + q₊ expm1(-γ log1p(y / v₊))`, which is
    /// exact at `y = 0` because the endstate matching makes the bracket vanish
    /// there identically.
    pub(crate) fn rhs_centered_plus(&self, y: f64) -> f64 {
        debug_assert!(self.v_plus > 0.0);
        let bracket = y + self.q_plus() * (-self.gamma * (y / self.v_plus).ln_1p()).exp_m1();
        (self.v_plus + y) * bracket
    }

    /// `d(1 - v̂)/dx = -H(1 - z)` evaluated without cancellation for tiny
    /// deviations `z = 1 - v̂ > 0` from the left endstate.
    pub(crate) fn rhs_centered_minus(&self, z: f64) -> f64 {
        let correction = if self.a == 0.0 {
            0.0
        } else {
            self.a * (-self.gamma * (-z).ln_1p()).exp_m1()
        };
        (1.0 - z) * (z - correction)
    }

    /// Deviation `v̂(ℓ) - v₊` at `x = ℓ > 0`, accurate in *relative* terms.
    pub(crate) fn tail_offset_plus(&self, l: f64, rel_tol: f64) -> Result<f64> {
        debug_assert!(self.v_plus > 0.0);
        let opts = OdeOptions {
            abs_tol: 0.0,
            rel_tol: rel_tol.min(1e-8),
            abs_tol_per: Some(vec![1e-300]),
            ..OdeOptions::default()
        };
        let (y, _) = integrate_to(
            |_, y, dy| dy[0] = self.rhs_centered_plus(y[0].max(1e-300)),
            0.0,
            l,
            &[self.v0 - self.v_plus],
            &opts,
        )?;
        Ok(y[0])
    }

    /// Deviation `1 - v̂(-ℓ)` at `x = -ℓ < 0`, accurate in *relative* terms.
    pub(crate) fn tail_offset_minus(&self, l: f64, rel_tol: f64) -> Result<f64> {
        let opts = OdeOptions {
            abs_tol: 0.0,
            rel_tol: rel_tol.min(1e-8),
            abs_tol_per: Some(vec![1e-300]),
            ..OdeOptions::default()
        };
        let (z, _) = integrate_to(
            |_, z, dz| dz[0] = self.rhs_centered_minus(z[0].max(1e-300)),
            0.0,
            -l,
            &[1.0 - self.v0],
            &opts,
        )?;
        Ok(z[0])
    }
}

/// Locate `δ` on the full-line orbit through `v̂(0) = v₀`.
fn locate_delta(params: &LayerParams) -> Result<f64> {
    if params.is_limiting() {
        // Closed form: v̂⁰(δ) = 1/2 at δ = ln(v₀ / (1 - v₀)).
        return Ok((params.v0 / (1.0 - params.v0)).ln());
    }
    let mid = params.midpoint();
    if params.v0 == mid {
        return Ok(0.0);
    }
    // The profile decreases, so the crossing lies forward of 0 iff v₀ > mid.
    let dir = if params.v0 > mid { 1.0 } else { -1.0 };
    let opts = OdeOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-12,
        h_max: Some(0.1),
        ..OdeOptions::default()
    };
    let clamp = |v: f64| v.clamp(params.v_plus + 1e-14, 1.0 - 1e-14);
    let rhs = |_: f64, y: &[f64], dy: &mut [f64]| dy[0] = profile_rhs(params, clamp(y[0]));

    let mut x0 = 0.0;
    let mut v_start = params.v0;
    for _ in 0..100 {
        let x1 = x0 + dir * 4.0;
        let mut nodes: Vec<(f64, f64)> = Vec::new();
        let mut obs = |x: f64, y: &[f64]| nodes.push((x, y[0]));
        integrate(rhs, x0, x1, &[v_start], &opts, Some(&mut obs))?;
        // Search the chunk for a bracketing step, in traversal order.
        for w in nodes.windows(2) {
            let (xa, va) = w[0];
            let (xb, vb) = w[1];
            if (va - mid) * (vb - mid) <= 0.0 {
                return Ok(bisect_node(params, xa, va, xb, vb, mid));
            }
        }
        let last = *nodes.last().expect("integration records nodes");
        x0 = last.0;
        v_start = last.1;
    }
    Err(Error::Integration(format!(
        "layer midpoint not reached within |x| <= 400 (v0 = {}, v_plus = {})",
        params.v0, params.v_plus
    )))
}

/// Bisection for `v̂ = mid` on one accepted step, using the cubic Hermite
/// interpolant with exact slopes; terminates at 1e-10 in `x`.
fn bisect_node(params: &LayerParams, xa: f64, va: f64, xb: f64, vb: f64, mid: f64) -> f64 {
    let h = xb - xa;
    let ma = profile_rhs(params, va);
    let mb = profile_rhs(params, vb);
    let eval = |x: f64| hermite(xa, va, ma, xb, vb, mb, x) - mid;
    let (mut lo, mut hi) = (xa, xb);
    let (mut flo, _fhi) = (eval(lo), eval(hi));
    while (hi - lo).abs() > 1e-10 {
        let c = 0.5 * (lo + hi);
        let fc = eval(c);
        if (flo <= 0.0) == (fc <= 0.0) {
            lo = c;
            flo = fc;
        } else {
            hi = c;
        }
        let _ = h;
    }
    0.5 * (lo + hi)
}

fn hermite(x0: f64, v0: f64, m0: f64, x1: f64, v1: f64, m1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * v0
        + (t3 - 2.0 * t2 + t) * h * m0
        + (-2.0 * t3 + 3.0 * t2) * v1
        + (t3 - t2) * h * m1
}

fn hermite_slope(x0: f64, v0: f64, m0: f64, x1: f64, v1: f64, m1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    (6.0 * t2 - 6.0 * t) * v0 / h
        + (3.0 * t2 - 4.0 * t + 1.0) * m0
        + (-6.0 * t2 + 6.0 * t) * v1 / h
        + (3.0 * t2 - 2.0 * t) * m1
}

/// Dense output of an accepted-step sequence: cubic Hermite interpolation
/// with the exact ODE slopes at the nodes.
#[derive(Debug, Clone)]
pub(crate) struct DenseOutput {
    pub xs: Vec<f64>,
    pub vs: Vec<f64>,
    pub slopes: Vec<f64>,
}

impl DenseOutput {
    fn locate(&self, x: f64) -> usize {
        // Index of the interval [xs[i], xs[i+1]] containing x (clamped).
        match self.xs.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(0) => 0,
            Err(i) if i >= self.xs.len() => self.xs.len() - 2,
            Err(i) => i - 1,
        }
    }

    fn value(&self, x: f64) -> f64 {
        let i = self.locate(x);
        hermite(
            self.xs[i],
            self.vs[i],
            self.slopes[i],
            self.xs[i + 1],
            self.vs[i + 1],
            self.slopes[i + 1],
            x,
        )
    }

    fn slope(&self, x: f64) -> f64 {
        let i = self.locate(x);
        hermite_slope(
            self.xs[i],
            self.vs[i],
            self.slopes[i],
            self.xs[i + 1],
            self.vs[i + 1],
            self.slopes[i + 1],
            x,
        )
    }
}

#[derive(Debug, Clone)]
enum Repr {
    Dense(DenseOutput),
    /// Strong-layer limit: `v̂⁰(x) = 1 / (1 + e^{x-δ})`, sampled grid kept for
    /// export only.
    Limiting { grid: Vec<f64> },
}

/// A computed boundary-layer profile on `[0, L]` (inflow) or `[-L, 0]`
/// (outflow).
#[derive(Debug, Clone)]
pub struct Profile {
    pub params: LayerParams,
    /// Domain half-length.
    pub l: f64,
    /// Relative-accurate deviation of `v̂` from the approached endstate at the
    /// far end of the domain: `v̂(L) - v₊` (inflow) or `1 - v̂(-L)` (outflow).
    /// Zero-filled for the closed-form limit.
    pub tail_offset: f64,
    repr: Repr,
}

impl Profile {
    /// Domain as `(x_min, x_max)`.
    pub fn domain(&self) -> (f64, f64) {
        match self.params.side {
            Side::Inflow => (0.0, self.l),
            Side::Outflow => (-self.l, 0.0),
        }
    }

    /// Strictly monotone grid of accepted-step abscissae.
    pub fn grid(&self) -> &[f64] {
        match &self.repr {
            Repr::Dense(d) => &d.xs,
            Repr::Limiting { grid } => grid,
        }
    }

    /// Profile value by dense-output interpolation; arguments are clamped to
    /// the domain. In the strong-layer limit the closed form is evaluated
    /// directly (valid for every `x`, no clamping).
    pub fn vhat_at(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Dense(d) => {
                let (lo, hi) = self.domain();
                d.value(x.clamp(lo, hi))
            }
            Repr::Limiting { .. } => limiting_vhat(x, self.params.delta),
        }
    }

    /// Profile slope. At grid nodes this equals `H(v̂)` exactly by
    /// construction.
    pub fn dvhat_at(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Dense(d) => {
                let (lo, hi) = self.domain();
                d.slope(x.clamp(lo, hi))
            }
            Repr::Limiting { .. } => {
                let v = limiting_vhat(x, self.params.delta);
                v * (v - 1.0)
            }
        }
    }

    /// Export `x,vhat,dvhat` rows at the grid nodes.
    pub fn to_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,vhat,dvhat")?;
        match &self.repr {
            Repr::Dense(d) => {
                for i in 0..d.xs.len() {
                    writeln!(w, "{},{},{}", d.xs[i], d.vs[i], d.slopes[i])?;
                }
            }
            Repr::Limiting { grid } => {
                for &x in grid {
                    let v = limiting_vhat(x, self.params.delta);
                    writeln!(w, "{},{},{}", x, v, v * (v - 1.0))?;
                }
            }
        }
        Ok(())
    }
}

/// `v̂⁰(x) = (1 - tanh((x-δ)/2))/2 = 1/(1 + e^{x-δ})`, overflow-safe.
fn limiting_vhat(x: f64, delta: f64) -> f64 {
    1.0 / (1.0 + (x - delta).exp())
}

/// Solve the profile equation on the side-appropriate domain with an adaptive
/// embedded Runge-Kutta 4(5) scheme.
///
/// The returned object interpolates with cubic Hermite polynomials using the
/// exact slopes `H(v̂)` at the accepted nodes; `v̂` is clamped to
/// `[v₊ + 1e-14, 1 - 1e-14]` inside the right-hand side so the fractional
/// power never sees an out-of-range argument. `tail_offset` is computed by a
/// separate relative-error-controlled pass (see module docs).
pub fn solve_profile(params: &LayerParams, l: f64, abs_tol: f64, rel_tol: f64) -> Result<Profile> {
    if params.is_limiting() {
        return limiting_profile(params.gamma, params.v0, params.side, l);
    }
    if !(l > 0.0) {
        return Err(Error::Domain(format!("domain half-length L = {l} must be positive")));
    }
    let clamp = |v: f64| v.clamp(params.v_plus + 1e-14, 1.0 - 1e-14);
    let rhs = |_: f64, y: &[f64], dy: &mut [f64]| dy[0] = profile_rhs(params, clamp(y[0]));
    let opts = OdeOptions {
        abs_tol,
        rel_tol,
        h_max: Some(0.1),
        ..OdeOptions::default()
    };
    let (x_end, tail_offset) = match params.side {
        Side::Inflow => (l, params.tail_offset_plus(l, rel_tol)?),
        Side::Outflow => (-l, params.tail_offset_minus(l, rel_tol)?),
    };
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    {
        let mut obs = |x: f64, y: &[f64]| {
            // The driver reports both the last accepted step and a
            // rounding-sliver arrival at the endpoint; collapse such pairs
            // so grid nodes stay separated.
            if let Some(&last) = xs.last() {
                if (x - last).abs() <= 1e-12 * x.abs().max(1.0) {
                    *xs.last_mut().expect("nonempty") = x;
                    *vs.last_mut().expect("nonempty") = clamp(y[0]);
                    return;
                }
            }
            xs.push(x);
            vs.push(clamp(y[0]));
        };
        integrate(rhs, 0.0, x_end, &[params.v0], &opts, Some(&mut obs))?;
    }
    if params.side == Side::Outflow {
        xs.reverse();
        vs.reverse();
    }
    let slopes = vs.iter().map(|&v| profile_rhs(params, v)).collect();
    Ok(Profile {
        params: *params,
        l,
        tail_offset,
        repr: Repr::Dense(DenseOutput { xs, vs, slopes }),
    })
}

/// The strong-layer limit profile in closed form.
pub fn limiting_profile(gamma: f64, v0: f64, side: Side, l: f64) -> Result<Profile> {
    let params = LayerParams::new(gamma, 0.0, v0, side)?;
    if !(l > 0.0) {
        return Err(Error::Domain(format!("domain half-length L = {l} must be positive")));
    }
    let (lo, hi) = match side {
        Side::Inflow => (0.0, l),
        Side::Outflow => (-l, 0.0),
    };
    let n = (l / 0.1).ceil() as usize;
    let grid = (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect();
    Ok(Profile {
        params,
        l,
        tail_offset: 0.0,
        repr: Repr::Limiting { grid },
    })
}

//! Evans-function evaluation by one-sided shooting.
//!
//! Each variant integrates a single rescaled solution of the eigenvalue
//! system (or its adjoint) from the far field to the boundary at `x = 0` and
//! pairs it with explicit boundary data:
//!
//! - `In` (inflow, `v₊ > 0`): the adjoint system is integrated from `x = L`
//!   down to `0`, seeded with the plus-end adjoint mode associated with the
//!   slow unstable eigenvalue `μ₁⁺`; `D = ⟨W̃₁⁺(0), (1,0,0)ᵀ⟩`.
//! - `Out` (outflow, `v₊ > 0`): the forward system is integrated from
//!   `x = −L` to `0`, seeded with the minus-end growth mode;
//!   `D = ⟨W̃⁰₁, W₁⁻(0)⟩` with the explicit boundary vector `W̃⁰₁`.
//! - `LimIn`, `LimOut`: the same constructions for the strong-layer limiting
//!   system (`v₊ = 0`), where the inflow seed is the exact kernel vector of
//!   the adjoint plus-end matrix (no rescaling: the slow eigenvalue is 0).
//!
//! Numerical safeguards: solutions are rescaled by the relevant mode
//! exponential so the wanted solution is neutral (contaminants then decay in
//! the integration direction); the profile deviation from the approached
//! endstate is co-integrated as an extra state component in cancellation-free
//! centered form and controlled by *relative* tolerance only; a norm cap
//! aborts runaway integrations.
//!
//! Pairing convention: adjoint-side vectors are stored conjugated (the
//! adjoint ODE is driven by `λ̄`), so every reported `D` is analytic in `λ`.

use crate::eigen::{
    limiting_adjoint_direction, seed_frame, C64, KatoFrame, ModeFamily, ModeSelect, V3,
};
use crate::ode::{integrate_to, OdeOptions, OdeStats};
use crate::profile::{profile_rhs, LayerParams, Side};
use crate::{Error, FramePath, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

fn c64(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Shooting configuration: half-domain length and integrator tolerances.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ShotConfig {
    /// Domain truncation: inflow shoots on `[0, L]`, outflow on `[−L, 0]`.
    pub l: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for ShotConfig {
    fn default() -> Self {
        ShotConfig {
            l: 18.0,
            abs_tol: 1e-6,
            rel_tol: 1e-8,
        }
    }
}

impl ShotConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.l.is_finite() && self.l > 0.0) {
            return Err(Error::Config(format!("domain length L = {} must be positive", self.l)));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        Ok(())
    }

    fn ode_options(&self, dims: usize, with_dev: bool) -> OdeOptions {
        let mut per = vec![self.abs_tol; dims];
        if with_dev {
            // The co-integrated profile deviation is controlled relatively:
            // an absolute floor would let its tiny tail values drift.
            *per.last_mut().expect("nonempty") = 1e-300;
        }
        OdeOptions {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            abs_tol_per: Some(per),
            h_max: Some(1.0),
            norm_cap: Some(1e100),
            ..OdeOptions::default()
        }
    }
}

/// Which Evans function is being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Finite-`v₊` inflow layer.
    In,
    /// Finite-`v₊` outflow layer.
    Out,
    /// Strong-layer limiting inflow system.
    LimIn,
    /// Strong-layer limiting outflow system.
    LimOut,
}

impl Variant {
    /// Whether `D(0) = 0` holds structurally (origin root that must be
    /// excluded or indented around when counting by winding).
    pub fn zero_at_origin(self) -> bool {
        !matches!(self, Variant::In)
    }

    pub fn is_limiting(self) -> bool {
        matches!(self, Variant::LimIn | Variant::LimOut)
    }

    pub fn side(self) -> Side {
        match self {
            Variant::In | Variant::LimIn => Side::Inflow,
            Variant::Out | Variant::LimOut => Side::Outflow,
        }
    }

    /// The variant a parameter set selects: its side, with the `v₊ = 0`
    /// sentinel choosing the strong-layer limiting system.
    pub fn for_params(params: &LayerParams) -> Variant {
        match (params.side, params.is_limiting()) {
            (Side::Inflow, false) => Variant::In,
            (Side::Inflow, true) => Variant::LimIn,
            (Side::Outflow, false) => Variant::Out,
            (Side::Outflow, true) => Variant::LimOut,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::In => "in",
            Variant::Out => "out",
            Variant::LimIn => "lim_in",
            Variant::LimOut => "lim_out",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "in" => Ok(Variant::In),
            "out" => Ok(Variant::Out),
            "lim_in" | "lim-in" | "limin" => Ok(Variant::LimIn),
            "lim_out" | "lim-out" | "limout" => Ok(Variant::LimOut),
            other => Err(Error::Config(format!("unknown Evans variant '{other}'"))),
        }
    }
}

/// Evaluation metadata attached to each sample.
#[derive(Debug, Clone, Copy)]
pub struct EvansMeta {
    /// Rescaling exponent (the analytic mode eigenvalue; 0 for the limiting
    /// inflow kernel mode).
    pub mu: C64,
    pub steps: usize,
    pub rejected: usize,
}

/// One Evans-function value.
#[derive(Debug, Clone, Copy)]
pub struct EvansSample {
    pub lambda: C64,
    pub d: C64,
    pub variant: Variant,
    pub meta: EvansMeta,
}

/// Explicit boundary data of the eigenvalue problem at `x = 0`.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    pub side: Side,
    pub lambda: C64,
    /// `v̂′(0) = H(v₀) < 0`.
    pub dvhat0: f64,
    /// Boundary-condition coefficient `α(λ) = −v̂′(0)/(λ − v̂′(0))`; the
    /// denominator cannot vanish on `Re λ ≥ 0`.
    pub alpha: C64,
    /// Distinguished boundary vector: inflow pairs the adjoint shot against
    /// it; for outflow it is the first basis vector of the boundary subspace.
    pub w01: V3,
    /// Completion of the boundary subspace at `x = 0`.
    pub w0_basis: [V3; 2],
    /// Adjoint-side vector (stored conjugated) orthogonal to the outflow
    /// boundary subspace; `D_out = ⟨W̃⁰₁, W₁⁻(0)⟩`. For inflow it equals
    /// `w01`.
    pub wtilde0: V3,
}

/// Assemble the boundary data at `x = 0`. Uses only `v̂(0) = v₀` and the
/// profile equation, so no profile solve is required.
pub fn boundary_data(params: &LayerParams, lambda: C64) -> BoundaryData {
    let dvhat0 = profile_rhs(params, params.v0);
    let denom = lambda - c64(dvhat0);
    let alpha = -c64(dvhat0) / denom;
    let e1 = V3::new(c64(1.0), c64(0.0), c64(0.0));
    match params.side {
        Side::Inflow => BoundaryData {
            side: Side::Inflow,
            lambda,
            dvhat0,
            alpha,
            w01: e1,
            w0_basis: [
                V3::new(c64(0.0), c64(1.0), c64(0.0)),
                V3::new(c64(0.0), c64(0.0), c64(1.0)),
            ],
            wtilde0: e1,
        },
        Side::Outflow => {
            let lam_bar = lambda.conj();
            let wtilde0 = V3::new(
                c64(0.0),
                -c64(1.0),
                -lam_bar / (lam_bar - c64(dvhat0)),
            );
            BoundaryData {
                side: Side::Outflow,
                lambda,
                dvhat0,
                alpha,
                w01: e1,
                w0_basis: [e1, V3::new(c64(0.0), alpha - c64(1.0), c64(1.0))],
                wtilde0,
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Shot integrators
// ---------------------------------------------------------------------------

fn pack7(z: &V3, dev: f64) -> [f64; 7] {
    [z[0].re, z[0].im, z[1].re, z[1].im, z[2].re, z[2].im, dev]
}

fn unpack_z(y: &[f64]) -> V3 {
    V3::new(
        C64::new(y[0], y[1]),
        C64::new(y[2], y[3]),
        C64::new(y[4], y[5]),
    )
}

#[inline]
fn scalar_f_inline(gamma: f64, a: f64, v: f64) -> f64 {
    2.0 * v - a * (gamma - 1.0) * v.powf(-gamma) - (a + 1.0)
}

/// Adjoint shot for the finite-`v₊` inflow layer: integrate the rescaled
/// adjoint system from `x = L` to `0` with the profile deviation from `v₊`
/// co-integrated. Returns `Z(0) = W̃₁⁺(0)` (stored `λ̄`-driven form).
fn shot_inflow_adjoint(
    params: &LayerParams,
    cfg: &ShotConfig,
    lambda: C64,
    mu: C64,
    seed: V3,
    tail: f64,
) -> Result<(V3, OdeStats)> {
    let mu_bar = mu.conj();
    let lam_bar = lambda.conj();
    let (gamma, a, v_plus) = (params.gamma, params.a, params.v_plus);
    let p = *params;
    let rhs = move |_x: f64, y: &[f64], dy: &mut [f64]| {
        let z1 = C64::new(y[0], y[1]);
        let z2 = C64::new(y[2], y[3]);
        let z3 = C64::new(y[4], y[5]);
        let dev = y[6];
        let v = v_plus + dev;
        let f = scalar_f_inline(gamma, a, v);
        let d1 = mu_bar * z1 - z3 * v;
        let d2 = -lam_bar * z1 + mu_bar * z2 - z3 * v;
        let d3 = -lam_bar * z1 - lam_bar * z2 + z3 * (mu_bar + lam_bar - f);
        dy[0] = d1.re;
        dy[1] = d1.im;
        dy[2] = d2.re;
        dy[3] = d2.im;
        dy[4] = d3.re;
        dy[5] = d3.im;
        dy[6] = p.rhs_centered_plus(dev);
    };
    let opts = cfg.ode_options(7, true);
    let (y, stats) = integrate_to(rhs, cfg.l, 0.0, &pack7(&seed, tail), &opts)?;
    Ok((unpack_z(&y), stats))
}

/// Forward shot for the finite-`v₊` outflow layer: integrate the rescaled
/// eigenvalue system from `x = −L` to `0` with the deviation `1 − v̂`
/// co-integrated. Returns `Z(0) = W₁⁻(0)`.
fn shot_outflow_forward(
    params: &LayerParams,
    cfg: &ShotConfig,
    lambda: C64,
    mu: C64,
    seed: V3,
    tail: f64,
) -> Result<(V3, OdeStats)> {
    let (gamma, a) = (params.gamma, params.a);
    let p = *params;
    let rhs = move |_x: f64, y: &[f64], dy: &mut [f64]| {
        let z1 = C64::new(y[0], y[1]);
        let z2 = C64::new(y[2], y[3]);
        let z3 = C64::new(y[4], y[5]);
        let dev = y[6];
        let v = 1.0 - dev;
        let f = scalar_f_inline(gamma, a, v);
        let d1 = -mu * z1 + lambda * (z2 + z3);
        let d2 = -mu * z2 + lambda * z3;
        let d3 = (z1 + z2) * v + z3 * (c64(f) - lambda - mu);
        dy[0] = d1.re;
        dy[1] = d1.im;
        dy[2] = d2.re;
        dy[3] = d2.im;
        dy[4] = d3.re;
        dy[5] = d3.im;
        dy[6] = p.rhs_centered_minus(dev);
    };
    let opts = cfg.ode_options(7, true);
    let (y, stats) = integrate_to(rhs, -cfg.l, 0.0, &pack7(&seed, tail), &opts)?;
    Ok((unpack_z(&y), stats))
}

/// Adjoint shot for the strong-layer limiting inflow system (`μ = 0`, profile
/// in closed form).
fn shot_limiting_adjoint(
    delta: f64,
    cfg: &ShotConfig,
    lambda: C64,
    seed: V3,
) -> Result<(V3, OdeStats)> {
    let lam_bar = lambda.conj();
    let rhs = move |x: f64, y: &[f64], dy: &mut [f64]| {
        let z1 = C64::new(y[0], y[1]);
        let z2 = C64::new(y[2], y[3]);
        let z3 = C64::new(y[4], y[5]);
        let v = 1.0 / (1.0 + (x - delta).exp());
        let f = 2.0 * v - 1.0;
        let d1 = -z3 * v;
        let d2 = -lam_bar * z1 - z3 * v;
        let d3 = -lam_bar * z1 - lam_bar * z2 + z3 * (lam_bar - f);
        dy[0] = d1.re;
        dy[1] = d1.im;
        dy[2] = d2.re;
        dy[3] = d2.im;
        dy[4] = d3.re;
        dy[5] = d3.im;
    };
    let opts = cfg.ode_options(6, false);
    let seed6 = [
        seed[0].re, seed[0].im, seed[1].re, seed[1].im, seed[2].re, seed[2].im,
    ];
    let (y, stats) = integrate_to(rhs, cfg.l, 0.0, &seed6, &opts)?;
    Ok((unpack_z(&y), stats))
}

/// Forward shot for the strong-layer limiting outflow system (profile in
/// closed form; `f⁰(v) = 2v − 1`).
fn shot_limiting_forward(
    delta: f64,
    cfg: &ShotConfig,
    lambda: C64,
    mu: C64,
    seed: V3,
) -> Result<(V3, OdeStats)> {
    let rhs = move |x: f64, y: &[f64], dy: &mut [f64]| {
        let z1 = C64::new(y[0], y[1]);
        let z2 = C64::new(y[2], y[3]);
        let z3 = C64::new(y[4], y[5]);
        let v = 1.0 / (1.0 + (x - delta).exp());
        let f = 2.0 * v - 1.0;
        let d1 = -mu * z1 + lambda * (z2 + z3);
        let d2 = -mu * z2 + lambda * z3;
        let d3 = (z1 + z2) * v + z3 * (c64(f) - lambda - mu);
        dy[0] = d1.re;
        dy[1] = d1.im;
        dy[2] = d2.re;
        dy[3] = d2.im;
        dy[4] = d3.re;
        dy[5] = d3.im;
    };
    let opts = cfg.ode_options(6, false);
    let seed6 = [
        seed[0].re, seed[0].im, seed[1].re, seed[1].im, seed[2].re, seed[2].im,
    ];
    let (y, stats) = integrate_to(rhs, -cfg.l, 0.0, &seed6, &opts)?;
    Ok((unpack_z(&y), stats))
}

// ---------------------------------------------------------------------------
// Public one-shot helpers
// ---------------------------------------------------------------------------

/// Integrate the inflow adjoint solution from `x = L` to the boundary, seeded
/// with the given continued frame. Returns `W̃₁⁺(0)` in stored (conjugated)
/// form together with the integrator statistics.
pub fn shoot_adjoint_inflow(
    params: &LayerParams,
    cfg: &ShotConfig,
    lambda: C64,
    frame: &KatoFrame,
) -> Result<(V3, OdeStats)> {
    cfg.validate()?;
    if params.is_limiting() {
        return Err(Error::Domain(
            "finite-v₊ inflow shot requires v₊ > 0; use the limiting variant".into(),
        ));
    }
    let tail = params.tail_offset_plus(cfg.l, cfg.rel_tol)?;
    shot_inflow_adjoint(params, cfg, lambda, frame.mu, frame.adjoint_vector(), tail)
}

/// Integrate the outflow solution seeded with the minus-end growth mode from
/// `x = −L` to the boundary. Returns `W₁⁻(0)`.
pub fn shoot_unstable_outflow(
    params: &LayerParams,
    cfg: &ShotConfig,
    lambda: C64,
    frame: &KatoFrame,
) -> Result<(V3, OdeStats)> {
    cfg.validate()?;
    if params.is_limiting() {
        let (z, stats) = shot_limiting_forward(params.delta, cfg, lambda, frame.mu, frame.right)?;
        return Ok((z, stats));
    }
    let tail = params.tail_offset_minus(cfg.l, cfg.rel_tol)?;
    shot_outflow_forward(params, cfg, lambda, frame.mu, frame.right, tail)
}

// ---------------------------------------------------------------------------
// Evaluator
// ---------------------------------------------------------------------------

enum Gauge {
    /// Seed rule applied at each `λ` independently (continuous and
    /// conjugate-symmetric; real on the positive real axis). Used for
    /// real-axis scans and single-point evaluation.
    Pointwise,
    /// Kato continuation from a real anchor along a path (analytic in `λ`).
    /// Used for contour evaluation.
    Framed(Box<FramePath>),
    /// Limiting inflow: the exact kernel vector `Ṽ₁(λ)` is itself the seed
    /// (no rescaling). The section is analytic, so no continuation is needed,
    /// and its normalization (second component `−1`) matches the rule used to
    /// seed the finite slow family, which makes finite and limiting
    /// evaluations directly comparable.
    LimSection,
}

/// Evaluates one Evans-function variant at spectral points, holding the
/// shooting data (far-field deviation anchors) and the eigenvector gauge.
pub struct EvansEvaluator {
    params: LayerParams,
    cfg: ShotConfig,
    variant: Variant,
    /// Far-end profile deviation (inflow: `v̂(L) − v₊`; outflow: `1 − v̂(−L)`).
    tail: f64,
    dvhat0: f64,
    gauge: Gauge,
}

fn check_variant(params: &LayerParams, variant: Variant) -> Result<()> {
    if params.side != variant.side() {
        return Err(Error::Domain(format!(
            "variant {variant} requires a {:?}-side parameter set",
            variant.side()
        )));
    }
    match variant {
        Variant::In | Variant::Out if params.is_limiting() => Err(Error::Domain(format!(
            "variant {variant} requires v₊ > 0 (got the limiting sentinel)"
        ))),
        Variant::LimIn | Variant::LimOut if !params.is_limiting() => Err(Error::Domain(format!(
            "variant {variant} requires the limiting sentinel v₊ = 0"
        ))),
        _ => Ok(()),
    }
}

impl EvansEvaluator {
    /// Pointwise-gauged evaluator (no continuation).
    pub fn pointwise(params: &LayerParams, variant: Variant, cfg: &ShotConfig) -> Result<Self> {
        cfg.validate()?;
        check_variant(params, variant)?;
        let tail = Self::tail_for(params, variant, cfg)?;
        Ok(EvansEvaluator {
            params: *params,
            cfg: *cfg,
            variant,
            tail,
            dvhat0: profile_rhs(params, params.v0),
            gauge: Gauge::Pointwise,
        })
    }

    /// Contour-gauged evaluator: the eigenvector family is Kato-continued
    /// along `path` from the real anchor node (frames are computed up front,
    /// sequentially; later evaluations extend the cache as needed, e.g. at
    /// refinement midpoints).
    pub fn contoured(
        params: &LayerParams,
        variant: Variant,
        cfg: &ShotConfig,
        path: &[C64],
        anchor: usize,
        closed: bool,
    ) -> Result<Self> {
        cfg.validate()?;
        check_variant(params, variant)?;
        let tail = Self::tail_for(params, variant, cfg)?;
        let gauge = match variant {
            Variant::In => {
                let family = ModeFamily::plus_slow(params, ModeSelect::PlusSlowUnstable)?;
                Gauge::Framed(Box::new(crate::eigen::kato_continue(
                    family, path, anchor, closed,
                )?))
            }
            Variant::Out | Variant::LimOut => {
                let family = ModeFamily::minus_unstable(params);
                Gauge::Framed(Box::new(crate::eigen::kato_continue(
                    family, path, anchor, closed,
                )?))
            }
            Variant::LimIn => {
                if path.get(anchor).is_none() {
                    return Err(Error::Domain(
                        "anchor index outside the continuation path".into(),
                    ));
                }
                Gauge::LimSection
            }
        };
        Ok(EvansEvaluator {
            params: *params,
            cfg: *cfg,
            variant,
            tail,
            dvhat0: profile_rhs(params, params.v0),
            gauge,
        })
    }

    fn tail_for(params: &LayerParams, variant: Variant, cfg: &ShotConfig) -> Result<f64> {
        match variant {
            Variant::In => params.tail_offset_plus(cfg.l, cfg.rel_tol),
            Variant::Out => params.tail_offset_minus(cfg.l, cfg.rel_tol),
            Variant::LimIn | Variant::LimOut => Ok(0.0),
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn params(&self) -> &LayerParams {
        &self.params
    }

    pub fn config(&self) -> &ShotConfig {
        &self.cfg
    }

    /// Monodromy defect of the underlying closed continuation, if any.
    pub fn monodromy_defect(&self) -> Option<f64> {
        match &self.gauge {
            Gauge::Framed(fp) => fp.monodromy_defect,
            _ => None,
        }
    }

    fn frame(&mut self, lambda: C64) -> Result<KatoFrame> {
        let family = match self.variant {
            Variant::In => ModeFamily::plus_slow(&self.params, ModeSelect::PlusSlowUnstable)?,
            Variant::Out | Variant::LimOut => ModeFamily::minus_unstable(&self.params),
            Variant::LimIn => unreachable!("limiting inflow does not use mode frames"),
        };
        match &mut self.gauge {
            Gauge::Pointwise => seed_frame(&family, lambda),
            Gauge::Framed(fp) => fp.frame_at(lambda),
            Gauge::LimSection => unreachable!("limiting inflow does not use mode frames"),
        }
    }

    /// Evaluate the Evans function at `λ` (requires `Re λ ≥ 0`).
    pub fn eval(&mut self, lambda: C64) -> Result<EvansSample> {
        if lambda.re < -1e-14 {
            return Err(Error::Domain(format!(
                "Evans evaluation requires Re λ ≥ 0, got {lambda}"
            )));
        }
        let cfg = self.cfg;
        let params = self.params;
        match self.variant {
            Variant::In => {
                let frame = self.frame(lambda)?;
                let (z, stats) = shot_inflow_adjoint(
                    &params,
                    &cfg,
                    lambda,
                    frame.mu,
                    frame.adjoint_vector(),
                    self.tail,
                )?;
                Ok(EvansSample {
                    lambda,
                    d: z[0].conj(),
                    variant: self.variant,
                    meta: EvansMeta {
                        mu: frame.mu,
                        steps: stats.steps,
                        rejected: stats.rejected,
                    },
                })
            }
            Variant::Out => {
                let frame = self.frame(lambda)?;
                let (z, stats) =
                    shot_outflow_forward(&params, &cfg, lambda, frame.mu, frame.right, self.tail)?;
                let d = -z[1] - lambda / (lambda - c64(self.dvhat0)) * z[2];
                Ok(EvansSample {
                    lambda,
                    d,
                    variant: self.variant,
                    meta: EvansMeta {
                        mu: frame.mu,
                        steps: stats.steps,
                        rejected: stats.rejected,
                    },
                })
            }
            Variant::LimIn => {
                let seed = limiting_adjoint_direction(lambda);
                let (z, stats) = shot_limiting_adjoint(params.delta, &cfg, lambda, seed)?;
                Ok(EvansSample {
                    lambda,
                    d: z[0].conj(),
                    variant: self.variant,
                    meta: EvansMeta {
                        mu: C64::new(0.0, 0.0),
                        steps: stats.steps,
                        rejected: stats.rejected,
                    },
                })
            }
            Variant::LimOut => {
                let frame = self.frame(lambda)?;
                let (z, stats) =
                    shot_limiting_forward(params.delta, &cfg, lambda, frame.mu, frame.right)?;
                let d = -z[1] - lambda / (lambda - c64(self.dvhat0)) * z[2];
                Ok(EvansSample {
                    lambda,
                    d,
                    variant: self.variant,
                    meta: EvansMeta {
                        mu: frame.mu,
                        steps: stats.steps,
                        rejected: stats.rejected,
                    },
                })
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Free evaluation functions (pointwise gauge)
// ---------------------------------------------------------------------------

/// Evans function of the finite-`v₊` inflow layer at one `λ` (pointwise
/// gauge, default shot configuration unless overridden).
pub fn evans_inflow(params: &LayerParams, lambda: C64) -> Result<EvansSample> {
    EvansEvaluator::pointwise(params, Variant::In, &ShotConfig::default())?.eval(lambda)
}

/// Evans function of the finite-`v₊` outflow layer at one `λ`.
pub fn evans_outflow(params: &LayerParams, lambda: C64) -> Result<EvansSample> {
    EvansEvaluator::pointwise(params, Variant::Out, &ShotConfig::default())?.eval(lambda)
}

/// Evans function of the strong-layer limiting system on the side recorded in
/// `params` (the finite `v₊` in `params`, if any, is replaced by the limiting
/// sentinel).
pub fn evans_limit(params: &LayerParams, lambda: C64) -> Result<EvansSample> {
    let lp = if params.is_limiting() {
        *params
    } else {
        LayerParams::new(params.gamma, 0.0, params.v0, params.side)?
    };
    let variant = match lp.side {
        Side::Inflow => Variant::LimIn,
        Side::Outflow => Variant::LimOut,
    };
    EvansEvaluator::pointwise(&lp, variant, &ShotConfig::default())?.eval(lambda)
}

// ---------------------------------------------------------------------------
// Shock-limit correction
// ---------------------------------------------------------------------------

/// Analytic correction factor `c(λ) = exp(−(μ⁺ + μ⁻)·x₀)` recentring the
/// Evans normalization at the layer midpoint `x₀` (typically `δ`): `μ⁻` is
/// the minus-end growth mode and `μ⁺` the slow plus-end decay mode (zero in
/// the strong-layer limit). Nonvanishing and analytic, so `c·D` has the same
/// winding as `D`.
pub fn shock_correction(params: &LayerParams, lambda: C64, x0: f64) -> Result<C64> {
    let mu_minus = ModeFamily::minus_unstable(params)
        .raw_mode(lambda, None)?
        .mu;
    let mu_plus = if params.is_limiting() {
        C64::new(0.0, 0.0)
    } else {
        let family = ModeFamily::plus_slow(params, ModeSelect::PlusSlowStable)?;
        let mu = family.raw_mode(lambda, None)?.mu;
        if lambda.norm() > 0.0 && mu.re > 0.0 {
            return Err(Error::Splitting(format!(
                "slow plus-end decay mode has Re μ = {} > 0 at λ = {lambda}",
                mu.re
            )));
        }
        mu
    };
    Ok((-(mu_plus + mu_minus) * c64(x0)).exp())
}

// ---------------------------------------------------------------------------
// Boundary-layer matching diagnostic
// ---------------------------------------------------------------------------

/// Distance between the finite-`v₊` adjoint solution and the limiting kernel
/// vector at the points `x = δ + L` for each `L` in `l_list`: the adjoint
/// shot is integrated down from beyond the largest requested station and
/// `W̃₁⁺(δ+L)`, projectively normalized to second component `−1` (the kernel
/// vector's normalization), is compared with `Ṽ₁(λ)`.
///
/// Meaningful for small `v₊` (≤ 1e−3), where the mismatch decays geometrically
/// in `L` until the two-scale floor set by `v₊` is reached.
pub fn boundary_mismatch(
    params: &LayerParams,
    cfg: &ShotConfig,
    lambda: C64,
    l_list: &[f64],
) -> Result<Vec<f64>> {
    cfg.validate()?;
    if params.is_limiting() || params.v_plus > 1e-3 {
        return Err(Error::Domain(format!(
            "boundary mismatch requires 0 < v₊ ≤ 1e-3, got {}",
            params.v_plus
        )));
    }
    if l_list.is_empty() {
        return Ok(Vec::new());
    }
    if lambda.re < 0.0 {
        return Err(Error::Domain("boundary mismatch requires Re λ ≥ 0".into()));
    }
    let family = ModeFamily::plus_slow(params, ModeSelect::PlusSlowUnstable)?;
    let frame = seed_frame(&family, lambda)?;
    let vt = limiting_adjoint_direction(lambda);

    // Stations sorted descending; integrate one trajectory through all.
    let mut order: Vec<usize> = (0..l_list.len()).collect();
    order.sort_by(|&i, &j| l_list[j].partial_cmp(&l_list[i]).expect("finite lengths"));
    let x_start = params.delta + l_list[order[0]] + 8.0;
    let tail = params.tail_offset_plus(x_start, cfg.rel_tol)?;

    let mu_bar = frame.mu.conj();
    let lam_bar = lambda.conj();
    let (gamma, a, v_plus) = (params.gamma, params.a, params.v_plus);
    let p = *params;
    let rhs = move |_x: f64, y: &[f64], dy: &mut [f64]| {
        let z1 = C64::new(y[0], y[1]);
        let z2 = C64::new(y[2], y[3]);
        let z3 = C64::new(y[4], y[5]);
        let dev = y[6];
        let v = v_plus + dev;
        let f = scalar_f_inline(gamma, a, v);
        let d1 = mu_bar * z1 - z3 * v;
        let d2 = -lam_bar * z1 + mu_bar * z2 - z3 * v;
        let d3 = -lam_bar * z1 - lam_bar * z2 + z3 * (mu_bar + lam_bar - f);
        dy[0] = d1.re;
        dy[1] = d1.im;
        dy[2] = d2.re;
        dy[3] = d2.im;
        dy[4] = d3.re;
        dy[5] = d3.im;
        dy[6] = p.rhs_centered_plus(dev);
    };

    let opts = cfg.ode_options(7, true);
    let mut state = pack7(&frame.adjoint_vector(), tail);
    let mut x = x_start;
    let mut out = vec![0.0; l_list.len()];
    for &idx in &order {
        let station = params.delta + l_list[idx];
        if station < x {
            let (y, _) = integrate_to(&rhs, x, station, &state, &opts)?;
            state.copy_from_slice(&y);
            x = station;
        }
        let z = unpack_z(&state);
        if z[1].norm() < 1e-12 * z.norm() {
            return Err(Error::Degenerate(format!(
                "adjoint solution second component vanished at x = {station}"
            )));
        }
        let yhat = z / (-z[1]);
        out[idx] = (yhat - vt).norm();
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Sample export
// ---------------------------------------------------------------------------

/// Write samples as CSV (`re_lambda,im_lambda,re_D,im_D,variant`).
pub fn write_samples_csv<W: Write>(samples: &[EvansSample], mut w: W) -> Result<()> {
    writeln!(w, "re_lambda,im_lambda,re_D,im_D,variant")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{},{}",
            s.lambda.re, s.lambda.im, s.d.re, s.d.im, s.variant
        )?;
    }
    Ok(())
}

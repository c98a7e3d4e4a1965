//! Real-axis diagnostics connecting Evans evaluations to parity arguments:
//! axis scans with transversality checks at the origin, the stability index
//! `sgn[D(0)·D(R)]`, the critical-amplitude fixed point `v*`, and sup-norm
//! comparison of finite-layer Evans functions against their strong-layer
//! limits on a shared contour.
//!
//! All Evans functions here are real on the positive real axis (conjugate
//! symmetry plus real seeding), so every operation first verifies that
//! imaginary parts are at rounding level and then works with real values.

use crate::contour::Contour;
use crate::eigen::C64;
use crate::evans::{EvansEvaluator, ShotConfig, Variant};
use crate::profile::LayerParams;
use crate::{Error, Result};

/// Offset of the short stencil used for the one-sided slope at the origin.
const SLOPE_EPS: f64 = 1e-6;
/// Allowed relative imaginary contamination of real-axis values.
const REALITY_TOL: f64 = 1e-8;

/// Samples of an Evans function along the unstable real axis `[0, R]`.
#[derive(Debug, Clone)]
pub struct RealAxisScan {
    /// Sample abscissas, ascending, starting at `0`.
    pub lambdas: Vec<f64>,
    /// Real Evans values at `lambdas` (imaginary parts verified negligible).
    pub values: Vec<f64>,
    /// Whether the variant has a structural root at `λ = 0`.
    pub zero_at_origin: bool,
    /// One-sided finite-difference `D′(0)` when `zero_at_origin`; the scan
    /// verifies the crossing is transversal (linear within 20% over the
    /// stencil), so this is nonzero when present.
    pub transversal_slope: Option<f64>,
    /// Sign changes between consecutive samples on `(0, R]`.
    pub sign_changes: usize,
}

impl RealAxisScan {
    /// `true` when the scan is consistent with "no unstable real root":
    /// no sign change away from the origin.
    pub fn no_interior_root(&self) -> bool {
        self.sign_changes == 0
    }

    /// Write the scan as CSV with header `lambda,D`.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "lambda,D")?;
        for (l, d) in self.lambdas.iter().zip(&self.values) {
            writeln!(w, "{l:.17e},{d:.17e}")?;
        }
        Ok(())
    }
}

/// Evaluate `f` on the real axis and verify the value is real to
/// `REALITY_TOL` relative to `scale` (or to itself if `scale` is zero).
fn real_eval<F>(f: &mut F, lambda: f64, scale: f64) -> Result<f64>
where
    F: FnMut(C64) -> Result<C64>,
{
    let d = f(C64::new(lambda, 0.0))?;
    let against = if scale > 0.0 { scale } else { d.norm() };
    if d.im.abs() > REALITY_TOL * against.max(1e-300) {
        return Err(Error::Degenerate(format!(
            "Evans value at λ = {lambda} is not real: Im = {:e} against scale {against:e}",
            d.im
        )));
    }
    Ok(d.re)
}

/// One-sided slope at the origin from the stencil `{ε, 2ε, 3ε}` (third-order
/// formula with the exact origin value 0 substituted), together with a
/// transversality check: the three samples must look linear within 20%.
fn origin_slope(d1: f64, d2: f64, d3: f64) -> Result<f64> {
    if d1 == 0.0 {
        return Err(Error::Degenerate(
            "Evans value vanished on the slope stencil — origin root not transversal".into(),
        ));
    }
    for (j, dj) in [(2.0, d2), (3.0, d3)] {
        let ratio = dj / (j * d1);
        if (ratio - 1.0).abs() > 0.2 {
            return Err(Error::Degenerate(format!(
                "origin crossing is not linear: D({j}ε)/({j}·D(ε)) = {ratio:.3}"
            )));
        }
    }
    Ok((18.0 * d1 - 9.0 * d2 + 2.0 * d3) / (6.0 * SLOPE_EPS))
}

/// Sample the Evans map on `[0, R]`: the origin, the slope stencil
/// `{ε₀, 2ε₀, 3ε₀}` with `ε₀ = 1e−6`, and `n` equispaced points on
/// `[ε₀, R]`. Verifies realness everywhere, transversality of the origin
/// root for variants that have one, and counts sign changes away from the
/// origin.
pub fn real_axis_scan<F>(mut eval: F, variant: Variant, r: f64, n: usize) -> Result<RealAxisScan>
where
    F: FnMut(C64) -> Result<C64>,
{
    if !(r > 10.0 * SLOPE_EPS) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "scan endpoint must be positive and clear the slope stencil, got {r}"
        )));
    }
    if n < 10 {
        return Err(Error::Domain(format!("scan needs at least 10 points, got {n}")));
    }
    let mut grid = vec![0.0, SLOPE_EPS, 2.0 * SLOPE_EPS, 3.0 * SLOPE_EPS];
    for k in 0..n {
        grid.push(SLOPE_EPS + k as f64 * (r - SLOPE_EPS) / (n - 1) as f64);
    }
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();

    // First pass fixes the scale, second pass enforces realness against it.
    let raw: Vec<C64> = grid
        .iter()
        .map(|&l| eval(C64::new(l, 0.0)))
        .collect::<Result<_>>()?;
    let scale = raw.iter().map(|d| d.norm()).fold(0.0, f64::max);
    if !(scale > 0.0) {
        return Err(Error::NearZero(
            "Evans function vanished identically along the real axis".into(),
        ));
    }
    let max_im = raw.iter().map(|d| d.im.abs()).fold(0.0, f64::max);
    if max_im > REALITY_TOL * scale {
        return Err(Error::Degenerate(format!(
            "Evans values are not real on the real axis: max |Im D| = {max_im:e} at scale {scale:e}"
        )));
    }
    let values: Vec<f64> = raw.iter().map(|d| d.re).collect();

    let zero_at_origin = variant.zero_at_origin();
    let transversal_slope = if zero_at_origin {
        // Grid layout guarantees indices 1..=3 are the stencil.
        Some(origin_slope(values[1], values[2], values[3])?)
    } else {
        None
    };

    let mut sign_changes = 0;
    for w in values[1..].windows(2) {
        if w[0] * w[1] < 0.0 {
            sign_changes += 1;
        }
    }

    Ok(RealAxisScan {
        lambdas: grid,
        values,
        zero_at_origin,
        transversal_slope,
        sign_changes,
    })
}

/// Parity of the number of unstable real roots: the sign of `D(0)·D(R)`,
/// with the origin value replaced by the transversal slope `D′(0)` for
/// variants whose Evans function vanishes structurally at the origin. `+1`
/// means an even number (zero, for a stable layer) of sign changes on the
/// unstable real axis.
///
/// Errors `Degenerate` when the origin datum is below `1e−10·|D(R)|`, where
/// a sign would be numerically meaningless.
pub fn stability_index<F>(mut eval: F, variant: Variant, r: f64) -> Result<i32>
where
    F: FnMut(C64) -> Result<C64>,
{
    if !(r > 10.0 * SLOPE_EPS) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "index endpoint must be positive and clear the slope stencil, got {r}"
        )));
    }
    let d_r = real_eval(&mut eval, r, 0.0)?;
    let scale = d_r.abs();
    let origin = if variant.zero_at_origin() {
        let d1 = real_eval(&mut eval, SLOPE_EPS, scale)?;
        let d2 = real_eval(&mut eval, 2.0 * SLOPE_EPS, scale)?;
        let d3 = real_eval(&mut eval, 3.0 * SLOPE_EPS, scale)?;
        origin_slope(d1, d2, d3)?
    } else {
        real_eval(&mut eval, 0.0, scale)?
    };
    if origin.abs() < 1e-10 * scale {
        return Err(Error::Degenerate(format!(
            "origin datum {origin:e} is degenerate against |D(R)| = {scale:e}"
        )));
    }
    Ok(if origin * d_r > 0.0 { 1 } else { -1 })
}

/// Fixed point of `v ↦ e^{−2/(1−v)²}` on `(0, 0.2)`: the critical amplitude
/// below which the weighted-energy stability argument applies. The map is a
/// contraction there, so plain iteration from any starting point converges;
/// the public entry starts at `0.1`.
pub fn vstar() -> f64 {
    vstar_from(0.1)
}

pub(crate) fn vstar_from(start: f64) -> f64 {
    let step = |v: f64| (-2.0 / ((1.0 - v) * (1.0 - v))).exp();
    let mut v = start;
    loop {
        let next = step(v);
        if (next - v).abs() < 1e-10 {
            return next;
        }
        v = next;
    }
}

/// Sup-norm distances between finite-layer Evans functions and their
/// strong-layer limit over a shared contour, gauge-matched by construction.
#[derive(Debug, Clone)]
pub struct LimitComparison {
    /// The compared layer strengths, in input order.
    pub v_plus: Vec<f64>,
    /// `max over contour points |D(λ; v₊) − D⁰(λ)|` per entry of `v_plus`.
    pub distances: Vec<f64>,
    /// `max over contour points |D⁰(λ)|`, for normalizing the distances.
    pub scale: f64,
}

/// Compare the Evans functions of a family of layers against the strong-layer
/// limit (`v₊ = 0`) of the same `(γ, v₀, side)`, sampled on the distinct
/// points of `contour`.
///
/// Every member is evaluated with the identical pointwise seeding rule at
/// each sample (inflow: dual eigenvector with second component `−1`; outflow:
/// right eigenvector with third component `1`). This is the normalization in
/// which the finite seeds converge to the limiting ones as `v₊ → 0`, so the
/// gauges are aligned and the distances decay with the layer strength. An
/// anchored continuation gauge would not work here: its transport rate keeps
/// a dependence on the adiabatic exponent in the strong-layer limit, while
/// the limiting (pressureless) system has none, leaving a spurious
/// `λ`-dependent factor between the family and its limit that does not
/// shrink with `v₊`.
///
/// The contour must be indented when the limiting variant has an origin root
/// (inflow limits do), as usual for contour work.
pub fn limit_comparison(
    base: &LayerParams,
    v_plus_list: &[f64],
    cfg: &ShotConfig,
    contour: &Contour,
) -> Result<LimitComparison> {
    if v_plus_list.is_empty() {
        return Err(Error::Domain("empty layer-strength list".into()));
    }
    let points = contour.distinct_points();
    let limit = LayerParams::new(base.gamma, 0.0, base.v0, base.side)?;
    let reference = evaluate_on(&limit, cfg, points)?;
    let scale = reference.iter().map(|d| d.norm()).fold(0.0, f64::max);

    let mut distances = Vec::with_capacity(v_plus_list.len());
    for &vp in v_plus_list {
        let params = LayerParams::new(base.gamma, vp, base.v0, base.side)?;
        let values = evaluate_on(&params, cfg, points)?;
        let dist = values
            .iter()
            .zip(&reference)
            .map(|(d, d0)| (d - d0).norm())
            .fold(0.0, f64::max);
        distances.push(dist);
    }
    Ok(LimitComparison {
        v_plus: v_plus_list.to_vec(),
        distances,
        scale,
    })
}

fn evaluate_on(params: &LayerParams, cfg: &ShotConfig, points: &[C64]) -> Result<Vec<C64>> {
    let variant = Variant::for_params(params);
    let mut ev = EvansEvaluator::pointwise(params, variant, cfg)?;
    points.iter().map(|&l| ev.eval(l).map(|s| s.d)).collect()
}

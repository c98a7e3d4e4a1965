//! Acceptance gate: one integration test — and one printed `criterion N:
//! PASS` line — per acceptance criterion. Run with `--nocapture` to see the
//! measured numbers behind each line; the test names themselves give the
//! per-criterion pass/fail report in the default harness output.
//!
//! Reference values quoted in the bands are the published convergence tables
//! for the same study protocol (γ = 1.666 column, v₊ = 1e−4, v₀ = 0.6,
//! 60-point semicircle): domain-length errors use the next length as
//! baseline, tolerance errors the next tolerance pair. Our domain-length
//! errors are checked one-sided (≤ 10× the reference) because the shots
//! co-integrate the exact half-line profile deviation and are therefore
//! systematically *more* accurate at equal `L` than a clamped boundary-value
//! profile can be; the tolerance study is integrator-comparable and lands
//! within a small factor of the reference on both sides.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use evansbl::contour::{semicircle, winding_number, Contour};
use evansbl::eigen::{
    asymptotic_matrix, coeff_matrix, kato_continue, limiting_plus_eigenvalues, C64, MatrixEnd,
    ModeFamily, ModeSelect,
};
use evansbl::evans::{
    shock_correction, shoot_unstable_outflow, EvansEvaluator, ShotConfig, Variant,
};
use evansbl::harness::{
    convergence_study, run_sweep, ConvergenceConfig, ConvergenceStudy, SweepConfig, SweepStatus,
};
use evansbl::profile::{profile_rhs, solve_profile, LayerParams, Side};
use evansbl::stability::{limit_comparison, real_axis_scan, vstar};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MONATOMIC: f64 = 5.0 / 3.0;

fn c64(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn fmt_list(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.2e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Pointwise evaluator closure for real-axis work.
fn pointwise(params: &LayerParams) -> impl FnMut(C64) -> evansbl::Result<C64> {
    let variant = Variant::for_params(params);
    let mut ev = EvansEvaluator::pointwise(params, variant, &ShotConfig::default())
        .expect("pointwise evaluator");
    move |l| ev.eval(l).map(|s| s.d)
}

// ---------------------------------------------------------------------------
// Criteria 1–2: winding sweeps
// ---------------------------------------------------------------------------

fn assert_all_stable(sweep: &evansbl::harness::Sweep, expected: usize) -> f64 {
    assert_eq!(sweep.records.len(), expected, "grid size");
    let mut max_step = 0.0_f64;
    for r in &sweep.records {
        assert_eq!(
            r.status,
            SweepStatus::Ok,
            "at gamma={} v0={} v_plus={}",
            r.gamma,
            r.v0,
            r.v_plus
        );
        assert_eq!(
            r.winding,
            Some(0),
            "winding at gamma={} v0={} v_plus={}",
            r.gamma,
            r.v0,
            r.v_plus
        );
        assert_eq!(
            r.stability_index,
            Some(1),
            "parity at gamma={} v0={} v_plus={}",
            r.gamma,
            r.v0,
            r.v_plus
        );
        let step = r.max_arg_step.expect("arg step present when ok");
        assert!(step < FRAC_PI_2, "unresolved winding step {step}");
        max_step = max_step.max(step);
    }
    max_step
}

#[test]
fn criterion_1_inflow_winding_sweep_all_zero() {
    // Inflow policy: no origin root, hence no indent.
    let cfg = SweepConfig::new(
        Side::Inflow,
        vec![1.2, MONATOMIC, 3.0],
        vec![0.1, 0.2, 0.4, 0.7],
        vec![1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
    );
    let sweep = run_sweep(&cfg).expect("inflow sweep");
    let max_step = assert_all_stable(&sweep, 60);
    println!(
        "criterion 1: PASS — 60/60 inflow contours (radius 10, 60 points, no indent) \
         have winding 0 and parity +1; max arg step {max_step:.3} rad"
    );
}

#[test]
fn criterion_2_outflow_winding_sweep_and_origin_root() {
    let cfg = SweepConfig::new(
        Side::Outflow,
        vec![1.2, MONATOMIC, 3.0],
        vec![0.2, 0.4, 0.6, 0.8],
        vec![1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
    );
    let sweep = run_sweep(&cfg).expect("outflow sweep");
    let max_step = assert_all_stable(&sweep, 60);

    // Non-indented real-axis scan: exactly one root on [0, 15], at the
    // origin, crossed transversally.
    let p = LayerParams::new(MONATOMIC, 1e-3, 0.3, Side::Outflow).unwrap();
    let scan = real_axis_scan(pointwise(&p), Variant::Out, 15.0, 50).expect("real-axis scan");
    assert!(scan.zero_at_origin, "outflow must have the origin root");
    let slope = scan.transversal_slope.expect("transversal slope");
    assert!(slope != 0.0);
    assert_eq!(scan.sign_changes, 0, "no root away from the origin");
    println!(
        "criterion 2: PASS — 60/60 outflow contours (indent 1e-4) have winding 0 and \
         parity +1 (max arg step {max_step:.3} rad); non-indented scan shows exactly one \
         transversal origin root (slope {slope:.3e}), no interior root"
    );
}

// ---------------------------------------------------------------------------
// Criterion 3: strong-layer limit convergence
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_strong_layer_limit_convergence() {
    let shot = ShotConfig::default();
    // Limiting inflow has an origin root: indent the shared contour.
    let contour = semicircle(10.0, 60, 1e-4).unwrap();
    let base = LayerParams::new(MONATOMIC, 1e-2, 0.2, Side::Inflow).unwrap();
    let v_plus = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let cmp = limit_comparison(&base, &v_plus, &shot, &contour).expect("inflow comparison");
    for w in cmp.distances.windows(2) {
        assert!(
            w[1] < w[0],
            "inflow sup-distances must strictly decrease: {}",
            fmt_list(&cmp.distances)
        );
    }

    let base_out = LayerParams::new(MONATOMIC, 1e-2, 0.4, Side::Outflow).unwrap();
    let cmp_out = limit_comparison(&base_out, &[1e-2], &shot, &contour).expect("outflow comparison");
    let rel = cmp_out.distances[0] / cmp_out.scale;
    assert!(
        rel < 1e-2,
        "outflow distance at v_plus=1e-2 must sit below 1e-2 of the curve scale, got {rel:.3e}"
    );
    println!(
        "criterion 3: PASS — inflow sup-distances to the strong-layer limit strictly \
         decrease over v_plus 1e-2..1e-6: {}; outflow distance at v_plus=1e-2 is {rel:.2e} \
         of curve scale",
        fmt_list(&cmp.distances)
    );
}

// ---------------------------------------------------------------------------
// Criteria 4–5: convergence tables
// ---------------------------------------------------------------------------

/// Published successive-L relative errors (γ = 1.666 column; L = 8..18,
/// next length as baseline).
const TABLE1_L: [f64; 6] = [8.0, 10.0, 12.0, 14.0, 16.0, 18.0];
const TABLE1_INFLOW: [f64; 6] = [9.2e-1, 9.2e-2, 3.6e-3, 1.3e-4, 4.7e-6, 8.0e-6];
const TABLE1_OUTFLOW: [f64; 6] = [5.4e-3, 9.1e-4, 1.5e-4, 2.0e-5, 2.6e-6, 8.7e-6];
/// Published tolerance-study errors (γ = 1.666 column; rows are the
/// (abs, rel) pairs (1e−3,1e−5) … (1e−6,1e−8), next run as baseline).
const TABLE2_INFLOW: [f64; 4] = [4.0e-4, 3.4e-5, 3.9e-6, 1.1e-6];
const TABLE2_OUTFLOW: [f64; 4] = [9.1e-4, 5.3e-5, 6.7e-5, 2.9e-6];

/// Error floor: below this, successive-level differences measure integrator
/// noise rather than truncation, so monotone decay is no longer required
/// (the reference tables show the same floor behavior at their last rows).
const FLOOR: f64 = 1e-6;

fn studies() -> &'static (ConvergenceStudy, ConvergenceStudy) {
    static STUDIES: OnceLock<(ConvergenceStudy, ConvergenceStudy)> = OnceLock::new();
    STUDIES.get_or_init(|| {
        let run = |side| {
            convergence_study(&ConvergenceConfig::new(1.666, side)).expect("convergence study")
        };
        (run(Side::Inflow), run(Side::Outflow))
    })
}

fn check_table1(study: &ConvergenceStudy, reference: &[f64; 6]) {
    assert_eq!(study.l_levels, TABLE1_L.to_vec(), "study grid");
    for ((l, ours), bound) in study.l_levels.iter().zip(&study.l_errors).zip(reference) {
        assert!(
            *ours <= 10.0 * bound,
            "{} L={l}: error {ours:.3e} exceeds 10x the reference {bound:.1e}",
            study.side
        );
    }
    for w in study.l_errors.windows(2) {
        assert!(
            w[1] < w[0] || w[0] < FLOOR,
            "{} domain-length errors must decay until the floor: {}",
            study.side,
            fmt_list(&study.l_errors)
        );
    }
}

#[test]
fn criterion_4_domain_length_convergence_table() {
    let (inflow, outflow) = studies();
    check_table1(inflow, &TABLE1_INFLOW);
    check_table1(outflow, &TABLE1_OUTFLOW);
    // The named anchor rows of the criterion.
    assert!(inflow.l_errors[2] <= 10.0 * 3.6e-3, "inflow L=12 anchor");
    assert!(inflow.l_errors[3] <= 10.0 * 1.3e-4, "inflow L=14 anchor");
    assert!(outflow.l_errors[1] <= 10.0 * 9.1e-4, "outflow L=10 anchor");
    println!(
        "criterion 4: PASS — successive-L max relative errors decay through the reference \
         magnitudes (one-sided 10x band; exact-profile co-integration keeps ours below the \
         reference at equal L):\n  inflow  L=8..18: {} (reference {})\n  outflow L=8..18: {} \
         (reference {})",
        fmt_list(&inflow.l_errors),
        fmt_list(&TABLE1_INFLOW),
        fmt_list(&outflow.l_errors),
        fmt_list(&TABLE1_OUTFLOW),
    );
}

fn check_table2(study: &ConvergenceStudy, reference: &[f64; 4]) {
    let expected: Vec<(f64, f64)> = vec![(1e-3, 1e-5), (1e-4, 1e-6), (1e-5, 1e-7), (1e-6, 1e-8)];
    assert_eq!(study.tol_levels, expected, "tolerance grid");
    // Loosest row: two-sided magnitude agreement with the reference scale.
    let first = study.tol_errors[0];
    assert!(
        first <= 10.0 * reference[0] && first >= reference[0] / 30.0,
        "{} loosest-tolerance error {first:.3e} vs reference {:.1e}",
        study.side,
        reference[0]
    );
    for (ours, bound) in study.tol_errors.iter().zip(reference) {
        assert!(
            *ours <= 10.0 * bound,
            "{} tolerance row: {ours:.3e} exceeds 10x reference {bound:.1e}",
            study.side
        );
    }
    for w in study.tol_errors.windows(2) {
        assert!(
            w[1] < w[0] || w[0] < FLOOR,
            "{} tolerance errors must decrease: {}",
            study.side,
            fmt_list(&study.tol_errors)
        );
    }
    // Tightest row: driven down to the ~1e−6–1e−7 scale.
    let last = *study.tol_errors.last().unwrap();
    assert!(
        last <= 3e-6,
        "{} tightest-tolerance error {last:.3e} must reach the 1e-6..1e-7 scale",
        study.side
    );
}

#[test]
fn criterion_5_tolerance_convergence_table() {
    let (inflow, outflow) = studies();
    check_table2(inflow, &TABLE2_INFLOW);
    check_table2(outflow, &TABLE2_OUTFLOW);
    println!(
        "criterion 5: PASS — tightening (abs, rel) from (1e-3,1e-5) to (1e-6,1e-8) drives \
         the max relative error down monotonically:\n  inflow:  {} (reference {})\n  \
         outflow: {} (reference {})",
        fmt_list(&inflow.tol_errors),
        fmt_list(&TABLE2_INFLOW),
        fmt_list(&outflow.tol_errors),
        fmt_list(&TABLE2_OUTFLOW),
    );
}

// ---------------------------------------------------------------------------
// Criterion 6: analytic cross-checks
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_analytic_cross_checks() {
    // (a) Critical amplitude fixed point.
    let v = vstar();
    assert!((v - 0.0899).abs() <= 5e-4, "v* = {v}");

    // (b) High-frequency bounds stay inside the radius-10 contour at γ = 3
    // (the bounds grow with γ, so this covers the swept range).
    let hf_in = evansbl::contour::hf_bound(3.0, Side::Inflow);
    let hf_out = evansbl::contour::hf_bound(3.0, Side::Outflow);
    assert!(hf_in < 10.0, "inflow bound {hf_in}");
    assert!(hf_out < 10.0, "outflow bound {hf_out}");

    // (c) At λ = 0 the adjoint system annihilates every constant (a, b, 0):
    // checked against the interior matrix at 100 random stations.
    let mut rng = ChaCha8Rng::seed_from_u64(0x6c61796572);
    let mut worst_c = 0.0_f64;
    for side in [Side::Inflow, Side::Outflow] {
        let p = LayerParams::new(MONATOMIC, 0.1, 0.6, side).unwrap();
        let prof = solve_profile(&p, 18.0, 1e-10, 1e-10).unwrap();
        let (x0, x1) = prof.domain();
        for _ in 0..50 {
            let x = rng.gen_range(x0..=x1);
            let w = evansbl::eigen::V3::new(
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c64(0.0),
            );
            let m = coeff_matrix(x, c64(0.0), &prof).adjoint().entries;
            let r = (m * w).norm();
            assert!(r <= 1e-12, "adjoint kernel residual {r:.2e} at x = {x}");
            worst_c = worst_c.max(r);
        }
    }

    // (d) Strong-layer plus-end matrix has eigenvalues {0, 0, −1−λ}:
    // verified through the elementary symmetric functions of the matrix,
    // which determine the spectrum exactly, at 20 random λ.
    let lim = LayerParams::new(MONATOMIC, 0.0, 0.2, Side::Inflow).unwrap();
    let mut worst_d = 0.0_f64;
    for _ in 0..20 {
        let r = rng.gen_range(0.0..10.0);
        let th = rng.gen_range(-FRAC_PI_2..FRAC_PI_2);
        let lambda = C64::new(r * th.cos(), r * th.sin());
        let m = asymptotic_matrix(&lim, MatrixEnd::Plus, lambda).entries;
        let [e1, e2, e3] = limiting_plus_eigenvalues(lambda);
        let tr = m[(0, 0)] + m[(1, 1)] + m[(2, 2)];
        let minor = |i: usize, j: usize| m[(i, i)] * m[(j, j)] - m[(i, j)] * m[(j, i)];
        let sym2 = minor(0, 1) + minor(0, 2) + minor(1, 2);
        let det = m.determinant();
        let res = (tr - (e1 + e2 + e3)).norm() + sym2.norm() + det.norm();
        assert!(res <= 1e-10, "eigenvalue residual {res:.2e} at lambda = {lambda}");
        worst_d = worst_d.max(res);
    }

    // (e) At λ = 0 the outflow shot lands on the profile-derivative
    // direction (0, 0, v̂′(0)) to 1e−6 angular error.
    let p = LayerParams::new(MONATOMIC, 0.1, 0.6, Side::Outflow).unwrap();
    let frame = ModeFamily::minus_unstable(&p).pointwise_frame(c64(0.0)).unwrap();
    let (w, _) = shoot_unstable_outflow(&p, &ShotConfig::default(), c64(0.0), &frame).unwrap();
    let t = evansbl::eigen::V3::new(c64(0.0), c64(0.0), c64(profile_rhs(&p, p.v0)));
    let coef = t.dotc(&w) / t.dotc(&t);
    let sin_angle = (w - t * coef).norm() / w.norm();
    assert!(sin_angle <= 1e-6, "angular deviation {sin_angle:.2e}");

    println!(
        "criterion 6: PASS — (a) v* = {v:.4}; (b) hf bounds at gamma=3: inflow {hf_in:.3}, \
         outflow {hf_out:.3} < 10; (c) adjoint constant-kernel residual <= {worst_c:.1e} at \
         100 random stations; (d) strong-layer end spectrum {{0, 0, -1-lambda}} residual <= \
         {worst_d:.1e} at 20 random lambda; (e) outflow shot at lambda=0 parallel to \
         (0,0,vhat'(0)) within {sin_angle:.1e}"
    );
}

// ---------------------------------------------------------------------------
// Criterion 7: property suites
// ---------------------------------------------------------------------------

#[test]
fn criterion_7_property_suites() {
    let p = LayerParams::new(MONATOMIC, 0.01, 0.4, Side::Inflow).unwrap();

    // Kato invariants: pairing held constant along the counting contour …
    let contour = semicircle(10.0, 60, 0.0).unwrap();
    let family = ModeFamily::plus_slow(&p, ModeSelect::PlusSlowUnstable).unwrap();
    let path = kato_continue(family, contour.distinct_points(), 0, true).unwrap();
    let drift = path.max_drift;
    assert!(drift <= 1e-6, "pairing drift {drift:.2e}");
    let worst_pairing = path
        .frames()
        .iter()
        .map(|f| (f.pairing() - path.p0).norm())
        .fold(0.0, f64::max);
    assert!(worst_pairing <= 1e-6, "pairing deviation {worst_pairing:.2e}");
    // … and monodromy identity around a regular circle.
    let circle = Contour::circle(c64(4.0), 2.0, 32).unwrap();
    let loop_path = kato_continue(family, circle.distinct_points(), 0, true).unwrap();
    let defect = loop_path.monodromy_defect.expect("closed loop");
    assert!(defect <= 1e-6, "monodromy defect {defect:.2e}");

    // Reality on the real axis and conjugate symmetry off it.
    let mut ev = EvansEvaluator::pointwise(&p, Variant::In, &ShotConfig::default()).unwrap();
    let mut worst_im = 0.0_f64;
    for l in [0.0, 0.5, 3.0, 10.0, 15.0] {
        let d = ev.eval(c64(l)).unwrap().d;
        let rel = d.im.abs() / d.norm();
        assert!(rel <= 1e-8, "Im D = {:.2e} at lambda = {l}", d.im);
        worst_im = worst_im.max(rel);
    }
    let mut worst_conj = 0.0_f64;
    for (re, im) in [(0.3, 1.7), (2.0, -4.0), (7.5, 5.0)] {
        let lambda = C64::new(re, im);
        let d = ev.eval(lambda).unwrap().d;
        let d_bar = ev.eval(lambda.conj()).unwrap().d;
        let rel = (d_bar - d.conj()).norm() / d.norm();
        assert!(rel <= 1e-10, "conjugate-symmetry defect {rel:.2e} at {lambda}");
        worst_conj = worst_conj.max(rel);
    }

    // Winding invariance under nonvanishing analytic gauge multipliers.
    let shot = ShotConfig::default();
    let mut base =
        EvansEvaluator::contoured(&p, Variant::In, &shot, contour.distinct_points(), 0, true)
            .unwrap();
    let plain = winding_number(|l| base.eval(l).map(|s| s.d), &contour).unwrap();
    assert_eq!(plain.winding, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6761756765);
    for trial in 0..3 {
        let coef: Vec<C64> = (0..3)
            .map(|_| C64::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)))
            .collect();
        let g = |l: C64| coef[0] + coef[1] * (l / c64(10.0)) + coef[2] * (l / c64(10.0)).powi(2);
        let gauged = winding_number(|l| base.eval(l).map(|s| s.d * g(l).exp()), &contour).unwrap();
        assert_eq!(
            gauged.winding, plain.winding,
            "gauge trial {trial} changed the winding"
        );
    }

    // γ = 1 profile against the closed-form orbit: with
    // E(x) = E₀ e^{(1−v₊)x}, E₀ = (1−v₀)/(v₀−v₊), the profile is
    // v̂ = (1 + v₊E)/(1 + E).
    let p1 = LayerParams::new(1.0, 0.1, 0.4, Side::Inflow).unwrap();
    let prof = solve_profile(&p1, 18.0, 1e-12, 1e-12).unwrap();
    let e0: f64 = (1.0 - 0.4) / (0.4 - 0.1);
    let mut worst_prof = 0.0_f64;
    for i in 0..=360 {
        let x = 18.0 * i as f64 / 360.0;
        let e = e0 * ((1.0 - 0.1) * x).exp();
        let oracle = (1.0 + 0.1 * e) / (1.0 + e);
        worst_prof = worst_prof.max((prof.vhat_at(x) - oracle).abs());
    }
    assert!(worst_prof <= 1e-8, "closed-form deviation {worst_prof:.2e}");

    // Tail decay rate at least 3/4 for v₊ = 0.01 (log-slope fit past the
    // transition).
    let pd = LayerParams::new(MONATOMIC, 0.01, 0.5, Side::Inflow).unwrap();
    let prof = solve_profile(&pd, 18.0, 1e-10, 1e-10).unwrap();
    let (mut sx, mut sy, mut sxx, mut sxy, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0_f64);
    let mut x = pd.delta + 2.0;
    while x <= pd.delta + 8.0 {
        let y = (prof.vhat_at(x) - pd.v_plus).ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        n += 1.0;
        x += 0.2;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    assert!(slope <= -0.75, "decay slope {slope:.3} shallower than 3/4");

    println!(
        "criterion 7: PASS — Kato pairing constant to {worst_pairing:.1e} along the contour, \
         monodromy defect {defect:.1e}; |Im D| <= {worst_im:.1e}·|D| on the real axis; \
         conjugate-symmetry defect <= {worst_conj:.1e}; winding invariant under 3 random \
         analytic gauges; gamma=1 profile matches the closed form to {worst_prof:.1e}; tail \
         decay slope {slope:.3} <= -3/4"
    );
}

// ---------------------------------------------------------------------------
// Criterion 8: shock-limit qualitative check
// ---------------------------------------------------------------------------

#[test]
fn criterion_8_shock_limit_dimple() {
    let p = LayerParams::new(MONATOMIC, 0.1, 0.99, Side::Inflow).unwrap();
    let shot = ShotConfig::default();
    let contour = semicircle(10.0, 60, 0.0).unwrap();
    let mut ev =
        EvansEvaluator::contoured(&p, Variant::In, &shot, contour.distinct_points(), 0, true)
            .unwrap();
    let x0 = p.delta;
    let report = winding_number(
        |l| Ok(ev.eval(l)?.d * shock_correction(&p, l, x0)?),
        &contour,
    )
    .unwrap();
    assert_eq!(report.winding, 0, "corrected shock-limit contour must not wind");

    // Qualitative dimple: |c·D| dips once, near λ = 0, well below its
    // median level. Count cyclic runs below the geometric midlevel between
    // the dip and the median.
    let mags: Vec<f64> = report.samples.iter().map(|(_, d)| d.norm()).collect();
    let mut sorted = mags.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite magnitudes"));
    let median = sorted[sorted.len() / 2];
    let dip = sorted[0];
    assert!(
        dip < 0.5 * median,
        "no dimple: min |cD| = {dip:.3e} vs median {median:.3e}"
    );
    let threshold = (dip * median).sqrt();
    let below: Vec<bool> = mags.iter().map(|&m| m < threshold).collect();
    let mut runs = 0;
    for k in 0..below.len() {
        let prev = below[(k + below.len() - 1) % below.len()];
        if below[k] && !prev {
            runs += 1;
        }
    }
    assert_eq!(runs, 1, "expected exactly one dip region, found {runs}");
    let k_min = mags
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
        .map(|(k, _)| k)
        .unwrap();
    let lambda_min = report.samples[k_min].0;
    assert!(
        lambda_min.norm() <= 2.0,
        "dip should sit near the origin, found it at lambda = {lambda_min}"
    );
    println!(
        "criterion 8: PASS (qualitative) — corrected strong-displacement contour \
         (v0=0.99, v_plus=0.1) winds 0 with a single dimple near the origin: min |cD| = \
         {dip:.2e} at lambda = {lambda_min:.3}, median level {median:.2e}"
    );
}

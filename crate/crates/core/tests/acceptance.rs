//! Acceptance suite: one test per release criterion, each with its
//! tolerances pinned as constants next to the assertions. The libtest
//! output gives one pass/fail line per criterion; the bodies print the
//! measured slack so a failing run shows how far off it was.

use std::time::Instant;

use gamma_ratio_core::cm_harness::{check_bernstein, check_cm, default_grid, Verdict};
use gamma_ratio_core::combinatorics::{
    f2_as_multinomials, multinomial_beta_identity_slack, multinomial_inequality_slack,
    WeightVector,
};
use gamma_ratio_core::inequality::{inequality_sides, sharpness_ratio, sharpness_search};
use gamma_ratio_core::quadrature::QuadratureSpec;
use gamma_ratio_core::ratio::{
    bernstein_representation, d2log_f, d2log_f_via_laplace, dklog_f, dlog_f, find_minimum, log_f,
    sup_limit,
};
use gamma_ratio_core::sampling::{self, ChaCha8Rng};
use gamma_ratio_core::specfun::{digamma, lgamma, polygamma};
use gamma_ratio_core::{PositiveMatrix, RatioConfig};
use rand_core::RngCore;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const PI_SQUARED_OVER_SIX: f64 = 1.644_934_066_848_226_4;

fn random_shape(rng: &mut ChaCha8Rng, max: usize) -> (usize, usize) {
    (
        1 + (rng.next_u64() % max as u64) as usize,
        1 + (rng.next_u64() % max as u64) as usize,
    )
}

/// Criterion 1: the central inequality holds over a large random sweep.
/// 10⁵ samples with m, n ≤ 5; normalized margin ≥ −1e-12; single-threaded
/// runtime below 30 s.
#[test]
fn criterion_01_inequality_sweep() {
    const SAMPLES: usize = 100_000;
    const MARGIN_FLOOR: f64 = -1e-12;
    const TIME_BUDGET_S: f64 = 30.0;
    let started = Instant::now();
    let mut rng = sampling::sample_rng(0xacce_0001, 0);
    let mut min_normalized = f64::INFINITY;
    for _ in 0..SAMPLES {
        let (m, n) = random_shape(&mut rng, 5);
        let mu = sampling::random_matrix(&mut rng, m, n, 1e-3, 1e3);
        let x = sampling::log_uniform(&mut rng, 1e-3, 1e3);
        let (lhs, rhs) = inequality_sides(&mu, x).unwrap();
        let normalized = (lhs - rhs) / rhs.max(1.0);
        assert!(
            normalized >= MARGIN_FLOOR,
            "violation: {m}x{n}, x = {x}, lhs = {lhs}, rhs = {rhs}"
        );
        min_normalized = min_normalized.min(normalized);
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < TIME_BUDGET_S, "sweep took {elapsed:.1} s");
    println!(
        "[criterion 01] PASS: {SAMPLES} samples, min normalized margin {min_normalized:.3e}, {elapsed:.2} s"
    );
}

/// Criterion 2: m = n = 1 is the equality case — zero margin to 1e-14 and
/// a sharpness ratio of exactly 2 (both sides reduce to the same
/// floating-point expression).
#[test]
fn criterion_02_equality_case() {
    const SAMPLES: usize = 1_000;
    const REL_TOL: f64 = 1e-14;
    let mut rng = sampling::sample_rng(0xacce_0002, 0);
    for _ in 0..SAMPLES {
        let entry = sampling::log_uniform(&mut rng, 1e-2, 1e2);
        let x = entry * sampling::log_uniform(&mut rng, 1e-2, 5e2);
        let mu = PositiveMatrix::new(1, 1, vec![entry]).unwrap();
        let (lhs, rhs) = inequality_sides(&mu, x).unwrap();
        assert!(
            (lhs - rhs).abs() <= REL_TOL * rhs,
            "margin {} at entry {entry}, x {x}",
            lhs - rhs
        );
        let ratio = sharpness_ratio(&mu, x).unwrap();
        assert_eq!(ratio, 2.0, "entry {entry}, x {x}");
    }
    println!("[criterion 02] PASS: {SAMPLES} samples, ratio bit-exactly 2");
}

/// Criterion 3: the constant 2 looks sharp. Multi-start searches over
/// three shapes never push the ratio below 2 (within 1e-12 of rounding) or
/// find it far above, and small-x ratios sit just above 2.
#[test]
fn criterion_03_sharpness_of_the_constant() {
    const STARTS: usize = 10_000;
    const BEST_LO: f64 = 2.0 - 1e-12;
    const BEST_HI: f64 = 2.001;
    const SMALL_X: f64 = 1e-6;
    const SMALL_X_WINDOW: f64 = 1e-4;
    const TIME_BUDGET_S: f64 = 120.0;
    let started = Instant::now();
    for (i, (m, n)) in [(1usize, 2usize), (2, 2), (3, 3)].into_iter().enumerate() {
        let result = sharpness_search(m, n, STARTS, 0xacce_0003 + i as u64).unwrap();
        assert!(
            result.best_ratio >= BEST_LO && result.best_ratio <= BEST_HI,
            "{m}x{n}: best ratio {} at x = {}",
            result.best_ratio,
            result.x_star
        );
        assert!(!result.undercuts_conjectured_floor());
        println!(
            "[criterion 03] {m}x{n}: best ratio {:.15} after {} evaluations",
            result.best_ratio, result.evaluations
        );
    }
    let mut rng = sampling::sample_rng(0xacce_0013, 0);
    for _ in 0..100 {
        let (m, n) = loop {
            let shape = random_shape(&mut rng, 3);
            if shape.0 * shape.1 > 1 {
                break shape;
            }
        };
        let mu = sampling::random_matrix(&mut rng, m, n, 0.2, 5.0);
        let excess = sharpness_ratio(&mu, SMALL_X).unwrap() - 2.0;
        assert!(
            excess > 0.0 && excess < SMALL_X_WINDOW,
            "{m}x{n}: ratio excess {excess}"
        );
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < TIME_BUDGET_S, "searches took {elapsed:.1} s");
    println!("[criterion 03] PASS: ratios in [2, 2.001], small-x excess in (0, 1e-4), {elapsed:.2} s");
}

/// Criterion 4: the Laplace representation of [ln f]″ reconstructs the
/// polygamma evaluation by quadrature for random ρ ≤ 2 configurations.
#[test]
fn criterion_04_laplace_representation() {
    const CONFIGS: usize = 100;
    const ABS_TOL: f64 = 1e-8;
    const REL_TOL: f64 = 1e-6;
    const TIME_BUDGET_S: f64 = 60.0;
    let started = Instant::now();
    let spec = QuadratureSpec {
        rel_tol: 1e-10,
        abs_tol: 1e-9,
        max_segments: 2048,
    };
    let mut rng = sampling::sample_rng(0xacce_0004, 0);
    let mut worst = 0.0_f64;
    for _ in 0..CONFIGS {
        let (m, n) = random_shape(&mut rng, 4);
        let lambda = sampling::random_matrix(&mut rng, m, n, 0.05, 5.0);
        let rho = sampling::uniform(&mut rng, 0.0, 2.0);
        let cfg = RatioConfig::new(lambda, rho).unwrap();
        for t in [0.1, 1.0, 10.0] {
            let direct = d2log_f(&cfg, t).unwrap();
            let check = d2log_f_via_laplace(&cfg, t, &spec).unwrap();
            let err = (check.value - direct).abs();
            assert!(
                err <= ABS_TOL.max(REL_TOL * direct.abs()),
                "t = {t}: laplace {} vs direct {direct}, tail bound {}",
                check.value,
                check.tail_bound
            );
            worst = worst.max(err / ABS_TOL.max(REL_TOL * direct.abs()));
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < TIME_BUDGET_S, "quadrature took {elapsed:.1} s");
    println!(
        "[criterion 04] PASS: {CONFIGS} configs x 3 t-values, worst error at {:.1}% of budget, {elapsed:.2} s",
        100.0 * worst
    );
}

/// Criterion 5: at ρ = 2 the Bernstein representation of [ln f]′ has no
/// drift or killing part (a = b = 0) and the Lévy integral alone matches
/// the direct evaluation.
#[test]
fn criterion_05_bernstein_representation() {
    const CONFIGS: usize = 50;
    const ABS_TOL: f64 = 1e-6;
    let spec = QuadratureSpec {
        rel_tol: 1e-10,
        abs_tol: 1e-8,
        max_segments: 2048,
    };
    let mut rng = sampling::sample_rng(0xacce_0005, 0);
    for i in 0..CONFIGS {
        let (m, n) = random_shape(&mut rng, 4);
        let lambda = sampling::random_matrix(&mut rng, m, n, 0.05, 5.0);
        let cfg = RatioConfig::new(lambda, 2.0).unwrap();
        for t in [0.5, 2.0, 20.0] {
            let direct = dlog_f(&cfg, t).unwrap();
            let check = bernstein_representation(&cfg, t, &spec).unwrap();
            assert!(
                (check.value - direct).abs() <= ABS_TOL,
                "t = {t}: integral {} vs direct {direct}",
                check.value
            );
        }
        if i < 5 {
            // a = 0: the representation vanishes as t → 0 instead of
            // settling at a positive killing constant; b = 0: it stays
            // bounded (by its supremum) instead of growing like b·t.
            let near_zero = bernstein_representation(&cfg, 1e-10, &spec).unwrap();
            assert!(near_zero.value.abs() <= 1e-6, "a != 0? {}", near_zero.value);
            let far = bernstein_representation(&cfg, 1e6, &spec).unwrap();
            let ceiling = sup_limit(&cfg).unwrap();
            assert!(far.value <= ceiling + 1e-3, "b != 0? {} vs {ceiling}", far.value);
        }
    }
    println!("[criterion 05] PASS: {CONFIGS} configs x 3 t-values within {ABS_TOL:.0e}, a = b = 0");
}

/// Criterion 6: the closed-form limits. [ln f]″(0⁺) = (π²/6)(Σα²+Σβ²−ρΣλ²),
/// [ln f]′(0⁺) = −γ(2−ρ)Σλ, and at ρ = 2 the derivative approaches its
/// supremum from below, within 1e-2 by t = 10⁴.
#[test]
fn criterion_06_closed_form_limits() {
    const CONFIGS: usize = 100;
    const SMALL_T: f64 = 1e-7;
    const D2_REL_TOL: f64 = 1e-4;
    const D1_ABS_TOL: f64 = 1e-4;
    const SUP_WINDOW: f64 = 1e-2;
    let mut rng = sampling::sample_rng(0xacce_0006, 0);
    for _ in 0..CONFIGS {
        let (m, n) = random_shape(&mut rng, 5);
        let lambda = sampling::random_matrix(&mut rng, m, n, 0.05, 1.0);
        let rho = sampling::uniform(&mut rng, 0.0, 2.0);
        let cfg = RatioConfig::new(lambda.clone(), rho).unwrap();
        let sq = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>();
        let d2_expected = PI_SQUARED_OVER_SIX
            * (sq(lambda.row_sums()) + sq(lambda.col_sums()) - rho * sq(lambda.entries()));
        let d2_near_zero = d2log_f(&cfg, SMALL_T).unwrap();
        assert!(
            (d2_near_zero - d2_expected).abs() <= D2_REL_TOL * d2_expected.abs(),
            "d2 {d2_near_zero} vs limit {d2_expected}"
        );
        let d1_expected = -EULER_GAMMA * (2.0 - rho) * lambda.total();
        let d1_near_zero = dlog_f(&cfg, SMALL_T).unwrap();
        assert!(
            (d1_near_zero - d1_expected).abs() <= D1_ABS_TOL,
            "d1 {d1_near_zero} vs limit {d1_expected}"
        );
    }
    for _ in 0..CONFIGS {
        let (m, n) = loop {
            let shape = random_shape(&mut rng, 5);
            if shape.0 * shape.1 > 1 {
                break shape;
            }
        };
        let lambda = sampling::random_matrix(&mut rng, m, n, 0.05, 1.0);
        let cfg = RatioConfig::new(lambda, 2.0).unwrap();
        let gap = sup_limit(&cfg).unwrap() - dlog_f(&cfg, 1e4).unwrap();
        assert!(gap > 0.0 && gap < SUP_WINDOW, "sup gap {gap}");
    }
    println!(
        "[criterion 06] PASS: {CONFIGS} configs per limit, d2 rel {D2_REL_TOL:.0e}, d1 abs {D1_ABS_TOL:.0e}, sup gap < {SUP_WINDOW}"
    );
}

/// Criterion 7: the monotonicity structure on the default grid — [ln f]″
/// is CM to order 6 for ρ ≤ 2, [ln f]′ is Bernstein to order 6 at ρ = 2,
/// and at ρ = 1 the Bernstein check fails at order 0 near t → 0 with the
/// slack pinned by the −γ(2−ρ)Σλ limit.
#[test]
fn criterion_07_cm_and_bernstein_grid_checks() {
    const CONFIGS: usize = 50;
    const ORDER: usize = 6;
    const GRID_TOL: f64 = 1e-9;
    let grid = default_grid();
    let mut rng = sampling::sample_rng(0xacce_0007, 0);
    for _ in 0..CONFIGS {
        let (m, n) = random_shape(&mut rng, 4);
        let lambda = sampling::random_matrix(&mut rng, m, n, 0.05, 5.0);
        let rho = sampling::uniform(&mut rng, 0.0, 2.0);
        let cm_cfg = RatioConfig::new(lambda.clone(), rho).unwrap();
        let cm = check_cm(|t, k| dklog_f(&cm_cfg, t, k + 2), ORDER, &grid, GRID_TOL).unwrap();
        assert_eq!(cm.verdict, Verdict::Pass, "rho {rho}: {:?}", cm.first_failure);
        let b_cfg = RatioConfig::new(lambda, 2.0).unwrap();
        let bern =
            check_bernstein(|t, k| dklog_f(&b_cfg, t, k + 1), ORDER, &grid, GRID_TOL).unwrap();
        assert_eq!(bern.verdict, Verdict::Pass, "{:?}", bern.first_failure);
    }
    let ones = PositiveMatrix::new(1, 2, vec![1.0, 1.0]).unwrap();
    let at_one = RatioConfig::new(ones, 1.0).unwrap();
    let fail = check_bernstein(|t, k| dklog_f(&at_one, t, k + 1), ORDER, &grid, GRID_TOL).unwrap();
    assert_eq!(fail.verdict, Verdict::Fail);
    let failure = fail.first_failure.unwrap();
    assert_eq!(failure.order, 0);
    assert!(failure.t <= 1e-2, "failure at t = {}", failure.t);
    let expected_slack = -2.0 * EULER_GAMMA;
    assert!(
        (fail.min_slack_per_order[0] - expected_slack).abs() <= 1e-2,
        "order-0 slack {} vs −2γ = {expected_slack}",
        fail.min_slack_per_order[0]
    );
    println!(
        "[criterion 07] PASS: {CONFIGS} configs to order {ORDER}; rho = 1 fails at order 0 with slack {:.4} ~ -2y",
        fail.min_slack_per_order[0]
    );
}

/// Criterion 8: for ρ < 2, f has a unique interior minimum — the first-order
/// condition holds to 1e-10, the minimum does not exceed f(0⁺) = 1, and f
/// increases beyond it.
#[test]
fn criterion_08_interior_minimum() {
    const CONFIGS: usize = 100;
    const STATIONARY_TOL: f64 = 1e-10;
    let mut rng = sampling::sample_rng(0xacce_0008, 0);
    for _ in 0..CONFIGS {
        let (m, n) = random_shape(&mut rng, 4);
        let lambda = sampling::random_matrix(&mut rng, m, n, 0.05, 5.0);
        let rho = sampling::uniform(&mut rng, 0.0, 1.9);
        let cfg = RatioConfig::new(lambda, rho).unwrap();
        let minimum = find_minimum(&cfg).unwrap();
        let residual = dlog_f(&cfg, minimum.t_star).unwrap();
        assert!(
            residual.abs() <= STATIONARY_TOL,
            "rho {rho}: residual {residual} at t* = {}",
            minimum.t_star
        );
        assert!(minimum.f_min <= 1.0, "f_min {} > 1", minimum.f_min);
        // Monotone growth past the minimum, in log space to dodge overflow.
        let mut previous = log_f(&cfg, minimum.t_star).unwrap();
        for factor in [2.0, 5.0, 20.0, 100.0] {
            let value = log_f(&cfg, minimum.t_star * factor).unwrap();
            assert!(value > previous, "not increasing at {factor} t*");
            previous = value;
        }
    }
    println!("[criterion 08] PASS: {CONFIGS} configs, |[ln f]'(t*)| <= {STATIONARY_TOL:.0e}, f(t*) <= 1, increasing after");
}

/// Criterion 9: the finite-parameter bridge. The multinomial product form
/// coincides with exp(ln f) at ρ = 2; the multinomial/beta identity is
/// exact; the convex-combination inequality holds for ℓ ∈ {2, 3}.
#[test]
fn criterion_09_combinatorial_bridge() {
    const F2_SAMPLES: usize = 1_000;
    const F2_REL_TOL: f64 = 1e-9;
    const IDENTITY_SAMPLES: usize = 10_000;
    const IDENTITY_TOL: f64 = 1e-10;
    const SLACK_SAMPLES: usize = 10_000;
    const SLACK_FLOOR: f64 = -1e-10;
    let mut rng = sampling::sample_rng(0xacce_0009, 0);
    for _ in 0..F2_SAMPLES {
        let (m, n) = random_shape(&mut rng, 3);
        let lambda = sampling::random_matrix(&mut rng, m, n, 0.05, 2.0);
        let t = sampling::log_uniform(&mut rng, 0.01, 5.0);
        let cfg = RatioConfig::new(lambda.clone(), 2.0).unwrap();
        let via_gamma = log_f(&cfg, t).unwrap().exp();
        let via_multinomials = f2_as_multinomials(&lambda, t).unwrap();
        assert!(
            (via_multinomials - via_gamma).abs() <= F2_REL_TOL * via_gamma,
            "f2 {via_multinomials} vs {via_gamma} at t = {t}"
        );
    }
    for _ in 0..IDENTITY_SAMPLES {
        let len = 2 + (rng.next_u64() % 5) as usize;
        let a: Vec<f64> = (0..len)
            .map(|_| sampling::log_uniform(&mut rng, 0.05, 50.0))
            .collect();
        let slack = multinomial_beta_identity_slack(&a).unwrap();
        assert!(slack.abs() <= IDENTITY_TOL, "identity slack {slack} at {a:?}");
    }
    for _ in 0..SLACK_SAMPLES {
        let (m, n) = random_shape(&mut rng, 3);
        let lambda = sampling::random_matrix(&mut rng, m, n, 0.05, 2.0);
        let parts = 2 + (rng.next_u64() % 2) as usize;
        let raw: Vec<f64> = (0..parts)
            .map(|_| sampling::uniform(&mut rng, 0.05, 1.0))
            .collect();
        let total: f64 = raw.iter().sum();
        let theta: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let y: Vec<f64> = (0..parts)
            .map(|_| sampling::log_uniform(&mut rng, 0.1, 10.0))
            .collect();
        let weights = WeightVector::new(theta, y).unwrap();
        let slack = multinomial_inequality_slack(&lambda, &weights).unwrap();
        assert!(slack >= SLACK_FLOOR, "slack {slack}");
    }
    println!(
        "[criterion 09] PASS: {F2_SAMPLES} f2 matches, {IDENTITY_SAMPLES} identity slacks, {SLACK_SAMPLES} inequality slacks"
    );
}

/// Criterion 10: special-function spot values at analytically known points.
#[test]
fn criterion_10_specfun_spot_values() {
    const DIGAMMA_TOL: f64 = 1e-12;
    const TRIGAMMA_TOL: f64 = 1e-12;
    const LGAMMA_TOL: f64 = 1e-13;
    let psi_one = digamma(1.0).unwrap();
    assert!((psi_one + EULER_GAMMA).abs() <= DIGAMMA_TOL, "psi(1) = {psi_one}");
    let trigamma_one = polygamma(1, 1.0).unwrap();
    assert!(
        (trigamma_one - PI_SQUARED_OVER_SIX).abs() <= TRIGAMMA_TOL,
        "psi'(1) = {trigamma_one}"
    );
    let lg5 = lgamma(5.0).unwrap();
    assert!((lg5 - 24.0_f64.ln()).abs() <= LGAMMA_TOL, "ln G(5) = {lg5}");
    println!("[criterion 10] PASS: psi(1), psi'(1), ln G(5) at stated tolerances");
}

//! Globally adaptive Gauss–Kronrod quadrature on finite intervals.
//!
//! Each segment is scored with a 15-point Kronrod rule against its embedded
//! 7-point Gauss rule; the segment with the largest error estimate is split
//! until the summed estimate clears the requested tolerance or the segment
//! budget runs out. All nodes are interior, so integrands may be singular at
//! the very endpoints as long as the integral itself is finite.

use alloc::vec::Vec;

use crate::math::{abs, powf};
use crate::{Error, Result};

/// Abscissae of the 15-point Kronrod rule on [-1, 1] (non-negative half;
/// even-indexed entries are also the 7-point Gauss nodes' companions).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

/// Weights of the embedded 7-point Gauss rule.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Weights of the 15-point Kronrod rule.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Relative tolerance against the running value of the integral.
    pub rel_tol: f64,
    /// Absolute tolerance; the effective target is the larger of the two.
    pub abs_tol: f64,
    /// Maximum number of segments before giving up.
    pub max_segments: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_segments: 2048,
        }
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    /// The integral estimate.
    pub value: f64,
    /// Summed per-segment error estimates (an upper-bound style heuristic).
    pub error_estimate: f64,
    /// Number of integrand evaluations performed.
    pub evaluations: usize,
    /// Number of segments in the final partition.
    pub segments: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// One 15-point Kronrod pass over [a, b].
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut result_gauss = WG[3] * f_center;
    let mut result_kronrod = WGK[7] * f_center;
    let mut result_abs = WGK[7] * abs(f_center);
    let mut samples = [0.0f64; 15];
    samples[7] = f_center;
    for (j, &x) in XGK.iter().take(7).enumerate() {
        let lo = f(center - half * x);
        let hi = f(center + half * x);
        samples[j] = lo;
        samples[14 - j] = hi;
        result_kronrod += WGK[j] * (lo + hi);
        result_abs += WGK[j] * (abs(lo) + abs(hi));
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * (lo + hi);
        }
    }
    // QUADPACK-style error rescaling: compare against the integral of
    // |f - mean| so nearly-constant integrands do not look spuriously exact.
    let mean = 0.5 * result_kronrod;
    let mut result_asc = WGK[7] * abs(f_center - mean);
    for (j, &s) in samples.iter().take(7).enumerate() {
        result_asc += WGK[j] * (abs(s - mean) + abs(samples[14 - j] - mean));
    }
    let value = result_kronrod * half;
    let result_abs = result_abs * abs(half);
    let result_asc = result_asc * abs(half);
    let mut error = abs((result_kronrod - result_gauss) * half);
    if result_asc != 0.0 && error != 0.0 {
        error = result_asc * (powf(200.0 * error / result_asc, 1.5)).min(1.0);
    }
    if result_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * result_abs);
    }
    Segment {
        a,
        b,
        value,
        error,
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
///
/// Fails with [`Error::QuadratureNonconvergence`] when the segment budget is
/// exhausted before the error estimate drops below
/// `max(abs_tol, rel_tol·|integral|)`, and with [`Error::Domain`] when the
/// interval is degenerate or not finite.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    if !a.is_finite() || !b.is_finite() || !(b > a) {
        return Err(Error::Domain {
            func: "integrate",
            arg: b - a,
        });
    }
    let mut segments = Vec::with_capacity(64);
    segments.push(kronrod15(&f, a, b));
    let mut evaluations = 15usize;
    loop {
        let mut total = 0.0;
        let mut total_err = 0.0;
        let mut worst = 0usize;
        let mut worst_err = -1.0;
        for (i, seg) in segments.iter().enumerate() {
            total += seg.value;
            total_err += seg.error;
            if seg.error > worst_err {
                worst_err = seg.error;
                worst = i;
            }
        }
        let target = spec.abs_tol.max(spec.rel_tol * abs(total));
        if total_err <= target {
            // Kahan-style compensated re-sum: segments can number in the
            // thousands and their values span many orders of magnitude.
            let mut sum = 0.0;
            let mut carry = 0.0;
            for seg in &segments {
                let y = seg.value - carry;
                let t = sum + y;
                carry = (t - sum) - y;
                sum = t;
            }
            return Ok(QuadratureResult {
                value: sum,
                error_estimate: total_err,
                evaluations,
                segments: segments.len(),
            });
        }
        if segments.len() >= spec.max_segments {
            return Err(Error::QuadratureNonconvergence {
                error_estimate: total_err,
                tolerance: target,
            });
        }
        let Segment { a, b, .. } = segments[worst];
        let mid = 0.5 * (a + b);
        if !(a < mid && mid < b) {
            // The worst segment is already at floating-point resolution.
            return Err(Error::QuadratureNonconvergence {
                error_estimate: total_err,
                tolerance: target,
            });
        }
        segments[worst] = kronrod15(&f, a, mid);
        segments.push(kronrod15(&f, mid, b));
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn default_spec() -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_segments: 2048,
        }
    }

    #[test]
    fn integrates_polynomials_exactly() {
        // Kronrod-15 is exact for degree ≤ 22; adaptivity never triggers.
        let r = integrate(|x| 3.0 * x * x, 0.0, 2.0, &default_spec()).unwrap();
        assert!((r.value - 8.0).abs() <= 1e-13);
        assert_eq!(r.segments, 1);
    }

    #[test]
    fn integrates_smooth_transcendentals() {
        let r = integrate(|x| x.sin(), 0.0, PI, &default_spec()).unwrap();
        assert!((r.value - 2.0).abs() <= 1e-12);
        let r = integrate(|x| (-x).exp(), 0.0, 30.0, &default_spec()).unwrap();
        assert!((r.value - (1.0 - (-30.0f64).exp())).abs() <= 1e-12);
    }

    #[test]
    fn handles_integrable_endpoint_singularity() {
        // ∫₀¹ x^{-1/2} dx = 2; the integrand blows up at 0 but no node ever
        // touches the endpoint.
        let spec = QuadratureSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-10,
            max_segments: 4096,
        };
        let r = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &spec).unwrap();
        assert!((r.value - 2.0).abs() <= 1e-7, "got {}", r.value);
    }

    #[test]
    fn reports_nonconvergence_when_budget_is_too_small() {
        let spec = QuadratureSpec {
            rel_tol: 1e-14,
            abs_tol: 1e-16,
            max_segments: 4,
        };
        let err = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &spec).unwrap_err();
        assert!(matches!(err, Error::QuadratureNonconvergence { .. }));
    }

    #[test]
    fn rejects_bad_intervals() {
        let spec = default_spec();
        assert!(integrate(|x| x, 1.0, 1.0, &spec).is_err());
        assert!(integrate(|x| x, 2.0, 1.0, &spec).is_err());
        assert!(integrate(|x| x, 0.0, f64::INFINITY, &spec).is_err());
    }

    #[test]
    fn error_estimate_bounds_true_error_on_test_functions() {
        let spec = QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_segments: 2048,
        };
        type Case = (fn(f64) -> f64, f64, f64, f64);
        let cases: [Case; 3] = [
            (|x| x.exp(), 0.0, 1.0, core::f64::consts::E - 1.0),
            (|x| 1.0 / (1.0 + x * x), 0.0, 1.0, PI / 4.0),
            (|x| x.ln() * x, 1.0, 3.0, 4.5 * 3.0f64.ln() - 2.0),
        ];
        for (f, a, b, exact) in cases {
            let r = integrate(f, a, b, &spec).unwrap();
            assert!((r.value - exact).abs() <= r.error_estimate.max(1e-13));
        }
    }
}

//! Scalar special-function kernels: log-gamma, digamma, polygamma of
//! arbitrary order, and the Binet remainder density.
//!
//! Every kernel follows the same two-step scheme. The argument is first
//! shifted upward by the recurrence of the function in question until it
//! clears `Accuracy::shift_threshold`, and the shifted value is then fed to a
//! Bernoulli-number asymptotic series whose terms are accumulated until they
//! drop below the running result's noise floor. Only strictly positive
//! arguments are supported; negative reals are outside the needs of this
//! crate and are rejected rather than reflected.

use crate::math::{abs, exp_m1, ln, powi};
use crate::{Error, Result};

/// Euler–Mascheroni constant, γ = −ψ(1).
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// ln(2π)/2, the constant term of Stirling's series.
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_7;

/// Largest argument accepted by [`lgamma`]: the result is still comfortably
/// inside `f64` range here, and rejecting anything larger gives callers a
/// clean range error instead of a quiet loss of meaning.
pub const MAX_LGAMMA_ARG: f64 = 1e300;

/// Highest derivative order served by [`polygamma`].
pub const MAX_POLYGAMMA_ORDER: usize = 30;

/// Bernoulli numbers B₂, B₄, …, B₄₀ as exact rationals rendered to `f64`.
const BERNOULLI_EVEN: [f64; 20] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43_867.0 / 798.0,
    -174_611.0 / 330.0,
    854_513.0 / 138.0,
    -236_364_091.0 / 2730.0,
    8_553_103.0 / 6.0,
    -23_749_461_029.0 / 870.0,
    8_615_841_276_005.0 / 14_322.0,
    -7_709_321_041_217.0 / 510.0,
    2_577_687_858_367.0 / 6.0,
    -26_315_271_553_053_477_373.0 / 1_919_190.0,
    2_929_993_913_841_559.0 / 6.0,
    -261_082_718_496_449_122_051.0 / 13_530.0,
];

/// Tuning knobs for the recurrence-shift + asymptotic-series kernels.
///
/// The defaults are chosen so that every kernel delivers close to full
/// `f64` precision; loosening them trades accuracy for a little speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    /// Target relative tolerance of the kernels.
    pub rel_tol: f64,
    /// Arguments below this are shifted upward before the asymptotic series
    /// is applied ([`polygamma`] additionally adds the derivative order).
    pub shift_threshold: f64,
    /// Cap on the number of Bernoulli terms summed (at most 20, the size of
    /// the built-in table).
    pub max_bernoulli_terms: usize,
}

impl Accuracy {
    /// Builds a policy, rejecting values that would break the series' error
    /// analysis: `rel_tol` must be positive, `shift_threshold` at least 2,
    /// and `max_bernoulli_terms` between 4 and 20.
    pub fn new(rel_tol: f64, shift_threshold: f64, max_bernoulli_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || !rel_tol.is_finite() {
            return Err(Error::InvalidAccuracy("rel_tol must be a positive finite number"));
        }
        if !(shift_threshold >= 2.0) || !shift_threshold.is_finite() {
            return Err(Error::InvalidAccuracy("shift_threshold must be at least 2"));
        }
        if max_bernoulli_terms < 4 || max_bernoulli_terms > BERNOULLI_EVEN.len() {
            return Err(Error::InvalidAccuracy("max_bernoulli_terms must lie in [4, 20]"));
        }
        Ok(Self {
            rel_tol,
            shift_threshold,
            max_bernoulli_terms,
        })
    }
}

impl Default for Accuracy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            shift_threshold: 10.0,
            max_bernoulli_terms: 20,
        }
    }
}

fn check_positive(func: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { func, arg: x })
    }
}

fn factorial(k: usize) -> f64 {
    let mut out = 1.0;
    for j in 2..=k {
        out *= j as f64;
    }
    out
}

/// Natural log of the gamma function, ln Γ(x), for x > 0.
///
/// Uses the default [`Accuracy`]; see [`lgamma_with`].
pub fn lgamma(x: f64) -> Result<f64> {
    lgamma_with(&Accuracy::default(), x)
}

/// ln Γ(x) under an explicit accuracy policy.
///
/// Shifts with ln Γ(x) = ln Γ(x+1) − ln x and finishes with Stirling's
/// series ln Γ(y) = (y−½)ln y − y + ½ln 2π + Σₖ B₂ₖ/(2k(2k−1)y^{2k−1}).
pub fn lgamma_with(acc: &Accuracy, x: f64) -> Result<f64> {
    check_positive("lgamma", x)?;
    if x > MAX_LGAMMA_ARG {
        return Err(Error::Overflow {
            func: "lgamma",
            arg: x,
        });
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < acc.shift_threshold {
        shift += ln(y);
        y += 1.0;
    }
    let y2 = y * y;
    let mut inv_pow = 1.0 / y;
    let mut series = 0.0;
    for (idx, b) in BERNOULLI_EVEN.iter().take(acc.max_bernoulli_terms).enumerate() {
        let two_k = (2 * (idx + 1)) as f64;
        let term = b / (two_k * (two_k - 1.0)) * inv_pow;
        series += term;
        if abs(term) < 1e-18 {
            break;
        }
        inv_pow /= y2;
    }
    Ok((y - 0.5) * ln(y) - y + HALF_LN_TWO_PI + series - shift)
}

/// Digamma function ψ(x) = d/dx ln Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    digamma_with(&Accuracy::default(), x)
}

/// ψ(x) under an explicit accuracy policy.
///
/// Shifts with ψ(x) = ψ(x+1) − 1/x and finishes with the asymptotic series
/// ψ(y) = ln y − 1/(2y) − Σₖ B₂ₖ/(2k·y^{2k}).
pub fn digamma_with(acc: &Accuracy, x: f64) -> Result<f64> {
    check_positive("digamma", x)?;
    let mut shift = 0.0;
    let mut y = x;
    while y < acc.shift_threshold {
        shift += 1.0 / y;
        y += 1.0;
    }
    let y2 = y * y;
    let mut inv_pow = 1.0 / y2;
    let mut series = 0.0;
    for (idx, b) in BERNOULLI_EVEN.iter().take(acc.max_bernoulli_terms).enumerate() {
        let two_k = (2 * (idx + 1)) as f64;
        let term = b / two_k * inv_pow;
        series += term;
        if abs(term) < 1e-20 {
            break;
        }
        inv_pow /= y2;
    }
    Ok(ln(y) - 0.5 / y - series - shift)
}

/// Polygamma function ψ⁽ⁿ⁾(x), the n-th derivative of ψ, for n ≥ 1, x > 0.
pub fn polygamma(order: usize, x: f64) -> Result<f64> {
    polygamma_with(&Accuracy::default(), order, x)
}

/// ψ⁽ⁿ⁾(x) under an explicit accuracy policy.
///
/// Shifts with ψ⁽ⁿ⁾(x) = ψ⁽ⁿ⁾(x+1) + (−1)ⁿ n!/x^{n+1} and finishes with
///
/// ψ⁽ⁿ⁾(y) = (−1)^{n−1} [ (n−1)!/yⁿ + n!/(2y^{n+1})
///             + Σₖ B₂ₖ·(2k+n−1)!/((2k)!·y^{2k+n}) ].
///
/// The shift target is raised to `shift_threshold + n` because higher
/// orders need a larger argument before the series converges well.
pub fn polygamma_with(acc: &Accuracy, order: usize, x: f64) -> Result<f64> {
    if !(1..=MAX_POLYGAMMA_ORDER).contains(&order) {
        return Err(Error::InvalidOrder {
            order,
            min: 1,
            max: MAX_POLYGAMMA_ORDER,
        });
    }
    check_positive("polygamma", x)?;
    let n = order;
    // (−1)^{n−1}, which is also the sign attached to the recurrence term.
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let n_fact = factorial(n);
    let target = acc.shift_threshold + n as f64;
    let mut shift = 0.0;
    let mut y = x;
    while y < target {
        shift += powi(1.0 / y, (n + 1) as i32);
        y += 1.0;
    }
    let inv_y = 1.0 / y;
    let mut series = factorial(n - 1) * powi(inv_y, n as i32) + 0.5 * n_fact * powi(inv_y, (n + 1) as i32);
    let y2 = y * y;
    let mut inv_pow = powi(inv_y, (n + 2) as i32);
    for (idx, b) in BERNOULLI_EVEN.iter().take(acc.max_bernoulli_terms).enumerate() {
        let two_k = 2 * (idx + 1);
        // (2k+n−1)!/(2k)! as a short product; empty (hence 1) when n = 1.
        let mut rising = 1.0;
        for j in (two_k + 1)..(two_k + n) {
            rising *= j as f64;
        }
        let term = b * rising * inv_pow;
        series += term;
        if abs(term) < 1e-17 * abs(series) {
            break;
        }
        inv_pow /= y2;
    }
    Ok(sign * (series + n_fact * shift))
}

/// Binet remainder density β(t) = (1/(eᵗ−1) − 1/t + ½)/t for t > 0.
///
/// This is the weight appearing in Binet's integral
/// ln Γ(x+1) = (x+½)ln x − x + ½ln 2π + ∫₀^∞ β(s)e^{−xs} ds.
/// Near zero the closed form loses all significance to cancellation, so for
/// t < 0.1 the Taylor expansion β(t) = Σₖ B₂ₖ t^{2k−2}/(2k)! is used instead;
/// its truncation error there is below 10⁻²².
pub fn binet_density(t: f64) -> Result<f64> {
    check_positive("binet_density", t)?;
    if t < 0.1 {
        // B₂ₖ/(2k)! for k = 1..6.
        const COEFF: [f64; 6] = [
            1.0 / 12.0,
            -1.0 / 720.0,
            1.0 / 30_240.0,
            -1.0 / 1_209_600.0,
            1.0 / 47_900_160.0,
            -691.0 / 1_307_674_368_000.0,
        ];
        let t2 = t * t;
        let mut out = COEFF[5];
        for c in COEFF[..5].iter().rev() {
            out = out * t2 + c;
        }
        Ok(out)
    } else {
        Ok((1.0 / exp_m1(t) - 1.0 / t + 0.5) / t)
    }
}

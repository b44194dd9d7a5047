//! Real-argument multinomial coefficients, multivariate beta functions, the
//! identity connecting them, and the inequalities that follow from
//! log-convexity of the ρ = 2 gamma ratio.
//!
//! With s = Σᵢ aᵢ, the two basic objects are
//!
//! ```text
//! C(s; a) = Γ(1+s)/Πᵢ Γ(1+aᵢ)          (multinomial coefficient)
//! B(a)    = Πᵢ Γ(aᵢ)/Γ(s)              (multivariate beta)
//! ```
//!
//! connected by C(s; a) = (s/Πᵢaᵢ)·1/B(a). The ρ = 2 ratio factors into a
//! double product of multinomials ([`f2_as_multinomials`]); because that
//! ratio is logarithmically convex, the products satisfy a convexity
//! inequality whose beta-function form is exposed by
//! [`beta_inequality_slack`]. Everything is computed and compared in log
//! space — the products overflow quickly otherwise.

use alloc::vec::Vec;

use crate::math::{exp, ln, powf};
use crate::matrix::PositiveMatrix;
use crate::specfun::lgamma;
use crate::{Error, Result};

/// ln(f64::MAX): exponentiating beyond this overflows.
const MAX_EXP_ARG: f64 = 709.782_712_893_384;

/// ln of the smallest positive normal f64: below this the result would
/// degrade to a denormal or to zero.
const MIN_EXP_ARG: f64 = -708.396_418_532_264_1;

fn exp_reported(log_value: f64) -> Result<f64> {
    if !(MIN_EXP_ARG..=MAX_EXP_ARG).contains(&log_value) {
        Err(Error::ExpRange { log_value })
    } else {
        Ok(exp(log_value))
    }
}

fn check_vector(func: &'static str, a: &[f64]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::Domain { func, arg: 0.0 });
    }
    for &x in a {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain { func, arg: x });
        }
    }
    Ok(())
}

/// Convex weights θ paired with positive evaluation points y.
///
/// θ must sum to 1 (within 1e-14) with every θₖ in (0, 1]; the closed upper
/// end admits the single-term case θ = [1].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    theta: Vec<f64>,
    y: Vec<f64>,
}

impl WeightVector {
    /// Validates and pairs weights with points.
    pub fn new(theta: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::InvalidWeights("at least one weight is required"));
        }
        if theta.len() != y.len() {
            return Err(Error::InvalidWeights("weights and points must have equal length"));
        }
        if theta.iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
            return Err(Error::InvalidWeights("weights must lie in (0, 1]"));
        }
        if y.iter().any(|&p| !(p > 0.0) || !p.is_finite()) {
            return Err(Error::InvalidWeights("points must be strictly positive and finite"));
        }
        let total: f64 = theta.iter().sum();
        if (total - 1.0).abs() > 1e-14 {
            return Err(Error::InvalidWeights("weights must sum to 1"));
        }
        Ok(Self { theta, y })
    }

    /// The weights θ.
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// The evaluation points y.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Number of (θ, y) pairs.
    pub fn len(&self) -> usize {
        self.theta.len()
    }

    /// Never true; paired with [`len`](Self::len) by convention.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The convex combination ȳ = Σₖ θₖ yₖ.
    pub fn mean_y(&self) -> f64 {
        self.theta.iter().zip(&self.y).map(|(t, p)| t * p).sum()
    }
}

/// ln C(Σa; a) = ln Γ(1+Σa) − Σᵢ ln Γ(1+aᵢ).
pub fn ln_multinomial(a: &[f64]) -> Result<f64> {
    check_vector("ln_multinomial", a)?;
    let s: f64 = a.iter().sum();
    let mut out = lgamma(1.0 + s)?;
    for &ai in a {
        out -= lgamma(1.0 + ai)?;
    }
    Ok(out)
}

/// The multinomial coefficient C(Σa; a) for positive real a.
///
/// Evaluated in log space; errors with [`Error::ExpRange`] when the result
/// leaves the normal `f64` range.
pub fn multinomial(a: &[f64]) -> Result<f64> {
    exp_reported(ln_multinomial(a)?)
}

/// ln B(a) = Σᵢ ln Γ(aᵢ) − ln Γ(Σa).
pub fn ln_multivariate_beta(a: &[f64]) -> Result<f64> {
    check_vector("ln_multivariate_beta", a)?;
    let s: f64 = a.iter().sum();
    let mut out = -lgamma(s)?;
    for &ai in a {
        out += lgamma(ai)?;
    }
    Ok(out)
}

/// The multivariate beta B(a) for positive real a; symmetric in its
/// arguments. Errors with [`Error::ExpRange`] on over- or underflow.
pub fn multivariate_beta(a: &[f64]) -> Result<f64> {
    exp_reported(ln_multivariate_beta(a)?)
}

/// Log-domain residual of the identity C(Σa; a)·B(a) = Σa/Πa:
/// ln C − [ln Σa − Σ ln aᵢ − ln B]. Zero up to rounding for every input.
pub fn multinomial_beta_identity_slack(a: &[f64]) -> Result<f64> {
    check_vector("multinomial_beta_identity_slack", a)?;
    let s: f64 = a.iter().sum();
    let ln_product: f64 = a.iter().map(|&ai| ln(ai)).sum();
    let lhs = ln_multinomial(a)?;
    let rhs = ln(s) - ln_product - ln_multivariate_beta(a)?;
    Ok(lhs - rhs)
}

/// ln of the double product of multinomials that the ρ = 2 ratio equals:
///
/// ```text
/// ln f₂(t) = Σᵢ ln C(αᵢt; λᵢ₁t, …, λᵢₙt) + Σⱼ ln C(βⱼt; λ₁ⱼt, …, λₘⱼt).
/// ```
pub fn ln_f2_as_multinomials(lambda: &PositiveMatrix, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain {
            func: "ln_f2_as_multinomials",
            arg: t,
        });
    }
    let mut out = 0.0;
    let mut buf = Vec::with_capacity(lambda.rows().max(lambda.cols()));
    for row in lambda.iter_rows() {
        buf.clear();
        buf.extend(row.iter().map(|&l| l * t));
        out += ln_multinomial(&buf)?;
    }
    for j in 0..lambda.cols() {
        buf.clear();
        buf.extend((0..lambda.rows()).map(|i| lambda.entry(i, j) * t));
        out += ln_multinomial(&buf)?;
    }
    Ok(out)
}

/// The ρ = 2 ratio evaluated through its multinomial factorization; agrees
/// with `exp(log_f)` of the ratio module to high relative accuracy.
pub fn f2_as_multinomials(lambda: &PositiveMatrix, t: f64) -> Result<f64> {
    exp_reported(ln_f2_as_multinomials(lambda, t)?)
}

/// Log-space slack Σₖ θₖ ln f₂(yₖ) − ln f₂(ȳ) of the multinomial-product
/// inequality; nonnegative because ln f₂ is convex.
pub fn multinomial_inequality_slack(lambda: &PositiveMatrix, w: &WeightVector) -> Result<f64> {
    let mut weighted = 0.0;
    for (&theta, &y) in w.theta().iter().zip(w.y()) {
        weighted += theta * ln_f2_as_multinomials(lambda, y)?;
    }
    Ok(weighted - ln_f2_as_multinomials(lambda, w.mean_y())?)
}

/// ln D(t) where D is the double product of multivariate betas over rows
/// and columns at scale t.
fn ln_beta_product(lambda: &PositiveMatrix, t: f64) -> Result<f64> {
    let mut out = 0.0;
    let mut buf = Vec::with_capacity(lambda.rows().max(lambda.cols()));
    for row in lambda.iter_rows() {
        buf.clear();
        buf.extend(row.iter().map(|&l| l * t));
        out += ln_multivariate_beta(&buf)?;
    }
    for j in 0..lambda.cols() {
        buf.clear();
        buf.extend((0..lambda.rows()).map(|i| lambda.entry(i, j) * t));
        out += ln_multivariate_beta(&buf)?;
    }
    Ok(out)
}

/// Log-space slack of the beta-function form of the convexity inequality,
///
/// ```text
/// D(ȳ)/Πₖ D(yₖ)^θₖ  ≥  Πₖ yₖ^{qθₖ} / ȳ^q ,      q = 2mn − m − n,
/// ```
///
/// i.e. LHS − RHS of the logs; nonnegative. This is the form that follows
/// mechanically from convexity of ln f₂ plus the multinomial–beta identity
/// (the denominator is the q-th power of ȳ, not a sum of q-th powers — see
/// [`beta_inequality_slack_printed`] for the latter variant).
pub fn beta_inequality_slack(lambda: &PositiveMatrix, w: &WeightVector) -> Result<f64> {
    let q = (2 * lambda.rows() * lambda.cols() - lambda.rows() - lambda.cols()) as f64;
    let mean = w.mean_y();
    let mut weighted_d = 0.0;
    let mut weighted_ln_y = 0.0;
    for (&theta, &y) in w.theta().iter().zip(w.y()) {
        weighted_d += theta * ln_beta_product(lambda, y)?;
        weighted_ln_y += theta * ln(y);
    }
    let lhs = ln_beta_product(lambda, mean)? - weighted_d;
    let rhs = q * weighted_ln_y - q * ln(mean);
    Ok(lhs - rhs)
}

/// The same slack with the right side's denominator read literally as
/// Σₖ (θₖyₖ)^q instead of ȳ^q.
///
/// This variant does not follow from the convexity derivation and is *not*
/// asserted anywhere; it is provided so its empirical behaviour can be
/// reported next to the derived form.
pub fn beta_inequality_slack_printed(lambda: &PositiveMatrix, w: &WeightVector) -> Result<f64> {
    let q = (2 * lambda.rows() * lambda.cols() - lambda.rows() - lambda.cols()) as f64;
    let mean = w.mean_y();
    let mut weighted_d = 0.0;
    let mut weighted_ln_y = 0.0;
    let mut power_sum = 0.0;
    for (&theta, &y) in w.theta().iter().zip(w.y()) {
        weighted_d += theta * ln_beta_product(lambda, y)?;
        weighted_ln_y += theta * ln(y);
        power_sum += powf(theta * y, q);
    }
    if !power_sum.is_finite() || power_sum <= 0.0 {
        return Err(Error::ExpRange {
            log_value: q * ln(mean),
        });
    }
    let lhs = ln_beta_product(lambda, mean)? - weighted_d;
    let rhs = q * weighted_ln_y - ln(power_sum);
    Ok(lhs - rhs)
}

//! The gamma-function ratio built from a positive matrix and its
//! logarithmic derivatives, limits, integral representations, and minimum.
//!
//! For an m×n matrix λ with row sums αᵢ, column sums βⱼ and a real exponent
//! ρ, the ratio in question is
//!
//! ```text
//! f(t) = Πᵢ Γ(1+αᵢt) · Πⱼ Γ(1+βⱼt) / [Πᵢⱼ Γ(1+λᵢⱼt)]^ρ ,    t ≥ 0.
//! ```
//!
//! All logarithmic derivatives are plain polygamma sums, so every function
//! here reduces to the kernels in [`crate::specfun`]. The integral
//! representations ([`d2log_f_via_laplace`], [`bernstein_representation`])
//! provide an independent route to the same quantities through
//! [`crate::quadrature`] and serve as built-in cross-checks.

use alloc::vec::Vec;

use crate::math::{abs, exp, exp_m1, ln, powi};
use crate::matrix::PositiveMatrix;
use crate::quadrature::{integrate, QuadratureSpec};
use crate::specfun::{digamma, lgamma, polygamma, EULER_GAMMA};
use crate::{Error, Result};

/// 1/(1−e⁻¹), the constant in the exponential tail bounds below.
const INV_ONE_MINUS_E_INV: f64 = 1.581_976_706_869_326_4;

/// ln(f64::MAX); exponentiating anything larger overflows.
const MAX_EXP_ARG: f64 = 709.782_712_893_384;

/// π²/6.
const PI_SQUARED_OVER_SIX: f64 = 1.644_934_066_848_226_4;

/// A matrix together with the denominator exponent ρ.
///
/// The interesting regime is ρ ≤ 2 (at ρ = 2 the ratio has the full set of
/// structure results); larger ρ is still evaluable but most of the
/// representation routines refuse it explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioConfig {
    matrix: PositiveMatrix,
    rho: f64,
}

impl RatioConfig {
    /// Pairs a matrix with a finite exponent ρ.
    pub fn new(matrix: PositiveMatrix, rho: f64) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::Domain {
                func: "RatioConfig::new",
                arg: rho,
            });
        }
        Ok(Self { matrix, rho })
    }

    /// The underlying positive matrix.
    pub fn matrix(&self) -> &PositiveMatrix {
        &self.matrix
    }

    /// The denominator exponent.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// A copy with the matrix multiplied by `factor`; by homogeneity this
    /// turns f(t) into f(factor·t).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.scaled(factor)?,
            rho: self.rho,
        })
    }

    /// Σᵢ g(αᵢ) + Σⱼ g(βⱼ) − ρ·Σᵢⱼ g(λᵢⱼ): the signed sum over the three
    /// scalar families from which every quantity in this module is built.
    fn signed_sum<G: FnMut(f64) -> Result<f64>>(&self, mut g: G) -> Result<f64> {
        let mut plus = 0.0;
        for &a in self.matrix.row_sums() {
            plus += g(a)?;
        }
        for &b in self.matrix.col_sums() {
            plus += g(b)?;
        }
        let mut minus = 0.0;
        for &l in self.matrix.entries() {
            minus += g(l)?;
        }
        Ok(plus - self.rho * minus)
    }

    /// The slowest decay scale among all three families (the largest of the
    /// row and column sums, which dominate every entry).
    fn slowest_scale(&self) -> f64 {
        let mut c = 0.0f64;
        for &a in self.matrix.row_sums() {
            c = c.max(a);
        }
        for &b in self.matrix.col_sums() {
            c = c.max(b);
        }
        c
    }

    /// m + n + |ρ|·mn, the term-count factor in the tail bounds.
    fn term_count_bound(&self) -> f64 {
        let m = self.matrix.rows() as f64;
        let n = self.matrix.cols() as f64;
        m + n + abs(self.rho) * m * n
    }
}

fn check_t(func: &'static str, t: f64, allow_zero: bool) -> Result<()> {
    let ok = if allow_zero { t >= 0.0 } else { t > 0.0 };
    if ok && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { func, arg: t })
    }
}

fn exp_checked(log_value: f64) -> Result<f64> {
    if log_value > MAX_EXP_ARG {
        Err(Error::ExpRange { log_value })
    } else {
        Ok(exp(log_value))
    }
}

/// ln f(t) for t ≥ 0; exactly 0 at t = 0.
pub fn log_f(cfg: &RatioConfig, t: f64) -> Result<f64> {
    check_t("log_f", t, true)?;
    cfg.signed_sum(|c| lgamma(1.0 + c * t))
}

/// f(t) itself. Errors with [`Error::ExpRange`] when ln f(t) overflows the
/// exponent range; underflow to zero is allowed (the value is then honest,
/// merely denormal or 0).
pub fn f(cfg: &RatioConfig, t: f64) -> Result<f64> {
    exp_checked(log_f(cfg, t)?)
}

/// [ln f]′(t) = Σᵢ αᵢψ(1+αᵢt) + Σⱼ βⱼψ(1+βⱼt) − ρΣᵢⱼ λᵢⱼψ(1+λᵢⱼt), t > 0.
pub fn dlog_f(cfg: &RatioConfig, t: f64) -> Result<f64> {
    check_t("dlog_f", t, false)?;
    cfg.signed_sum(|c| Ok(c * digamma(1.0 + c * t)?))
}

/// [ln f]″(t), the same signed sum with c²ψ′(1+ct).
pub fn d2log_f(cfg: &RatioConfig, t: f64) -> Result<f64> {
    check_t("d2log_f", t, false)?;
    cfg.signed_sum(|c| Ok(c * c * polygamma(1, 1.0 + c * t)?))
}

/// [ln f]⁽ᵏ⁾(t) for 1 ≤ k ≤ 8: the signed sum with cᵏψ⁽ᵏ⁻¹⁾(1+ct).
pub fn dklog_f(cfg: &RatioConfig, t: f64, k: usize) -> Result<f64> {
    if !(1..=8).contains(&k) {
        return Err(Error::InvalidOrder {
            order: k,
            min: 1,
            max: 8,
        });
    }
    if k == 1 {
        return dlog_f(cfg, t);
    }
    check_t("dklog_f", t, false)?;
    cfg.signed_sum(|c| Ok(powi(c, k as i32) * polygamma(k - 1, 1.0 + c * t)?))
}

/// limₜ→₀₊ [ln f]′(t) = −γ(2−ρ)·Σᵢⱼλᵢⱼ, from ψ(1) = −γ.
pub fn dlog_f_limit_at_zero(cfg: &RatioConfig) -> f64 {
    -EULER_GAMMA * (2.0 - cfg.rho()) * cfg.matrix().total()
}

/// limₜ→₀₊ [ln f]″(t) = (π²/6)(Σᵢαᵢ² + Σⱼβⱼ² − ρΣᵢⱼλᵢⱼ²), from ψ′(1) = π²/6.
pub fn d2log_f_limit_at_zero(cfg: &RatioConfig) -> f64 {
    let sq = |acc: f64, &c: &f64| acc + c * c;
    let rows: f64 = cfg.matrix().row_sums().iter().fold(0.0, sq);
    let cols: f64 = cfg.matrix().col_sums().iter().fold(0.0, sq);
    let lams: f64 = cfg.matrix().entries().iter().fold(0.0, sq);
    PI_SQUARED_OVER_SIX * (rows + cols - cfg.rho() * lams)
}

/// supₜ [ln f]′(t) = limₜ→∞ [ln f]′(t) at ρ = 2:
/// Σᵢ αᵢ ln αᵢ + Σⱼ βⱼ ln βⱼ − 2Σᵢⱼ λᵢⱼ ln λᵢⱼ.
///
/// Requires ρ = 2 exactly; for ρ < 2 the derivative grows without bound.
pub fn sup_limit(cfg: &RatioConfig) -> Result<f64> {
    if cfg.rho() != 2.0 {
        return Err(Error::Hypothesis("sup_limit requires rho == 2"));
    }
    cfg.signed_sum(|c| Ok(c * ln(c)))
}

/// ℓ(s) with no domain check; callers guarantee s > 0.
fn levy_raw(cfg: &RatioConfig, s: f64) -> f64 {
    cfg.signed_sum(|c| Ok(1.0 / exp_m1(s / c)))
        .expect("infallible closure")
}

/// The Lévy-type integrand ℓ(s) = Σᵢ h(s/αᵢ) + Σⱼ h(s/βⱼ) − ρΣᵢⱼ h(s/λᵢⱼ)
/// with h(x) = 1/(eˣ−1), for s > 0.
///
/// At ρ = 2 this is the (nonnegative) Lévy density of the Bernstein
/// representation of [ln f]′.
pub fn levy_density(cfg: &RatioConfig, s: f64) -> Result<f64> {
    check_t("levy_density", s, false)?;
    Ok(levy_raw(cfg, s))
}

/// lim_{s→0⁺} ℓ(s) = mn − (m+n)/2, finite only at ρ = 2 (the 1/s poles of
/// the three families cancel exactly there).
pub fn levy_density_limit_at_zero(cfg: &RatioConfig) -> Result<f64> {
    if cfg.rho() != 2.0 {
        return Err(Error::Hypothesis("levy_density_limit_at_zero requires rho == 2"));
    }
    let m = cfg.matrix().rows() as f64;
    let n = cfg.matrix().cols() as f64;
    Ok(m * n - 0.5 * (m + n))
}

/// The Laplace density d(u) = u·ℓ(u) of [ln f]″, for u > 0:
/// [ln f]″(t) = ∫₀^∞ d(u)e^{−tu} du whenever ρ ≤ 2.
pub fn density(cfg: &RatioConfig, u: f64) -> Result<f64> {
    check_t("density", u, false)?;
    Ok(u * levy_raw(cfg, u))
}

/// Result of an integral cross-check: the integral over [0, truncation_u],
/// an analytic bound on what the truncation discarded, and the quadrature's
/// own bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralCheck {
    /// Value of the truncated integral.
    pub value: f64,
    /// Where the infinite range was cut.
    pub truncation_u: f64,
    /// Analytic upper bound on the absolute value of the discarded tail.
    pub tail_bound: f64,
    /// Error estimate reported by the adaptive quadrature.
    pub error_estimate: f64,
    /// Number of integrand evaluations.
    pub evaluations: usize,
}

/// Upper bound on |∫_U^∞ d(u)e^{−tu} du|, valid for U ≥ slowest scale:
/// each |h(u/c)| ≤ e^{−u/c}/(1−e⁻¹) there, so the integrand is below
/// N·u·e^{−ru}/(1−e⁻¹) with r = t + 1/c_max and N the term count.
fn density_tail_bound(cfg: &RatioConfig, u: f64, t: f64) -> f64 {
    let r = t + 1.0 / cfg.slowest_scale();
    INV_ONE_MINUS_E_INV * cfg.term_count_bound() * exp(-r * u) * (u / r + 1.0 / (r * r))
}

/// Doubles the truncation point until `bound(u)` drops below `target`.
fn grow_truncation(mut u: f64, target: f64, bound: impl Fn(f64) -> f64) -> Result<(f64, f64)> {
    for _ in 0..1100 {
        let b = bound(u);
        if b <= target {
            return Ok((u, b));
        }
        u *= 2.0;
    }
    Err(Error::QuadratureNonconvergence {
        error_estimate: bound(u),
        tolerance: target,
    })
}

/// Evaluates ∫₀^U d(u)e^{−tu} du with U chosen so the analytic tail bound is
/// below half of `spec.abs_tol` (which must therefore be positive).
///
/// For ρ ≤ 2 and any t ≥ 0 the result is an independent reconstruction of
/// [ln f]″(t) from the Laplace representation.
pub fn d2log_f_via_laplace(cfg: &RatioConfig, t: f64, spec: &QuadratureSpec) -> Result<IntegralCheck> {
    check_t("d2log_f_via_laplace", t, true)?;
    if !(spec.abs_tol > 0.0) {
        return Err(Error::Domain {
            func: "d2log_f_via_laplace",
            arg: spec.abs_tol,
        });
    }
    let start = cfg.slowest_scale().max(1.0 / (t + 1.0));
    let (upper, tail_bound) = grow_truncation(start, 0.5 * spec.abs_tol, |u| {
        density_tail_bound(cfg, u, t)
    })?;
    let quad = integrate(|u| u * levy_raw(cfg, u) * exp(-t * u), 0.0, upper, spec)?;
    Ok(IntegralCheck {
        value: quad.value,
        truncation_u: upper,
        tail_bound,
        error_estimate: quad.error_estimate,
        evaluations: quad.evaluations,
    })
}

/// Upper bound on |∫_U^∞ (1−e^{−ts})ℓ(s) ds| for U ≥ slowest scale; the
/// bracket is at most 1, and |ℓ| integrates to N·c_max·e^{−U/c_max}/(1−e⁻¹).
fn levy_tail_bound(cfg: &RatioConfig, u: f64) -> f64 {
    let c = cfg.slowest_scale();
    INV_ONE_MINUS_E_INV * cfg.term_count_bound() * c * exp(-u / c)
}

/// The Bernstein-function representation of [ln f]′ at ρ = 2:
///
/// ```text
/// [ln f]′(t) = a + b·t + ∫₀^∞ (1 − e^{−ts}) ℓ(s) ds,   a = b = 0,
/// ```
///
/// evaluated by adaptive quadrature on [0, U] with an analytic bound on the
/// discarded tail. An independent route to [`dlog_f`].
pub fn bernstein_representation(cfg: &RatioConfig, t: f64, spec: &QuadratureSpec) -> Result<IntegralCheck> {
    if cfg.rho() != 2.0 {
        return Err(Error::Hypothesis("bernstein_representation requires rho == 2"));
    }
    check_t("bernstein_representation", t, true)?;
    if !(spec.abs_tol > 0.0) {
        return Err(Error::Domain {
            func: "bernstein_representation",
            arg: spec.abs_tol,
        });
    }
    let (upper, tail_bound) = grow_truncation(cfg.slowest_scale(), 0.5 * spec.abs_tol, |u| {
        levy_tail_bound(cfg, u)
    })?;
    // The drift and killing terms of the representation vanish identically
    // here; keep them in the formula so its shape stays visible.
    let (a, b) = (0.0, 0.0);
    let quad = integrate(|s| -exp_m1(-t * s) * levy_raw(cfg, s), 0.0, upper, spec)?;
    Ok(IntegralCheck {
        value: a + b * t + quad.value,
        truncation_u: upper,
        tail_bound,
        error_estimate: quad.error_estimate,
        evaluations: quad.evaluations,
    })
}

/// Location and value of the minimum of f on (0, ∞).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    /// Argmin of f (equivalently the zero of [ln f]′).
    pub t_star: f64,
    /// f(t_star); always in (0, 1] since f(0) = 1.
    pub f_min: f64,
}

/// Locates the unique interior minimum of f for ρ < 2.
///
/// There [ln f]′ starts at −γ(2−ρ)Σλ < 0, is strictly increasing, and grows
/// without bound, so it has exactly one zero; the zero is bracketed by
/// doubling from 10⁻⁸ and then bisected to floating-point resolution.
/// Errors with [`Error::Hypothesis`] when ρ ≥ 2 and with
/// [`Error::BracketNotFound`] when no sign change lies in [10⁻⁸, 10⁸].
pub fn find_minimum(cfg: &RatioConfig) -> Result<Minimum> {
    if !(cfg.rho() < 2.0) {
        return Err(Error::Hypothesis("find_minimum requires rho < 2"));
    }
    const BRACKET_LO: f64 = 1e-8;
    const BRACKET_HI: f64 = 1e8;
    let mut lo = BRACKET_LO;
    let g_lo = dlog_f(cfg, lo)?;
    if g_lo > 0.0 {
        return Err(Error::BracketNotFound {
            lo: BRACKET_LO,
            hi: BRACKET_HI,
        });
    }
    let mut hi = lo;
    if g_lo < 0.0 {
        loop {
            hi *= 2.0;
            if hi > BRACKET_HI {
                return Err(Error::BracketNotFound {
                    lo: BRACKET_LO,
                    hi: BRACKET_HI,
                });
            }
            let g = dlog_f(cfg, hi)?;
            if g >= 0.0 {
                break;
            }
            lo = hi;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let g = dlog_f(cfg, mid)?;
            if g == 0.0 {
                lo = mid;
                hi = mid;
                break;
            } else if g < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let t_star = 0.5 * (lo + hi);
    Ok(Minimum {
        t_star,
        f_min: exp_checked(log_f(cfg, t_star)?)?,
    })
}

/// A sampled view of the Laplace density d(u) on a geometric grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    /// Strictly increasing grid of evaluation points.
    pub u_grid: Vec<f64>,
    /// d(u) at each grid point.
    pub values: Vec<f64>,
    /// The grid's upper end, chosen so the mass beyond it is negligible.
    pub truncation_u: f64,
    /// Analytic bound on ∫ beyond `truncation_u` of |d|.
    pub tail_bound: f64,
}

/// Samples d(u) on a geometric grid of `points` points.
///
/// The upper end U is grown until the tail mass bound drops below
/// `tail_rel_tol` times the total mass |[ln f]″(0⁺)|; the lower end sits
/// eight decades below U.
pub fn density_profile(cfg: &RatioConfig, points: usize, tail_rel_tol: f64) -> Result<DensityProfile> {
    if points < 2 {
        return Err(Error::Domain {
            func: "density_profile",
            arg: points as f64,
        });
    }
    if !(tail_rel_tol > 0.0) {
        return Err(Error::Domain {
            func: "density_profile",
            arg: tail_rel_tol,
        });
    }
    let mass = abs(d2log_f_limit_at_zero(cfg)).max(f64::MIN_POSITIVE);
    let (upper, tail_bound) = grow_truncation(cfg.slowest_scale(), tail_rel_tol * mass, |u| {
        density_tail_bound(cfg, u, 0.0)
    })?;
    let lower = upper * 1e-8;
    let ratio = ln(upper / lower) / (points - 1) as f64;
    let mut u_grid = Vec::with_capacity(points);
    let mut values = Vec::with_capacity(points);
    for k in 0..points {
        // Pin the last point to U exactly; exp/ln round-tripping may miss it
        // by an ulp otherwise.
        let u = if k + 1 == points {
            upper
        } else {
            lower * exp(ratio * k as f64)
        };
        u_grid.push(u);
        values.push(u * levy_raw(cfg, u));
    }
    // Guard against rounding at the top end: the grid must be increasing.
    debug_assert!(u_grid.windows(2).all(|w| w[0] < w[1]));
    Ok(DensityProfile {
        u_grid,
        values,
        truncation_u: upper,
        tail_bound,
    })
}

//! Finite-order monotonicity harness: complete-monotonicity, Bernstein,
//! logarithmic complete-monotonicity, and log-convexity checks over grids,
//! for any scalar function supplied as a derivative handle.
//!
//! Full complete monotonicity quantifies over all derivative orders and all
//! points, which no finite computation can decide; what the harness
//! certifies is the strongest honestly testable statement — "the signed
//! derivatives clear the tolerance for every order k ≤ K at every grid
//! point". Handles are `(t, k) → f⁽ᵏ⁾(t)` and may be fallible; failures are
//! reported with the offending grid point attached.

use alloc::vec::Vec;
use core::fmt;

use crate::math::{exp, ln};

/// Outcome of a grid check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Every order cleared the tolerance at every grid point.
    Pass,
    /// At least one signed derivative fell below the tolerance.
    Fail,
}

/// The first grid point at which a check failed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Failure {
    /// Derivative order at which the failure occurred.
    pub order: usize,
    /// Grid point.
    pub t: f64,
    /// The signed value that fell below tolerance.
    pub value: f64,
}

/// Report of a completely-monotone / Bernstein / log-CM grid check.
///
/// `min_slack_per_order[k]` is the smallest signed derivative seen at order
/// k across the grid, and `scale_per_order[k]` the relative scale
/// max(1, |f⁽ᵏ⁾|) at that same point, so the verdict is reproducible from
/// the report: pass iff `min_slack ≥ −tolerance·scale` order by order (and
/// no other point failed its own pointwise version of the same test).
#[derive(Debug, Clone, PartialEq)]
pub struct CMReport {
    /// Highest derivative order checked (K).
    pub max_order: usize,
    /// The grid on which the check ran.
    pub grid: Vec<f64>,
    /// Worst signed derivative per order, length K+1.
    pub min_slack_per_order: Vec<f64>,
    /// Relative scale at each order's worst point, length K+1.
    pub scale_per_order: Vec<f64>,
    /// The relative tolerance the check ran with.
    pub tolerance: f64,
    /// Overall outcome.
    pub verdict: Verdict,
    /// First failing point in (order, grid) iteration order, if any.
    pub first_failure: Option<Failure>,
}

/// Error from a grid check: either the grid itself was unusable or the
/// handle failed at some point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HarnessError<E> {
    /// The grid was empty, nonpositive, or not strictly increasing.
    InvalidGrid(&'static str),
    /// The handle returned an error at grid point `t`, order `order`.
    Eval { t: f64, order: usize, source: E },
}

impl<E: fmt::Display> fmt::Display for HarnessError<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            HarnessError::Eval { t, order, source } => {
                write!(f, "handle failed at t = {t}, order {order}: {source}")
            }
        }
    }
}

impl<E: core::error::Error + 'static> core::error::Error for HarnessError<E> {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            HarnessError::InvalidGrid(_) => None,
            HarnessError::Eval { source, .. } => Some(source),
        }
    }
}

fn validate_grid<E>(grid: &[f64]) -> Result<(), HarnessError<E>> {
    if grid.is_empty() {
        return Err(HarnessError::InvalidGrid("grid must not be empty"));
    }
    if grid.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(HarnessError::InvalidGrid("grid points must be strictly positive and finite"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HarnessError::InvalidGrid("grid must be strictly increasing"));
    }
    Ok(())
}

/// Shared sweep: for each order k = 0..=K and grid point t, compute the
/// signed value `sign(k)·f(t, map(k))` and fold the worst case per order.
/// Orders for which `sign` returns `None` are recorded as vacuous zeros.
fn sweep<F, E>(
    mut f: F,
    max_order: usize,
    grid: &[f64],
    tol: f64,
    signed: impl Fn(usize) -> Option<f64>,
) -> Result<CMReport, HarnessError<E>>
where
    F: FnMut(f64, usize) -> Result<f64, E>,
{
    validate_grid(grid)?;
    let mut min_slack = Vec::with_capacity(max_order + 1);
    let mut scales = Vec::with_capacity(max_order + 1);
    let mut first_failure = None;
    for order in 0..=max_order {
        let Some(sign) = signed(order) else {
            min_slack.push(0.0);
            scales.push(1.0);
            continue;
        };
        let mut worst = f64::INFINITY;
        let mut worst_scale = 1.0;
        for &t in grid {
            let raw = f(t, order).map_err(|source| HarnessError::Eval { t, order, source })?;
            let value = sign * raw;
            let scale = raw.abs().max(1.0);
            if value < -tol * scale && first_failure.is_none() {
                first_failure = Some(Failure { order, t, value });
            }
            if value < worst {
                worst = value;
                worst_scale = scale;
            }
        }
        min_slack.push(worst);
        scales.push(worst_scale);
    }
    let verdict = if first_failure.is_none() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CMReport {
        max_order,
        grid: grid.to_vec(),
        min_slack_per_order: min_slack,
        scale_per_order: scales,
        tolerance: tol,
        verdict,
        first_failure,
    })
}

/// Checks (−1)ᵏ f⁽ᵏ⁾(t) ≥ −tol·max(1, |f⁽ᵏ⁾(t)|) for k = 0..=K over the grid.
pub fn check_cm<F, E>(f: F, max_order: usize, grid: &[f64], tol: f64) -> Result<CMReport, HarnessError<E>>
where
    F: FnMut(f64, usize) -> Result<f64, E>,
{
    sweep(f, max_order, grid, tol, |k| {
        Some(if k.is_multiple_of(2) { 1.0 } else { -1.0 })
    })
}

/// Checks the Bernstein property: f ≥ 0 and f′ completely monotone, i.e.
/// (−1)^{k−1} f⁽ᵏ⁾(t) ≥ 0 for k = 1..=K together with f(t) ≥ 0 at order 0.
pub fn check_bernstein<F, E>(f: F, max_order: usize, grid: &[f64], tol: f64) -> Result<CMReport, HarnessError<E>>
where
    F: FnMut(f64, usize) -> Result<f64, E>,
{
    sweep(f, max_order, grid, tol, |k| {
        Some(if k == 0 || k % 2 == 1 { 1.0 } else { -1.0 })
    })
}

/// Checks logarithmic complete monotonicity: (−1)ᵏ [ln f]⁽ᵏ⁾(t) ≥ 0 for
/// k = 1..=K. The handle supplies log-derivatives; order 0 imposes nothing
/// (the definition only constrains k ≥ 1) and is recorded as a vacuous 0.
pub fn check_log_cm<F, E>(f_log: F, max_order: usize, grid: &[f64], tol: f64) -> Result<CMReport, HarnessError<E>>
where
    F: FnMut(f64, usize) -> Result<f64, E>,
{
    sweep(f_log, max_order, grid, tol, |k| {
        if k == 0 {
            None
        } else {
            Some(if k.is_multiple_of(2) { 1.0 } else { -1.0 })
        }
    })
}

/// Report of a midpoint log-convexity check.
#[derive(Debug, Clone, PartialEq)]
pub struct LogConvexReport {
    /// The grid on which the check ran.
    pub grid: Vec<f64>,
    /// Smallest value of (g(t₁)+g(t₂))/2 − g((t₁+t₂)/2) over grid pairs.
    pub worst_slack: f64,
    /// The pair attaining the worst slack.
    pub worst_pair: (f64, f64),
    /// The relative tolerance the check ran with.
    pub tolerance: f64,
    /// Overall outcome.
    pub verdict: Verdict,
}

/// Midpoint convexity of a scalar handle g = ln f over all grid pairs:
/// g((t₁+t₂)/2) ≤ (g(t₁)+g(t₂))/2 within tol·max(1, |g| at the three points).
pub fn check_log_convex<F, E>(mut g: F, grid: &[f64], tol: f64) -> Result<LogConvexReport, HarnessError<E>>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    validate_grid(grid)?;
    let mut values = Vec::with_capacity(grid.len());
    for &t in grid {
        values.push(g(t).map_err(|source| HarnessError::Eval { t, order: 0, source })?);
    }
    let mut worst_slack = f64::INFINITY;
    let mut worst_pair = (grid[0], grid[0]);
    let mut pass = true;
    for i in 0..grid.len() {
        for j in (i + 1)..grid.len() {
            let mid = 0.5 * (grid[i] + grid[j]);
            let g_mid = g(mid).map_err(|source| HarnessError::Eval {
                t: mid,
                order: 0,
                source,
            })?;
            let slack = 0.5 * (values[i] + values[j]) - g_mid;
            let scale = values[i].abs().max(values[j].abs()).max(g_mid.abs()).max(1.0);
            if slack < -tol * scale {
                pass = false;
            }
            if slack < worst_slack {
                worst_slack = slack;
                worst_pair = (grid[i], grid[j]);
            }
        }
    }
    Ok(LogConvexReport {
        grid: grid.to_vec(),
        worst_slack,
        worst_pair,
        tolerance: tol,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
    })
}

/// `points` geometrically spaced values spanning [lo, hi].
pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> crate::Result<Vec<f64>> {
    if !(lo > 0.0) || !hi.is_finite() || hi <= lo {
        return Err(crate::Error::Domain {
            func: "geometric_grid",
            arg: hi - lo,
        });
    }
    if points < 2 {
        return Err(crate::Error::Domain {
            func: "geometric_grid",
            arg: points as f64,
        });
    }
    let step = ln(hi / lo) / (points - 1) as f64;
    Ok((0..points)
        .map(|k| if k + 1 == points { hi } else { lo * exp(step * k as f64) })
        .collect())
}

/// The default grid: 50 geometric points covering [10⁻³, 10³], wide enough
/// to see both the t → 0 and t → ∞ regimes.
pub fn default_grid() -> Vec<f64> {
    geometric_grid(1e-3, 1e3, 50).expect("constants are valid")
}

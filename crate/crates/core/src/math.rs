//! Float math routed through `libm` so the crate builds without `std` and
//! produces identical bits whether or not the host links the system libm.

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn exp_m1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn powf(x: f64, e: f64) -> f64 {
    libm::pow(x, e)
}

/// Integer power by repeated squaring; exact products only, no `pow` calls.
pub(crate) fn powi(x: f64, n: i32) -> f64 {
    if n < 0 {
        return 1.0 / powi(x, -n);
    }
    let mut base = x;
    let mut exp = n as u32;
    let mut out = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            out *= base;
        }
        base *= base;
        exp >>= 1;
    }
    out
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powi_matches_repeated_multiplication() {
        assert_eq!(powi(3.0, 0), 1.0);
        assert_eq!(powi(3.0, 1), 3.0);
        assert_eq!(powi(3.0, 4), 81.0);
        assert_eq!(powi(2.0, -3), 0.125);
        assert_eq!(powi(10.0, 8), 1e8);
    }

    #[test]
    fn wrappers_agree_with_std() {
        for &x in &[0.1, 1.0, 2.5, 10.0] {
            assert!((exp(x) - f64::exp(x)).abs() < 1e-15 * f64::exp(x));
            assert!((ln(x) - f64::ln(x)).abs() < 1e-15);
            assert!((sqrt(x) - f64::sqrt(x)).abs() < 1e-15);
        }
        assert!((exp_m1(1e-9) - 1e-9).abs() < 1e-18);
        assert!((powf(2.0, 0.5) - f64::sqrt(2.0)).abs() < 1e-15);
        assert_eq!(abs(-2.5), 2.5);
    }
}

//! Log-gamma and the complete Beta function.

use crate::error::{Error, Result};

/// Natural log of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("log_gamma", x));
    }
    Ok(libm::lgamma_r(x).0)
}

/// `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    Ok(ln_beta(a, b)?.exp())
}

/// `ln B(a, b)`, accurate when one argument is huge and the other is not.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain("ln_beta", a));
    }
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::domain("ln_beta", b));
    }
    Ok(ln_beta_unchecked(a, b))
}

pub(crate) fn ln_beta_unchecked(a: f64, b: f64) -> f64 {
    let (small, big) = if a <= b { (a, b) } else { (b, a) };
    if big < STIRLING_MIN {
        return lgamma(small) + lgamma(big) - lgamma(small + big);
    }
    lgamma(small) + ln_gamma_ratio(big, small)
}

fn lgamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

const STIRLING_MIN: f64 = 8.0;

/// `ln Γ(b) − ln Γ(b + a)` for `b >= 8`, without the catastrophic
/// cancellation of subtracting two large log-gammas.
pub(crate) fn ln_gamma_ratio(b: f64, a: f64) -> f64 {
    let apb = a + b;
    -(b - 0.5) * (a / b).ln_1p() - a * apb.ln() + a + stirling_tail(b) - stirling_tail(apb)
}

/// `ln Γ(x) − [(x − ½) ln x − x + ½ ln 2π]` for `x >= 8`.
fn stirling_tail(x: f64) -> f64 {
    const C: [f64; 7] =
        [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0];
    let r = 1.0 / x;
    let r2 = r * r;
    let mut acc = 0.0;
    for c in C.iter().rev() {
        acc = acc * r2 + c;
    }
    acc * r
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn log_gamma_spot_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        assert!(rel(log_gamma(5.0).unwrap(), 24f64.ln()) < 1e-15);
        assert!(rel(log_gamma(0.5).unwrap(), PI.sqrt().ln()) < 1e-15);
    }

    #[test]
    fn log_gamma_against_mpmath() {
        // mpmath.loggamma at 40 digits
        let cases = [
            (1e-6, 13.815509980749431669),
            (0.1, 2.2527126517342059599),
            (3.7, 1.4280723266653879219),
            (17.25, 31.37462231367768648),
            (1234.5, 7550.5509010778948957),
            (1e6, 12815504.56914761166),
        ];
        for (x, want) in cases {
            let got = log_gamma(x).unwrap();
            assert!(rel(got, want) <= 1e-14, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn log_gamma_rejects_bad_input() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
        assert!(log_gamma(f64::INFINITY).is_err());
    }

    #[test]
    fn beta_spot_values() {
        assert!(rel(beta_fn(1.0, 1.0).unwrap(), 1.0) < 1e-15);
        assert!(rel(beta_fn(0.5, 0.5).unwrap(), PI) < 1e-14);
        assert!(rel(beta_fn(0.5, 1.0).unwrap(), 2.0) < 1e-14);
        assert!(beta_fn(0.0, 1.0).is_err());
    }

    #[test]
    fn ln_beta_large_second_argument() {
        // mpmath.log(mpmath.beta(0.5, b))
        let cases = [
            (9.5, -0.54012911635950104157),
            (99.5, -1.7264576030376242197),
            (999_999.5, -6.3353899610573119649),
            (1e7 - 0.5, -7.486682845054458557),
        ];
        for (b, want) in cases {
            let got = ln_beta(0.5, b).unwrap();
            assert!(rel(got, want) <= 1e-14, "b={b}: {got} vs {want}");
        }
    }

    #[test]
    fn stirling_branch_matches_direct_sum_at_switch() {
        for &(a, b) in &[(0.5, 8.0), (2.5, 8.5), (0.01, 12.0), (3.0, 40.0)] {
            let direct = lgamma(a) + lgamma(b) - lgamma(a + b);
            let split = ln_beta_unchecked(a, b);
            assert!((direct - split).abs() < 1e-13, "({a},{b}): {direct} vs {split}");
        }
    }
}

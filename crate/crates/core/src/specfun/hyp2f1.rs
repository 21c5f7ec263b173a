//! Gauss hypergeometric function on the incomplete-beta slice `c = a + 1`.
//!
//! `z·₂F₁(½, k; 3/2; −w z²)` integrates a heavy-tailed q-Gaussian kernel and
//! `(x^m/m)·₂F₁(m, 1−n; m+1; x)` is the unregularized incomplete beta; both
//! have `c = a + 1`, which is the only shape accepted here.

use crate::error::{Error, Result};

const SERIES_MAX_TERMS: usize = 2_000_000;

/// `₂F₁(a, b; c; z)` for `c = a + 1`, `a > 0`, `z < 1`.
///
/// Negative `z` is first mapped into `(0, 1)` with the Pfaff transformation
/// `₂F₁(a,b;c;z) = (1−z)^{−a} ₂F₁(a, c−b; c; z/(z−1))`.
pub fn gauss_2f1_restricted(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if z == 0.0 && a.is_finite() && b.is_finite() && c.is_finite() {
        return Ok(1.0);
    }
    let shape_ok = a > 0.0 && (c - (a + 1.0)).abs() <= 1e-14 * c.abs().max(1.0);
    if !shape_ok || !(z < 1.0) || !b.is_finite() || !z.is_finite() {
        return Err(Error::Unsupported(format!(
            "2F1({a}, {b}; {c}; {z}) is outside the c = a + 1, a > 0, z < 1 slice"
        )));
    }
    if z < 0.0 {
        let w = z / (z - 1.0);
        Ok((-a * (-z).ln_1p()).exp() * power_series(a, c - b, c, w)?)
    } else {
        power_series(a, b, c, z)
    }
}

/// Plain Gauss series `Σ (a)ₙ(b)ₙ/((c)ₙ n!) zⁿ` for `|z| < 1`.
pub fn power_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(z.abs() < 1.0) {
        return Err(Error::Unsupported(format!("power series needs |z| < 1, got {z}")));
    }
    if c <= 0.0 && c.fract() == 0.0 {
        return Err(Error::Unsupported(format!("c = {c} is a non-positive integer")));
    }
    let mut sum = 1.0;
    let mut comp = 0.0;
    let mut term = 1.0;
    let mut small_run = 0;
    for n in 0..SERIES_MAX_TERMS {
        let n = n as f64;
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        if term == 0.0 {
            return Ok(sum);
        }
        // Kahan summation; the tail near |z| → 1 has many small terms.
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.abs() <= 1e-17 * sum.abs() {
            small_run += 1;
            if small_run >= 3 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NoConvergence { what: "hypergeometric series", iterations: SERIES_MAX_TERMS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_argument_is_one() {
        assert_eq!(gauss_2f1_restricted(0.3, 7.0, 2.0, 0.0).unwrap(), 1.0);
        assert_eq!(gauss_2f1_restricted(0.5, 1.0, 1.5, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn arctan_identity() {
        // ₂F₁(½, 1; 3/2; −z²) = arctan(z)/z
        let v = gauss_2f1_restricted(0.5, 1.0, 1.5, -1.0).unwrap();
        assert!((v - PI / 4.0).abs() < 1e-14);
        for &z in &[0.1, 0.7, 2.0, 5.0] {
            let v = gauss_2f1_restricted(0.5, 1.0, 1.5, -z * z).unwrap();
            let want = z.atan() / z;
            assert!(((v - want) / want).abs() < 1e-12, "z={z}");
        }
    }

    #[test]
    fn arcsin_identity() {
        // ₂F₁(½, ½; 3/2; z²) = arcsin(z)/z
        let v = gauss_2f1_restricted(0.5, 0.5, 1.5, 0.25).unwrap();
        assert!((v - PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn pfaff_transformation_agrees_with_direct_series() {
        for &(a, b) in &[(0.5, 1.0), (0.5, 2.5), (0.5, 0.1), (1.3, -0.4), (2.0, 3.7)] {
            let c = a + 1.0;
            for i in 1..10 {
                let z = -(i as f64) / 10.0;
                let direct = power_series(a, b, c, z).unwrap();
                let pfaff = (1.0 - z).powf(-a) * power_series(a, c - b, c, z / (z - 1.0)).unwrap();
                assert!(((direct - pfaff) / direct).abs() <= 1e-10, "a={a} b={b} z={z}");
            }
        }
    }

    #[test]
    fn rejects_general_parameters() {
        assert!(gauss_2f1_restricted(0.5, 1.0, 2.0, -0.5).is_err());
        assert!(gauss_2f1_restricted(0.5, 1.0, 1.5, 1.0).is_err());
        assert!(gauss_2f1_restricted(-0.5, 1.0, 0.5, 0.3).is_err());
        assert!(power_series(1.0, 1.0, 2.0, 1.5).is_err());
        assert!(power_series(1.0, 1.0, -2.0, 0.5).is_err());
    }
}

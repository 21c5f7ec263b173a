//! Error function, its complement, and their inverses.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Inverse of [`erf`] on `(−1, 1)`.
pub fn inv_erf(y: f64) -> Result<f64> {
    if !(y.abs() < 1.0) {
        return Err(Error::domain("inv_erf", y));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let t = y.abs();
    let x = if t <= 0.5 {
        let seed = giles_seed(t, -((1.0 - t) * (1.0 + t)).ln());
        halley(seed, 1.0, |x| erf(x) - t)
    } else {
        // 1 − t is exact here
        inv_erfc_unchecked(1.0 - t)
    };
    Ok(x.copysign(y))
}

/// Inverse of [`erfc`] on `(0, 2)`.
pub fn inv_erfc(y: f64) -> Result<f64> {
    if !(y > 0.0 && y < 2.0) {
        return Err(Error::domain("inv_erfc", y));
    }
    Ok(inv_erfc_unchecked(y))
}

fn inv_erfc_unchecked(y: f64) -> f64 {
    if y > 1.0 {
        return -inv_erfc_unchecked(2.0 - y);
    }
    if y == 1.0 {
        return 0.0;
    }
    let w = -(y * (2.0 - y)).ln();
    let seed = if w < 25.0 {
        giles_seed(1.0 - y, w)
    } else {
        // erfc(x) ≈ e^{−x²}/(x√π); the polynomial seed is not fitted out here
        let ln_y = y.ln();
        let mut x = (-ln_y).sqrt();
        for _ in 0..4 {
            x = (-ln_y - (x * PI.sqrt()).ln()).sqrt();
        }
        x
    };
    halley(seed, -1.0, |x| erfc(x) - y)
}

/// Single-precision erfinv approximation; `w = −ln(1 − t²)` is passed in so
/// the caller can form it without cancellation.
fn giles_seed(t: f64, w: f64) -> f64 {
    let p = if w < 5.0 {
        let w = w - 2.5;
        [
            2.810_226_36e-08,
            3.432_739_39e-07,
            -3.523_387_7e-06,
            -4.391_506_54e-06,
            0.000_218_580_87,
            -0.001_253_725_03,
            -0.004_177_681_64,
            0.246_640_727,
            1.501_409_41,
        ]
        .iter()
        .fold(0.0, |acc, c| acc * w + c)
    } else {
        let w = w.sqrt() - 3.0;
        [
            -0.000_200_214_257,
            0.000_100_950_558,
            0.001_349_343_22,
            -0.003_673_428_44,
            0.005_739_507_73,
            -0.007_622_461_3,
            0.009_438_870_47,
            1.001_674_06,
            2.832_976_82,
        ]
        .iter()
        .fold(0.0, |acc, c| acc * w + c)
    };
    p * t
}

/// Halley refinement for `erf(x) − y` (`sign = 1`) or `erfc(x) − y`
/// (`sign = −1`). Both have second derivative `−2x` times the first.
fn halley(mut x: f64, sign: f64, f: impl Fn(f64) -> f64) -> f64 {
    let two_over_sqrt_pi = 2.0 / PI.sqrt();
    for _ in 0..12 {
        let fx = f(x);
        let dfx = sign * two_over_sqrt_pi * (-x * x).exp();
        if dfx == 0.0 || fx == 0.0 {
            break;
        }
        let u = fx / dfx;
        let step = u / (1.0 + x * u);
        x -= step;
        if step.abs() <= 1e-16 * x.abs() {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        assert_eq!(erf(0.0), 0.0);
        assert_eq!(erf(10.0), 1.0);
        // Taylor series at 40 digits (mpmath)
        assert!((erf(1.0) - 0.842_700_792_949_714_9).abs() < 1e-15);
        assert!((erf(-1.0) + erf(1.0)).abs() == 0.0);
    }

    #[test]
    fn inverse_domain() {
        assert!(inv_erf(1.0).is_err());
        assert!(inv_erf(-1.0).is_err());
        assert!(inv_erf(f64::NAN).is_err());
        assert!(inv_erfc(0.0).is_err());
        assert!(inv_erfc(2.0).is_err());
        assert_eq!(inv_erf(0.0).unwrap(), 0.0);
    }

    #[test]
    fn mutual_inverse() {
        for i in -999..=999 {
            let y = i as f64 / 1000.0;
            let x = inv_erf(y).unwrap();
            assert!((erf(x) - y).abs() <= 1e-12, "y={y}");
            assert_eq!(inv_erf(-y).unwrap(), -x);
        }
        // beyond |x| ≈ 2.5 the slope of erf makes x ill-conditioned in y
        for i in -25..=25 {
            let x = i as f64 / 10.0;
            let back = inv_erf(erf(x)).unwrap();
            assert!((back - x).abs() <= 1e-12, "x={x}");
        }
    }

    #[test]
    fn erfc_inverse_far_tail() {
        for &y in &[1e-10, 1e-50, 1e-200, 1e-300, 0.3, 1.7] {
            let x = inv_erfc(y).unwrap();
            assert!(((erfc(x) - y) / y).abs() < 1e-13, "y={y} x={x}");
        }
    }
}

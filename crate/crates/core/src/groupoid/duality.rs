//! The involution `f(q) = (7 − 5q)/(5 − 3q)`, which exchanges the
//! compact-support indices `q ≤ 1` with the finite-variance band `[1, 5/3]`.

use num_rational::Ratio;

use crate::error::{Error, Result};

/// `f(q)` in floating point. `−∞` maps to its limit `5/3`.
///
/// Near the pole at `5/3` the slope of `f` is large, so `f(f(q))` carries
/// the rounding of the inner value amplified by `f'`. Use
/// [`duality_exact`] when the involution must hold exactly.
pub fn duality(q: f64) -> Result<f64> {
    if q.is_nan() {
        return Err(Error::domain("duality", q));
    }
    if q == f64::NEG_INFINITY {
        return Ok(5.0 / 3.0);
    }
    if q == 5.0 / 3.0 {
        return Err(Error::domain("duality pole", q));
    }
    if q > 5.0 / 3.0 {
        return Err(Error::domain("duality", q));
    }
    Ok((7.0 - 5.0 * q) / (5.0 - 3.0 * q))
}

/// `f(q)` on rationals, exact.
pub fn duality_exact(q: Ratio<i64>) -> Result<Ratio<i64>> {
    let pole = Ratio::new(5, 3);
    if q == pole {
        return Err(Error::domain("duality pole", 5.0 / 3.0));
    }
    if q > pole {
        return Err(Error::domain("duality", *q.numer() as f64 / *q.denom() as f64));
    }
    let (seven, five, three) = (Ratio::from(7), Ratio::from(5), Ratio::from(3));
    Ok((seven - five * q) / (five - three * q))
}

//! The q-Gaussian family `G_q(x) = [1 − (1−q)βx²]^{1/(1−q)} / Z_q` for
//! every normalizable index `q < 3`.
//!
//! Three regimes share one interface. For `q < 1` the density has compact
//! support `|x| ≤ L = 1/√((1−q)β)`; for `1 < q < 3` it has power-law tails;
//! within [`GAUSSIAN_BRIDGE_WIDTH`] of 1 the exponential limit is used.
//!
//! Probabilities that matter in the tails are carried as [`Complementary`]
//! pairs, so a mass of `1 − 1e-40` is not rounded to 1.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::specfun::{
    erf, erfc, inv_erf, inv_erfc, inv_reg_inc_beta_pair, reg_inc_beta_pair, BetaParams, Complementary,
};

/// Half-width of the band around `q = 1` treated as exactly Gaussian.
pub const GAUSSIAN_BRIDGE_WIDTH: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Compact,
    Gaussian,
    HeavyTail,
}

/// A validated entropic index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QIndex {
    q: f64,
    regime: Regime,
}

impl QIndex {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_nan() || q == f64::NEG_INFINITY {
            return Err(Error::domain("q", q));
        }
        if q >= 3.0 {
            return Err(Error::NotNormalizable(q));
        }
        let regime = if (q - 1.0).abs() <= GAUSSIAN_BRIDGE_WIDTH {
            Regime::Gaussian
        } else if q < 1.0 {
            Regime::Compact
        } else {
            Regime::HeavyTail
        };
        Ok(Self { q, regime })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Beta parameters of the half-line mass, `None` in the Gaussian band.
    pub fn beta_params(&self) -> Option<BetaParams> {
        match self.regime {
            Regime::Compact => BetaParams::compact(self.q).ok(),
            Regime::HeavyTail => BetaParams::heavy_tail(self.q).ok(),
            Regime::Gaussian => None,
        }
    }
}

/// `ln Z_q` at scale β.
fn ln_norm(index: QIndex, beta: f64) -> f64 {
    let q = index.q;
    match index.beta_params() {
        // Z = B(a, b) / √(|q−1|β) in both power-law regimes
        Some(p) => p.ln_beta() - 0.5 * ((q - 1.0).abs() * beta).ln(),
        None => 0.5 * (std::f64::consts::PI / beta).ln(),
    }
}

/// Normalization `Z_q` of the density at scale `beta`.
pub fn norm_const(index: QIndex, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain("beta", beta));
    }
    Ok(ln_norm(index, beta).exp())
}

/// One member of the family. Immutable after construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QGaussian {
    index: QIndex,
    beta_scale: f64,
    norm: f64,
    #[serde(skip)]
    ln_norm: f64,
    /// `L` for compact support, `+∞` otherwise.
    support_bound: f64,
}

impl QGaussian {
    pub fn new(index: QIndex, beta_scale: f64) -> Result<Self> {
        let norm = norm_const(index, beta_scale)?;
        let support_bound = match index.regime {
            Regime::Compact => 1.0 / ((1.0 - index.q) * beta_scale).sqrt(),
            _ => f64::INFINITY,
        };
        Ok(Self { index, beta_scale, norm, ln_norm: ln_norm(index, beta_scale), support_bound })
    }

    /// `β = 1`.
    pub fn standard(q: f64) -> Result<Self> {
        Self::new(QIndex::new(q)?, 1.0)
    }

    pub fn index(&self) -> QIndex {
        self.index
    }

    pub fn q(&self) -> f64 {
        self.index.q
    }

    pub fn beta_scale(&self) -> f64 {
        self.beta_scale
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn support_bound(&self) -> f64 {
        self.support_bound
    }

    /// `|q − 1|·β`, the factor in front of `x²`.
    fn curvature(&self) -> f64 {
        (self.index.q - 1.0).abs() * self.beta_scale
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let q = self.index.q;
        let ln_kernel = match self.index.regime {
            Regime::Gaussian => -self.beta_scale * x * x,
            Regime::HeavyTail => {
                let c = self.curvature();
                // large |x|: ln(1 + c x²) without overflowing x²
                let ln_base = if x.abs() > 1e150 {
                    c.ln() + 2.0 * x.abs().ln() + (1.0 / (c * x * x)).ln_1p()
                } else {
                    (c * x * x).ln_1p()
                };
                -ln_base / (q - 1.0)
            }
            Regime::Compact => {
                let s = self.curvature().sqrt() * x.abs();
                if s >= 1.0 {
                    return 0.0;
                }
                ((-s).ln_1p() + s.ln_1p()) / (1.0 - q)
            }
        };
        (ln_kernel - self.ln_norm).exp()
    }

    /// `P(|X| ≤ t)` for `t ≥ 0` as a complementary pair.
    pub fn half_mass(&self, t: f64) -> Complementary {
        let t = t.abs();
        if t == 0.0 {
            return Complementary::ZERO;
        }
        match self.index.regime {
            Regime::Gaussian => {
                if t == f64::INFINITY {
                    return Complementary::ONE;
                }
                let s = self.beta_scale.sqrt() * t;
                pair(erf(s), erfc(s))
            }
            Regime::HeavyTail => {
                if t == f64::INFINITY {
                    return Complementary::ONE;
                }
                let u = self.curvature() * t * t;
                let x = if u.is_finite() { pair(u / (1.0 + u), 1.0 / (1.0 + u)) } else { Complementary::ONE };
                self.beta(|p| reg_inc_beta_pair(x, p))
            }
            Regime::Compact => {
                let s = self.curvature().sqrt() * t;
                if s >= 1.0 {
                    return Complementary::ONE;
                }
                let x = pair(s * s, (1.0 - s) * (1.0 + s));
                self.beta(|p| reg_inc_beta_pair(x, p))
            }
        }
    }

    /// Inverse of [`half_mass`](Self::half_mass): the `t ≥ 0` enclosing the
    /// given central mass. Mass 1 maps to the support bound.
    pub fn half_quantile(&self, mass: Complementary) -> Result<f64> {
        if mass.value() == 0.0 {
            return Ok(0.0);
        }
        if mass.complement() == 0.0 {
            return Ok(self.support_bound);
        }
        match self.index.regime {
            Regime::Gaussian => {
                let s = if mass.value() <= 0.5 { inv_erf(mass.value())? } else { inv_erfc(mass.complement())? };
                Ok(s / self.beta_scale.sqrt())
            }
            Regime::HeavyTail => {
                let x = self.index.beta_params().map(|p| inv_reg_inc_beta_pair(mass, p)).unwrap()?;
                if x.complement() == 0.0 {
                    return Ok(f64::INFINITY);
                }
                let u = x.value() / x.complement();
                Ok((u / self.curvature()).sqrt())
            }
            Regime::Compact => {
                let x = self.index.beta_params().map(|p| inv_reg_inc_beta_pair(mass, p)).unwrap()?;
                Ok(self.support_bound * x.value().sqrt())
            }
        }
    }

    fn beta(&self, f: impl Fn(BetaParams) -> Result<Complementary>) -> Complementary {
        // x is always a valid pair here, so evaluation cannot fail
        self.index.beta_params().map(f).unwrap().unwrap()
    }

    /// `P(X ≤ z)` as a pair `(cdf, survival)`.
    pub fn cdf_pair(&self, z: f64) -> Complementary {
        if z.is_nan() {
            return pair(f64::NAN, f64::NAN);
        }
        let h = self.half_mass(z);
        let upper = pair(0.5 + 0.5 * h.value(), 0.5 * h.complement());
        if z < 0.0 {
            upper.flip()
        } else {
            upper
        }
    }

    pub fn cdf(&self, z: f64) -> f64 {
        self.cdf_pair(z).value()
    }

    /// Quantile of a probability given with its complement.
    pub fn quantile_pair(&self, p: Complementary) -> Result<f64> {
        let (v, c) = (p.value(), p.complement());
        if !(v > 0.0 && c > 0.0) {
            return Err(Error::domain("quantile probability", v));
        }
        if v == 0.5 {
            return Ok(0.0);
        }
        if v < 0.5 {
            Ok(-self.half_quantile(pair(1.0 - 2.0 * v, 2.0 * v))?)
        } else {
            self.half_quantile(pair(1.0 - 2.0 * c, 2.0 * c))
        }
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain("quantile probability", p));
        }
        self.quantile_pair(Complementary::new(p)?)
    }

    /// `n` draws, each the quantile of a uniform from ChaCha20 seeded with
    /// `seed`. The uniform stream is generated in order and the quantiles are
    /// mapped in parallel, so the output does not depend on the thread count.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::domain("sample size", 0.0));
        }
        par::par_map(&uniforms(n, seed), |&u| self.quantile_pair(u)).into_iter().collect()
    }
}

fn pair(value: f64, complement: f64) -> Complementary {
    Complementary::from_parts(value, complement)
}

/// The uniform stream behind [`QGaussian::sample`]: `u = (k + ½)·2⁻⁵²` with
/// `k` the top 52 bits of each ChaCha20 word. Both `u` and `1 − u` are
/// exact, and neither is ever 0.
pub fn uniforms(n: usize, seed: u64) -> Vec<Complementary> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let scale = (-52.0_f64).exp2();
    (0..n)
        .map(|_| {
            let k = (rng.next_u64() >> 12) as f64;
            pair((k + 0.5) * scale, (4_503_599_627_370_496.0 - k - 0.5) * scale)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn g(q: f64) -> QGaussian {
        QGaussian::standard(q).unwrap()
    }

    #[test]
    fn regime_classification() {
        assert_eq!(QIndex::new(1.0 + 5e-9).unwrap().regime(), Regime::Gaussian);
        assert_eq!(QIndex::new(1.0 - 2e-8).unwrap().regime(), Regime::Compact);
        assert_eq!(QIndex::new(2.999).unwrap().regime(), Regime::HeavyTail);
        assert_eq!(QIndex::new(3.0), Err(Error::NotNormalizable(3.0)));
        assert!(QIndex::new(f64::NAN).is_err());
        assert!(QIndex::new(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn normalization_values() {
        assert!((g(2.0).norm() - PI).abs() < 1e-14);
        assert!((g(5.0 / 3.0).norm() - 6f64.sqrt()).abs() < 1e-14);
        assert!((g(1.0).norm() - PI.sqrt()).abs() < 1e-15);
        for q in [1.0 - 1e-6, 1.0 + 1e-6] {
            assert!((g(q).norm() - PI.sqrt()).abs() < 1e-6, "q={q}");
        }
        // q = 0: G ∝ 1 − x² on [−1, 1], Z = 4/3
        assert!((g(0.0).norm() - 4.0 / 3.0).abs() < 1e-15);
        // β rescales Z by 1/√β
        let d = QGaussian::new(QIndex::new(2.0).unwrap(), 4.0).unwrap();
        assert!((d.norm() - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn pdf_values() {
        assert!((g(2.0).pdf(0.0) - 1.0 / PI).abs() < 1e-16);
        assert_eq!(g(0.5).pdf(2.0), 0.0);
        assert!((g(1.0).pdf(0.0) - 1.0 / PI.sqrt()).abs() < 1e-16);
        assert_eq!(g(2.0).pdf(3.0), g(2.0).pdf(-3.0));
        assert!(g(2.9).pdf(1e200) > 0.0);
    }

    #[test]
    fn cdf_values() {
        assert_eq!(g(2.0).cdf(0.0), 0.5);
        assert!((g(2.0).cdf(1.0) - 0.75).abs() < 1e-15);
        assert!((g(5.0 / 3.0).cdf(0.5f64.sqrt()) - 0.75).abs() < 1e-15);
        // q = 0: F(z) = 1/2 + (3z − z³)/4
        let z: f64 = 0.3;
        assert!((g(0.0).cdf(z) - (0.5 + (3.0 * z - z * z * z) / 4.0)).abs() < 1e-15);
        assert_eq!(g(0.0).cdf(1.5), 1.0);
        // the Cauchy survival keeps its digits far out
        let s = g(2.0).cdf_pair(1e10).complement();
        assert!((s - (1.0 / 1e10_f64).atan() / PI).abs() < 1e-24);
    }

    #[test]
    fn quantile_round_trip() {
        for q in [-5.0, 0.0, 0.5, 1.0, 1.2, 5.0 / 3.0, 2.0, 2.5, 2.9] {
            let d = g(q);
            for i in 1..1000 {
                let p = i as f64 / 1000.0;
                let x = d.quantile(p).unwrap();
                assert!((d.cdf(x) - p).abs() <= 1e-10, "q={q} p={p}");
                // 1 − p is itself rounded, so allow for that
                let mirrored = d.quantile(1.0 - p).unwrap();
                assert!((mirrored + x).abs() <= 1e-12 * x.abs().max(1.0), "q={q} p={p}");
            }
        }
        assert!((g(2.0).quantile(0.75).unwrap() - 1.0).abs() < 1e-14);
        assert!(g(2.0).quantile(0.0).is_err());
        assert!(g(2.0).quantile(1.0).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = g(2.0);
        assert_eq!(d.sample(1000, 7).unwrap(), d.sample(1000, 7).unwrap());
        assert_ne!(d.sample(1000, 7).unwrap(), d.sample(1000, 8).unwrap());
        assert!(d.sample(0, 7).is_err());
    }
}

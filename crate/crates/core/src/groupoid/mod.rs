//! Scaling maps `γ_{q'q}` between q-Gaussians and their composition algebra.
//!
//! Direction conventions, which are easy to get backwards:
//!
//! * As a morphism `γ_{q'q}` goes from its *source* `G_q` to its *target*
//!   `G_{q'}`.
//! * As a function of points it runs the other way: it takes `z` in the
//!   target's variable and returns `γ(z)` in the source's variable, with
//!   `∫₀^{γ(z)} G_q = ∫₀^z G_{q'}`. Concretely `γ = quantile_q ∘ cdf_{q'}`.
//! * [`compose`]`(left, right)` needs `left.source == right.target` and
//!   yields `source = right.source`, `target = left.target`. Pointwise it
//!   applies `left` first and `right` second.

mod duality;
mod table;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qgauss::{QGaussian, QIndex, Regime};
use crate::specfun::{inv_reg_inc_beta, reg_inc_beta};

pub use duality::{duality, duality_exact};
pub use table::{TableRow, ROW_MATCH_TOL};

/// How a map was built. Every non-composite strategy evaluates through the
/// same quantile/cdf identity; the label records which regime branch is
/// involved and, for [`Strategy::ClosedForm`], which elementary oracle
/// exists for the pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Identity,
    GeneralBeta,
    GaussianBridge,
    ClosedForm(TableRow),
    ExtendedCompact,
    Composite,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Identity => f.write_str("identity"),
            Strategy::GeneralBeta => f.write_str("general_beta"),
            Strategy::GaussianBridge => f.write_str("gaussian_bridge"),
            Strategy::ClosedForm(row) => write!(f, "closed_form({row})"),
            Strategy::ExtendedCompact => f.write_str("extended_compact"),
            Strategy::Composite => f.write_str("composite"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScalingMap {
    source: QGaussian,
    target: QGaussian,
    strategy: Strategy,
    /// Parts of a composite in pointwise evaluation order; empty otherwise.
    chain: Arc<[ScalingMap]>,
    /// Relative error injected into every output. Test-only negative control.
    fault: Option<f64>,
}

/// The map from `G_{source}` to `G_{target}`, both at `β = 1`.
pub fn make_map(source: QIndex, target: QIndex) -> Result<ScalingMap> {
    ScalingMap::between(QGaussian::new(source, 1.0)?, QGaussian::new(target, 1.0)?)
}

pub fn identity_map(q: QIndex) -> Result<ScalingMap> {
    make_map(q, q)
}

/// `left ∘ right`; see the module notes for the order.
pub fn compose(left: &ScalingMap, right: &ScalingMap) -> Result<ScalingMap> {
    if left.source != right.target {
        return Err(Error::CompositionUndefined { left_source: left.source.q(), right_target: right.target.q() });
    }
    let chain: Vec<ScalingMap> = left.parts().iter().chain(right.parts()).cloned().collect();
    Ok(ScalingMap {
        source: right.source,
        target: left.target,
        strategy: Strategy::Composite,
        chain: chain.into(),
        fault: None,
    })
}

/// The map with source and target exchanged.
pub fn inverse(map: &ScalingMap) -> ScalingMap {
    if map.strategy == Strategy::Composite {
        let chain: Vec<ScalingMap> = map.chain.iter().rev().map(inverse).collect();
        return ScalingMap {
            source: map.target,
            target: map.source,
            strategy: Strategy::Composite,
            chain: chain.into(),
            fault: None,
        };
    }
    let mut inv = ScalingMap::between(map.target, map.source).expect("both ends were valid for the forward map");
    inv.fault = map.fault;
    inv
}

impl ScalingMap {
    /// The map between two distributions of any scale. Closed-form rows are
    /// only recognized at `β = 1`, where they were derived.
    pub fn between(source: QGaussian, target: QGaussian) -> Result<Self> {
        let (s, t) = (source.index().regime(), target.index().regime());
        let unit = source.beta_scale() == 1.0 && target.beta_scale() == 1.0;
        let strategy = if source == target {
            Strategy::Identity
        } else if let Some(row) = unit.then(|| TableRow::find(source.q(), target.q())).flatten() {
            Strategy::ClosedForm(row)
        } else if s == Regime::Compact || t == Regime::Compact {
            Strategy::ExtendedCompact
        } else if s == Regime::Gaussian || t == Regime::Gaussian {
            Strategy::GaussianBridge
        } else {
            Strategy::GeneralBeta
        };
        Ok(Self { source, target, strategy, chain: Arc::new([]), fault: None })
    }

    /// A copy whose outputs are off by the relative amount `rel`.
    pub fn with_fault(mut self, rel: f64) -> Self {
        if self.strategy == Strategy::Composite {
            let chain: Vec<ScalingMap> = self.chain.iter().cloned().map(|m| m.with_fault(rel)).collect();
            self.chain = chain.into();
        } else {
            self.fault = Some(rel);
        }
        self
    }

    pub fn source(&self) -> &QGaussian {
        &self.source
    }

    pub fn target(&self) -> &QGaussian {
        &self.target
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// The elementary oracle for this pair, if there is one.
    pub fn closed_form(&self) -> Option<TableRow> {
        match self.strategy {
            Strategy::ClosedForm(row) => Some(row),
            _ => None,
        }
    }

    fn parts(&self) -> &[ScalingMap] {
        if self.strategy == Strategy::Composite {
            &self.chain
        } else {
            std::slice::from_ref(self)
        }
    }

    /// Whether `z` is a valid argument: within the target's support,
    /// endpoints included.
    pub fn in_domain(&self, z: f64) -> bool {
        !z.is_nan() && z.abs() <= self.target.support_bound()
    }

    /// `γ(z)`. Odd, increasing, `γ(0) = 0`. At the ends of the target's
    /// support (including `±∞`) it returns the matching end of the source's.
    pub fn eval(&self, z: f64) -> Result<f64> {
        if !self.in_domain(z) {
            return Err(Error::domain("scaling map argument", z));
        }
        let y = match self.strategy {
            Strategy::Identity => z,
            Strategy::Composite => {
                let mut y = z;
                for part in self.chain.iter() {
                    y = part.eval(y)?;
                }
                y
            }
            _ => self.canonical(z)?,
        };
        Ok(match self.fault {
            Some(rel) => y * (1.0 + rel),
            None => y,
        })
    }

    /// `γ(z)` through the quantile/cdf identity whatever the strategy.
    /// For a composite this is the same as [`eval`](Self::eval).
    pub fn eval_general(&self, z: f64) -> Result<f64> {
        if self.strategy == Strategy::Composite {
            return self.eval(z);
        }
        if !self.in_domain(z) {
            return Err(Error::domain("scaling map argument", z));
        }
        self.canonical(z)
    }

    fn canonical(&self, z: f64) -> Result<f64> {
        if z == 0.0 {
            return Ok(0.0);
        }
        let t = self.source.half_quantile(self.target.half_mass(z))?;
        Ok(t.copysign(z))
    }

    /// `γ(z)` by nesting the plain incomplete beta and its inverse with the
    /// argument `x = u/(1+u)` formed in floating point, as the formula is
    /// usually written. Heavy-tail pairs only. It loses the distance of `x`
    /// from 1 in the far tails, which [`eval`](Self::eval) keeps; the two
    /// are compared as a check on the special-function kernel.
    pub fn eval_literal(&self, z: f64) -> Result<f64> {
        let (ps, pt) = match (self.source.index().beta_params(), self.target.index().beta_params()) {
            (Some(ps), Some(pt))
                if self.source.index().regime() == Regime::HeavyTail
                    && self.target.index().regime() == Regime::HeavyTail =>
            {
                (ps, pt)
            }
            _ => return Err(Error::Unsupported("literal evaluation needs two heavy-tail indices".into())),
        };
        if z.is_nan() {
            return Err(Error::domain("scaling map argument", z));
        }
        if z == 0.0 {
            return Ok(0.0);
        }
        let curvature = |d: &QGaussian| (d.q() - 1.0) * d.beta_scale();
        let u = curvature(&self.target) * z * z;
        let y = reg_inc_beta(u / (1.0 + u), pt)?;
        let x = inv_reg_inc_beta(y, ps)?;
        Ok((x / (1.0 - x) / curvature(&self.source)).sqrt().copysign(z))
    }
}

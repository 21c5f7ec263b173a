//! Named collections of checks with their default grids and tolerances.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::{
    axioms_with, check_hypergeometric_equivalence, check_incomplete_beta_series, check_literal_path, check_ode,
    check_probability_preservation, closed_form_against, ks_pushforward, MapFactory, VerificationReport,
};
use crate::error::{Error, Result};
use crate::groupoid::TableRow;
use crate::par;
use crate::qgauss::{QIndex, Regime};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Axioms,
    Preservation,
    Ode,
    ClosedForms,
    Hypergeometric,
    Pushforward,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] =
        ["axioms", "preservation", "ode", "closed-forms", "hypergeometric", "pushforward", "all"];

    /// Tolerance used when none is given.
    pub fn default_tolerance(&self) -> f64 {
        match self {
            Suite::Ode => 1e-6,
            Suite::Hypergeometric => 1e-10,
            _ => 1e-8,
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "axioms" => Suite::Axioms,
            "preservation" => Suite::Preservation,
            "ode" => Suite::Ode,
            "closed-forms" | "closed_forms" => Suite::ClosedForms,
            "hypergeometric" => Suite::Hypergeometric,
            "pushforward" => Suite::Pushforward,
            "all" => Suite::All,
            _ => return Err(Error::Unsupported(format!("unknown suite `{s}`"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [
            Suite::Axioms,
            Suite::Preservation,
            Suite::Ode,
            Suite::ClosedForms,
            Suite::Hypergeometric,
            Suite::Pushforward,
            Suite::All,
        ]
        .iter()
        .position(|s| s == self)
        .unwrap();
        f.write_str(Self::NAMES[i])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Overrides the suite's own tolerance. Not used by the KS checks,
    /// whose threshold is the critical value.
    pub tolerance: Option<f64>,
    pub seed: u64,
    /// Relative error injected into every map the suite builds.
    pub fault: Option<f64>,
    /// Random `(q, q')` pairs for the preservation and ODE suites.
    pub pairs: usize,
    /// Draws per KS test.
    pub samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { tolerance: None, seed: 42, fault: None, pairs: 100, samples: 100_000 }
    }
}

fn rational(n: i64, d: i64) -> QIndex {
    QIndex::new(n as f64 / d as f64).unwrap()
}

/// `{1+1e-6, 9/7, 7/5, 3/2, 5/3, 2, 5/2, 2.9}`.
pub fn default_q_grid() -> Vec<QIndex> {
    vec![
        QIndex::new(1.0 + 1e-6).unwrap(),
        rational(9, 7),
        rational(7, 5),
        rational(3, 2),
        rational(5, 3),
        rational(2, 1),
        rational(5, 2),
        QIndex::new(2.9).unwrap(),
    ]
}

/// `{−5, −1, 0, 1/2}`.
pub fn default_compact_grid() -> Vec<QIndex> {
    vec![rational(-5, 1), rational(-1, 1), rational(0, 1), rational(1, 2)]
}

pub fn default_z_grid() -> Vec<f64> {
    vec![0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0]
}

/// `count` pairs uniform on `[1.05, 2.9]²` from a ChaCha20 stream.
pub fn random_pairs(count: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut uniform = move || (rng.next_u64() >> 11) as f64 * (-53.0_f64).exp2();
    (0..count).map(|_| (1.05 + 1.85 * uniform(), 1.05 + 1.85 * uniform())).collect()
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let tol = config.tolerance.unwrap_or(suite.default_tolerance());
    let factory = MapFactory { fault: config.fault };
    let reports = match suite {
        Suite::All => {
            let mut all = Vec::new();
            for s in [
                Suite::Axioms,
                Suite::Preservation,
                Suite::Ode,
                Suite::ClosedForms,
                Suite::Hypergeometric,
                Suite::Pushforward,
            ] {
                all.extend(run_suite(s, config)?);
            }
            all
        }
        Suite::Axioms => {
            let mut qs = default_q_grid();
            qs.extend(default_compact_grid());
            axioms_with(factory, &qs, &default_z_grid(), tol)
        }
        Suite::Preservation | Suite::Ode => {
            let mut cases = Vec::new();
            for (q, qp) in random_pairs(config.pairs, config.seed) {
                let m = factory.make(QIndex::new(q)?, QIndex::new(qp)?)?;
                for z in [0.25, 1.0, 4.0] {
                    cases.push((m.clone(), z));
                }
            }
            par::par_map(&cases, |(m, z)| {
                if suite == Suite::Ode {
                    check_ode(m, *z, 1e-5, tol)
                } else {
                    check_probability_preservation(m, *z, tol)
                }
            })
        }
        Suite::ClosedForms => {
            let mut cases = Vec::new();
            for row in TableRow::all() {
                let m = factory.make(QIndex::new(row.source_q())?, QIndex::new(row.target_q())?)?;
                for i in 0..50 {
                    cases.push((row, m.clone(), 0.05 + 4.95 * i as f64 / 49.0));
                }
            }
            let mut out = par::par_map(&cases, |(row, m, z)| closed_form_against(m, *row, *z, tol));
            // the plain nested path should agree wherever x = u/(1+u) keeps its digits
            let literal: Vec<_> =
                cases.iter().step_by(50).flat_map(|(_, m, _)| [0.05, 0.25, 1.0, 2.0].map(|z| (m, z))).collect();
            out.extend(par::par_map(&literal, |(m, z)| check_literal_path(m, *z, tol / 100.0)));
            out
        }
        Suite::Hypergeometric => {
            let mut out = Vec::new();
            let heavy: Vec<QIndex> = default_q_grid().into_iter().filter(|q| q.regime() == Regime::HeavyTail).collect();
            for q in heavy {
                for &z in &default_z_grid() {
                    out.push(check_hypergeometric_equivalence(q, z, tol));
                }
            }
            let mut rng = ChaCha20Rng::seed_from_u64(config.seed ^ 0x9e37_79b9_7f4a_7c15);
            let mut uniform = move || (rng.next_u64() >> 11) as f64 * (-53.0_f64).exp2();
            let triples: Vec<(f64, f64, f64)> = (0..50)
                .map(|_| {
                    let x = 0.001 + 0.998 * uniform();
                    (x, 0.1 + 4.9 * uniform(), 0.1 + 4.9 * uniform())
                })
                .collect();
            // the series identity is looser than the path comparison
            let series_tol = tol.max(1e-8);
            out.extend(par::par_map(&triples, |&(x, m, n)| check_incomplete_beta_series(x, m, n, series_tol)));
            out
        }
        Suite::Pushforward => {
            let pairs = [(2.0, 5.0 / 3.0), (2.0, 7.0 / 5.0), (0.0, 2.0)];
            let mut out = Vec::new();
            for (i, (q, qp)) in pairs.into_iter().enumerate() {
                let m = factory.make(QIndex::new(q)?, QIndex::new(qp)?)?;
                out.push(ks_pushforward(&m, config.samples, config.seed.wrapping_add(i as u64)));
            }
            out
        }
    };
    Ok(reports)
}

//! Ten index pairs for which `γ` reduces to elementary functions. They
//! serve as independent oracles for the general evaluator.
//!
//! Each row is stored by the (source, target) pair it realizes, checked
//! against the probability-matching condition at high precision.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Index of a closed-form row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TableRow(usize);

struct Row {
    source: (i64, i64),
    target: (i64, i64),
    eval: fn(f64) -> f64,
}

fn half_tan(z: f64, numerator: f64, denominator: f64) -> f64 {
    (PI * z * numerator / denominator).tan()
}

const SQRT2: f64 = std::f64::consts::SQRT_2;

static ROWS: [Row; 10] = [
    Row { source: (2, 1), target: (5, 3), eval: |z| half_tan(z, 1.0, (6.0 + 4.0 * z * z).sqrt()) },
    Row {
        source: (2, 1),
        target: (7, 5),
        eval: |z| {
            let w = z * z;
            half_tan(z, 15.0 + 4.0 * w, 2.0 * SQRT2 * (5.0 + 2.0 * w).powf(1.5))
        },
    },
    Row {
        source: (2, 1),
        target: (9, 7),
        eval: |z| {
            let w = z * z;
            half_tan(z, 735.0 + 280.0 * w + 32.0 * w * w, 8.0 * SQRT2 * (7.0 + 2.0 * w).powf(2.5))
        },
    },
    Row {
        source: (2, 1),
        target: (11, 9),
        eval: |z| {
            let w = z * z;
            let num = 25515.0 + 4.0 * w * (2835.0 + 504.0 * w + 32.0 * w * w);
            half_tan(z, num, 16.0 * SQRT2 * (9.0 + 2.0 * w).powf(3.5))
        },
    },
    Row {
        source: (2, 1),
        target: (13, 11),
        eval: |z| {
            let w = z * z;
            let num = 4611915.0 + 16.0 * w * (139755.0 + 4.0 * w * (7623.0 + 792.0 * w + 32.0 * w * w));
            half_tan(z, num, 128.0 * SQRT2 * (11.0 + 2.0 * w).powf(4.5))
        },
    },
    Row {
        source: (5, 3),
        target: (2, 1),
        eval: |z| {
            let theta = z.atan();
            6f64.sqrt() * theta / (PI * PI - 4.0 * theta * theta).sqrt()
        },
    },
    Row {
        source: (5, 3),
        target: (7, 5),
        eval: |z| {
            let w = z * z;
            3f64.sqrt() * z * (15.0 + 4.0 * w) / (500.0 + 150.0 * w).sqrt()
        },
    },
    Row {
        source: (5, 3),
        target: (9, 7),
        eval: |z| {
            let w = z * z;
            let num = 735.0 + 280.0 * w + 32.0 * w * w;
            3f64.sqrt() * z * num / (1075648.0 + 456190.0 * w + 54880.0 * w * w).sqrt()
        },
    },
    Row {
        source: (5, 3),
        target: (11, 9),
        eval: |z| {
            let w = z * z;
            let num = 25515.0 + 4.0 * w * (2835.0 + 504.0 * w + 32.0 * w * w);
            let den = 27.0 * 6f64.sqrt() * (93312.0 + 45927.0 * w + 8568.0 * w * w + 560.0 * w * w * w).sqrt();
            z * num / den
        },
    },
    Row {
        source: (5, 3),
        target: (13, 11),
        eval: |z| {
            let w = z * z;
            let num = 4611915.0 + 16.0 * w * (139755.0 + 4.0 * w * (7623.0 + 792.0 * w + 32.0 * w * w));
            let inner = 119939072.0 + 3.0 * w * (21398487.0 + 32.0 * w * (152823.0 + 16324.0 * w + 672.0 * w * w));
            (3.0 / 22.0f64).sqrt() * z * num / (121.0 * inner.sqrt())
        },
    },
];

/// Matching tolerance between a requested index and a row index.
pub const ROW_MATCH_TOL: f64 = 1e-12;

fn ratio(r: (i64, i64)) -> f64 {
    r.0 as f64 / r.1 as f64
}

fn ratio_label(r: (i64, i64)) -> String {
    if r.1 == 1 {
        r.0.to_string()
    } else {
        format!("{}/{}", r.0, r.1)
    }
}

impl TableRow {
    pub const COUNT: usize = 10;

    pub fn all() -> impl Iterator<Item = TableRow> {
        (0..Self::COUNT).map(TableRow)
    }

    /// Row whose indices match `(source, target)` to [`ROW_MATCH_TOL`].
    pub fn find(source: f64, target: f64) -> Option<TableRow> {
        Self::all()
            .find(|r| (r.source_q() - source).abs() <= ROW_MATCH_TOL && (r.target_q() - target).abs() <= ROW_MATCH_TOL)
    }

    pub fn source_q(&self) -> f64 {
        ratio(ROWS[self.0].source)
    }

    pub fn target_q(&self) -> f64 {
        ratio(ROWS[self.0].target)
    }

    /// `(numerator, denominator)` of the source and target indices.
    pub fn indices(&self) -> ((i64, i64), (i64, i64)) {
        (ROWS[self.0].source, ROWS[self.0].target)
    }

    /// Label of the form `G2->G5/3`.
    pub fn label(&self) -> String {
        format!("G{}->G{}", ratio_label(ROWS[self.0].source), ratio_label(ROWS[self.0].target))
    }

    /// The closed form at `z`, odd in `z`.
    pub fn eval(&self, z: f64) -> f64 {
        if z == 0.0 {
            return 0.0;
        }
        (ROWS[self.0].eval)(z.abs()).copysign(z)
    }
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for TableRow {
    type Err = Error;

    /// Accepts `G2->G5/3`, `2->5/3` and `2,5/3`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (a, b) = compact
            .split_once("->")
            .or_else(|| compact.split_once(','))
            .ok_or_else(|| Error::UnknownRow(s.to_string()))?;
        let strip = |t: &str| t.trim_start_matches(['G', 'g']).to_string();
        let (a, b) = (strip(a), strip(b));
        Self::all()
            .find(|r| ratio_label(ROWS[r.0].source) == a && ratio_label(ROWS[r.0].target) == b)
            .ok_or_else(|| Error::UnknownRow(s.to_string()))
    }
}

impl Serialize for TableRow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

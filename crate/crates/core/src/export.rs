//! CSV and text renderings of map families: the figure data sets and the
//! closed-form comparison table.
//!
//! CSV is LF-terminated with a header row, and every number is printed with
//! 17 significant digits so it reads back to the same double.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::groupoid::{make_map, TableRow};
use crate::par;
use crate::qgauss::QIndex;

/// Shortest `%.17g`-style rendering: 17 significant digits, trailing zeros
/// dropped, exponent form outside `[1e-5, 1e17)`.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-5..17).contains(&exp) {
        let fixed = format!("{:.*}", (16 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Evenly spaced points `lo:hi:n`, computed so that a grid symmetric about
/// 0 is exactly antisymmetric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::Unsupported(format!("grid bounds {lo}:{hi}")));
        }
        if n == 0 || (n == 1 && lo != hi) {
            return Err(Error::Unsupported(format!("grid of {n} points on [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let m = (self.n - 1) as f64;
        (0..self.n).map(|i| (self.lo * (m - i as f64) + self.hi * i as f64) / m).collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Unsupported(format!("grid `{s}` is not lo:hi:n"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo = parts[0].trim().parse().map_err(|_| bad())?;
        let hi = parts[1].trim().parse().map_err(|_| bad())?;
        let n = parts[2].trim().parse().map_err(|_| bad())?;
        Grid::new(lo, hi, n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    /// `γ` from the Cauchy source `q = 2` to `q' ∈ {5/3, 7/5, 9/7, 25/23}`.
    Fig1a,
    /// `γ` from `q = 5/3` to `q' ∈ {7/5, 9/7, 11/9, 25/23}`.
    Fig1b,
    /// The closed-form index pairs and the square they live in.
    Fig2,
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1a" => Ok(Figure::Fig1a),
            "fig1b" => Ok(Figure::Fig1b),
            "fig2" => Ok(Figure::Fig2),
            _ => Err(Error::Unsupported(format!("unknown figure `{s}` (fig1a, fig1b, fig2)"))),
        }
    }
}

impl Figure {
    pub fn id(&self) -> &'static str {
        match self {
            Figure::Fig1a => "fig1a",
            Figure::Fig1b => "fig1b",
            Figure::Fig2 => "fig2",
        }
    }

    pub fn default_grid() -> Grid {
        Grid { lo: -5.0, hi: 5.0, n: 201 }
    }

    /// CSV text of the figure. The grid is ignored for `fig2`.
    pub fn csv(&self, grid: &Grid) -> Result<String> {
        match self {
            Figure::Fig1a => family_csv((2, 1), &[(5, 3), (7, 5), (9, 7), (25, 23)], grid),
            Figure::Fig1b => family_csv((5, 3), &[(7, 5), (9, 7), (11, 9), (25, 23)], grid),
            Figure::Fig2 => Ok(region_csv()),
        }
    }
}

fn label(r: (i64, i64)) -> String {
    if r.1 == 1 {
        r.0.to_string()
    } else {
        format!("{}/{}", r.0, r.1)
    }
}

/// Columns `z, gamma_<q'>...` for maps from one source to several targets.
pub fn family_csv(source: (i64, i64), targets: &[(i64, i64)], grid: &Grid) -> Result<String> {
    let src = QIndex::new(source.0 as f64 / source.1 as f64)?;
    let maps =
        targets.iter().map(|t| make_map(src, QIndex::new(t.0 as f64 / t.1 as f64)?)).collect::<Result<Vec<_>>>()?;
    let zs = grid.points();
    let rows: Vec<Result<Vec<f64>>> = par::par_map(&zs, |&z| maps.iter().map(|m| m.eval(z)).collect());
    let mut out = String::from("z");
    for t in targets {
        write!(out, ",gamma_{}", label(*t)).unwrap();
    }
    out.push('\n');
    for (z, row) in zs.iter().zip(rows) {
        out.push_str(&fmt_g17(*z));
        for v in row? {
            out.push(',');
            out.push_str(&fmt_g17(v));
        }
        out.push('\n');
    }
    Ok(out)
}

/// The closed-form `(q, q')` points and the corners of the open square
/// `(1, 3)²` inside which any two q-Gaussians can be mapped.
pub fn region_csv() -> String {
    let mut out = String::from("kind,q,q_prime,label\n");
    for row in TableRow::all() {
        writeln!(out, "table_point,{},{},{}", fmt_g17(row.source_q()), fmt_g17(row.target_q()), row.label()).unwrap();
    }
    for (q, qp) in [(1, 1), (3, 1), (3, 3), (1, 3)] {
        writeln!(out, "region_corner,{q},{qp},open").unwrap();
    }
    out
}

/// One line of the comparison table.
#[derive(Clone, Debug, PartialEq)]
pub struct TableLine {
    pub row: TableRow,
    pub z: f64,
    pub closed_form: f64,
    pub general: f64,
    pub rel_diff: f64,
}

/// Closed form against the general evaluation for every row at each `z`.
pub fn comparison_table(zs: &[f64]) -> Result<Vec<TableLine>> {
    let mut cases = Vec::new();
    for row in TableRow::all() {
        for &z in zs {
            cases.push((row, z));
        }
    }
    par::par_map(&cases, |&(row, z)| {
        let m = make_map(QIndex::new(row.source_q())?, QIndex::new(row.target_q())?)?;
        let general = m.eval_general(z)?;
        let closed_form = row.eval(z);
        let rel_diff = if closed_form == general { 0.0 } else { ((general - closed_form) / closed_form).abs() };
        Ok(TableLine { row, z, closed_form, general, rel_diff })
    })
    .into_iter()
    .collect()
}

pub fn render_table(lines: &[TableLine]) -> String {
    let mut out = format!("{:<14} {:>6} {:>24} {:>24} {:>10}\n", "row", "z", "closed_form", "general", "rel_diff");
    for l in lines {
        writeln!(
            out,
            "{:<14} {:>6} {:>24} {:>24} {:>10.2e}",
            l.row.label(),
            fmt_g17(l.z),
            fmt_g17(l.closed_form),
            fmt_g17(l.general),
            l.rel_diff
        )
        .unwrap();
    }
    out
}

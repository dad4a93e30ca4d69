//! Problem data in the covering form
//!
//! ```text
//! min max_ξ cᵀx(ξ)   s.t.  A x(ξ) ≥ D ξ + d,   D ≥ 0, d ≥ 0,
//! ```
//!
//! with uncertainty and decisions split into stages. All indices are 0-based
//! internally; diagnostics print them 1-based.

use std::fmt;

use crate::usets::UncertaintySet;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend_from_slice(r);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Which uncertainty coordinates are revealed, and which decisions are taken,
/// at each stage.
#[derive(Clone, Debug, PartialEq)]
pub struct StagePartition {
    pub uncertainty: Vec<Vec<usize>>,
    pub decisions: Vec<Vec<usize>>,
}

impl StagePartition {
    pub fn new(uncertainty: Vec<Vec<usize>>, decisions: Vec<Vec<usize>>) -> Self {
        StagePartition {
            uncertainty,
            decisions,
        }
    }

    pub fn num_stages(&self) -> usize {
        self.uncertainty.len()
    }

    pub fn num_uncertain(&self) -> usize {
        self.uncertainty.iter().map(Vec::len).sum()
    }

    pub fn num_decisions(&self) -> usize {
        self.decisions.iter().map(Vec::len).sum()
    }

    /// All uncertainty coordinates revealed in stages `0..=t`, ascending.
    pub fn revealed_prefix(&self, t: usize) -> crate::Result<Vec<usize>> {
        if t >= self.num_stages() {
            return Err(crate::Error::StageOutOfRange {
                t,
                stages: self.num_stages(),
            });
        }
        let mut out: Vec<usize> = self.uncertainty[..=t].iter().flatten().copied().collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Stage index of every decision coordinate (`n` entries).
    pub fn decision_stage(&self) -> Vec<usize> {
        let mut st = vec![usize::MAX; self.num_decisions()];
        for (t, js) in self.decisions.iter().enumerate() {
            for &j in js {
                if j < st.len() {
                    st[j] = t;
                }
            }
        }
        st
    }

    /// Stage index of every uncertainty coordinate (`m` entries).
    pub fn uncertainty_stage(&self) -> Vec<usize> {
        let mut st = vec![usize::MAX; self.num_uncertain()];
        for (t, is) in self.uncertainty.iter().enumerate() {
            for &i in is {
                if i < st.len() {
                    st[i] = t;
                }
            }
        }
        st
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AroInstance {
    pub a: Matrix,
    pub c: Vec<f64>,
    pub d_mat: Matrix,
    pub d: Vec<f64>,
    pub stages: StagePartition,
    pub uset: UncertaintySet,
}

impl AroInstance {
    pub fn m(&self) -> usize {
        self.d_mat.cols
    }

    pub fn n(&self) -> usize {
        self.a.cols
    }

    pub fn l(&self) -> usize {
        self.a.rows
    }

    /// Right-hand side D ξ + d.
    pub fn rhs(&self, xi: &[f64]) -> Vec<f64> {
        let mut r = self.d_mat.mul_vec(xi);
        for (ri, di) in r.iter_mut().zip(&self.d) {
            *ri += di;
        }
        r
    }

    /// Largest shortfall max_r (Dξ + d − Ax)_r, clipped at 0.
    pub fn violation(&self, x: &[f64], xi: &[f64]) -> f64 {
        let ax = self.a.mul_vec(x);
        let rhs = self.rhs(xi);
        ax.iter().zip(&rhs).map(|(l, r)| r - l).fold(0.0, f64::max)
    }

    pub fn cost(&self, x: &[f64]) -> f64 {
        dot(&self.c, x)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Dimension(String),
    NegativeD { row: usize, col: usize, value: f64 },
    NegativeRhs { row: usize, value: f64 },
    NonFinite(String),
    UncoveredUncertainty(usize),
    RepeatedUncertainty(usize),
    UncertaintyOutOfRange(usize),
    UncoveredDecision(usize),
    RepeatedDecision(usize),
    DecisionOutOfRange(usize),
    EmptyStage(usize),
    SetDimension { set: usize, instance: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            Dimension(s) => write!(f, "dimension mismatch: {s}"),
            NegativeD { row, col, value } => {
                write!(
                    f,
                    "D has negative entry {value} at (row {}, col {})",
                    row + 1,
                    col + 1
                )
            }
            NegativeRhs { row, value } => {
                write!(f, "d has negative entry {value} at row {}", row + 1)
            }
            NonFinite(s) => write!(f, "non-finite entry in {s}"),
            UncoveredUncertainty(i) => write!(f, "uncovered index {} (uncertainty)", i + 1),
            RepeatedUncertainty(i) => write!(f, "uncertainty index {} assigned twice", i + 1),
            UncertaintyOutOfRange(i) => write!(f, "uncertainty index {} out of range", i + 1),
            UncoveredDecision(j) => write!(f, "uncovered index {} (decision)", j + 1),
            RepeatedDecision(j) => write!(f, "decision index {} assigned twice", j + 1),
            DecisionOutOfRange(j) => write!(f, "decision index {} out of range", j + 1),
            EmptyStage(t) => write!(f, "stage {} has neither uncertainty nor decisions", t + 1),
            SetDimension { set, instance } => {
                write!(
                    f,
                    "uncertainty set has dimension {set}, instance has {instance}"
                )
            }
        }
    }
}

fn check_partition(
    sets: &[Vec<usize>],
    size: usize,
    out: &mut Vec<Violation>,
    uncovered: fn(usize) -> Violation,
    repeated: fn(usize) -> Violation,
    out_of_range: fn(usize) -> Violation,
) {
    let mut seen = vec![false; size];
    for &i in sets.iter().flatten() {
        if i >= size {
            out.push(out_of_range(i));
        } else if seen[i] {
            out.push(repeated(i));
        } else {
            seen[i] = true;
        }
    }
    for (i, s) in seen.iter().enumerate() {
        if !s {
            out.push(uncovered(i));
        }
    }
}

/// Every structural problem with `inst`; empty when the instance is admissible.
pub fn validate_instance(inst: &AroInstance) -> Vec<Violation> {
    let mut v = Vec::new();
    let (l, n, m) = (inst.a.rows, inst.a.cols, inst.d_mat.cols);
    if inst.d_mat.rows != l {
        v.push(Violation::Dimension(format!(
            "A has {l} rows but D has {}",
            inst.d_mat.rows
        )));
    }
    if inst.c.len() != n {
        v.push(Violation::Dimension(format!(
            "c has length {} but A has {n} columns",
            inst.c.len()
        )));
    }
    if inst.d.len() != l {
        v.push(Violation::Dimension(format!(
            "d has length {} but A has {l} rows",
            inst.d.len()
        )));
    }
    if inst.a.data.iter().chain(&inst.c).any(|x| !x.is_finite()) {
        v.push(Violation::NonFinite("A or c".into()));
    }
    for i in 0..inst.d_mat.rows {
        for j in 0..m {
            let x = inst.d_mat.get(i, j);
            if !x.is_finite() {
                v.push(Violation::NonFinite(format!("D[{}][{}]", i + 1, j + 1)));
            } else if x < 0.0 {
                v.push(Violation::NegativeD {
                    row: i,
                    col: j,
                    value: x,
                });
            }
        }
    }
    for (i, &x) in inst.d.iter().enumerate() {
        if !x.is_finite() {
            v.push(Violation::NonFinite(format!("d[{}]", i + 1)));
        } else if x < 0.0 {
            v.push(Violation::NegativeRhs { row: i, value: x });
        }
    }
    let st = &inst.stages;
    if st.uncertainty.len() != st.decisions.len() || st.uncertainty.is_empty() {
        v.push(Violation::Dimension(format!(
            "stage partition has {} uncertainty blocks and {} decision blocks",
            st.uncertainty.len(),
            st.decisions.len()
        )));
    }
    check_partition(
        &st.uncertainty,
        m,
        &mut v,
        Violation::UncoveredUncertainty,
        Violation::RepeatedUncertainty,
        Violation::UncertaintyOutOfRange,
    );
    check_partition(
        &st.decisions,
        n,
        &mut v,
        Violation::UncoveredDecision,
        Violation::RepeatedDecision,
        Violation::DecisionOutOfRange,
    );
    for t in 0..st.uncertainty.len().min(st.decisions.len()) {
        if st.uncertainty[t].is_empty() && st.decisions[t].is_empty() {
            v.push(Violation::EmptyStage(t));
        }
    }
    if inst.uset.dim() != m {
        v.push(Violation::SetDimension {
            set: inst.uset.dim(),
            instance: m,
        });
    }
    v
}

//! Linear programs, the built-in simplex solver, and the three policy LPs
//! (vertex master for PAP/SPAP, the constant policy, and the cutting-plane
//! affine policy).

mod affine;
mod pap;
mod simplex;

use std::time::Instant;

pub use affine::{solve_affine_cutting_plane, AffineConfig, AffineOutcome};
pub use pap::{build_box, build_pap_master, build_pap_master_with, AliasMode, VariableMap};
pub use simplex::Simplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpRow {
    /// Sparse coefficients (column, value); columns need not be sorted.
    pub coeffs: Vec<(usize, f64)>,
    pub rel: Relation,
    pub rhs: f64,
}

/// min cᵀx  s.t. rows, lower ≤ x ≤ upper (infinite bounds allowed).
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    /// Free variables with the given costs and no rows.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            rows: Vec::new(),
            lower: vec![f64::NEG_INFINITY; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_var(&mut self, cost: f64, lower: f64, upper: f64) -> usize {
        self.objective.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.objective.len() - 1
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, f64)>, rel: Relation, rhs: f64) {
        self.rows.push(LpRow { coeffs, rel, rhs });
    }

    pub fn add_dense_row(&mut self, coeffs: &[f64], rel: Relation, rhs: f64) {
        let c = coeffs
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(j, v)| (j, *v))
            .collect();
        self.add_row(c, rel, rhs);
    }

    /// Largest bound or row violation of `x` (0 when feasible).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for (j, v) in x.iter().enumerate() {
            worst = worst.max(self.lower[j] - v).max(v - self.upper[j]);
        }
        for r in &self.rows {
            worst = worst.max(row_violation(r, x));
        }
        worst
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

pub(crate) fn row_violation(r: &LpRow, x: &[f64]) -> f64 {
    let act: f64 = r.coeffs.iter().map(|(j, a)| a * x[*j]).sum();
    match r.rel {
        Relation::Ge => (r.rhs - act).max(0.0),
        Relation::Le => (act - r.rhs).max(0.0),
        Relation::Eq => (act - r.rhs).abs(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterLimit,
    TimeLimit,
}

impl LpStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
            LpStatus::IterLimit => "iter_limit",
            LpStatus::TimeLimit => "time_limit",
        }
    }
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Largest violation of the original rows and bounds at `x`.
    pub max_violation: f64,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub feas_tol: f64,
    pub opt_tol: f64,
    /// Pivot cap per solve; `None` means 50·(rows + cols).
    pub max_iter: Option<usize>,
    pub deadline: Option<Instant>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            feas_tol: 1e-7,
            opt_tol: 1e-9,
            max_iter: None,
            deadline: None,
        }
    }
}

/// Anything that can solve a [`LinearProgram`]; the built-in simplex is the
/// only implementation shipped.
pub trait LpSolver {
    fn solve(&self, lp: &LinearProgram, cfg: &SolverConfig) -> LpSolution;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DenseSimplex;

impl LpSolver for DenseSimplex {
    fn solve(&self, lp: &LinearProgram, cfg: &SolverConfig) -> LpSolution {
        let mut s = Simplex::new(lp, cfg.clone());
        s.solve();
        s.solution()
    }
}

pub fn solve_lp(lp: &LinearProgram, cfg: &SolverConfig) -> LpSolution {
    DenseSimplex.solve(lp, cfg)
}

//! Decision rules and their evaluation on realizations.
//!
//! Policies are evaluated on raw ξ ≥ 0 even outside U; nothing is clipped,
//! violations are measured and reported as they are.

use crate::domsets::DominatingSet;
use crate::lp::VariableMap;
use crate::model::{AroInstance, Matrix};

/// h(ξ) = max(ξ, v₀), followed by h′ = h + s⊙(e − h) when scales are given.
pub fn dominate(v0: &[f64], xi: &[f64], s: Option<&[f64]>) -> Vec<f64> {
    let h = xi.iter().zip(v0).map(|(x, v)| x.max(*v));
    match s {
        None => h.collect(),
        Some(s) => h.zip(s).map(|(h, s)| h + s * (1.0 - h)).collect(),
    }
}

pub fn lambda_coeffs(dom: &DominatingSet, xi: &[f64]) -> Vec<f64> {
    dom.lambda(xi)
}

/// x(ξ) = x₀ + Σᵢ λᵢ(ξ)(xᵢ − x₀) over the vertex solutions of the master LP.
#[derive(Clone, Debug)]
pub struct PiecewisePolicy {
    pub dom: DominatingSet,
    /// (m+1) × n; row 0 answers v₀, row i answers v₀ + ρᵢeᵢ.
    pub vertex_solutions: Vec<Vec<f64>>,
    /// Optimal re-scaling s when the policy came from the re-scaled master.
    pub scales: Option<Vec<f64>>,
}

impl PiecewisePolicy {
    pub fn from_lp(dom: DominatingSet, map: &VariableMap, x: &[f64]) -> Self {
        let vertex_solutions = map
            .columns
            .iter()
            .map(|cols| cols.iter().map(|&c| x[c]).collect())
            .collect();
        let scales = map
            .scales
            .as_ref()
            .map(|s| s.iter().map(|&c| x[c]).collect());
        PiecewisePolicy {
            dom,
            vertex_solutions,
            scales,
        }
    }

    /// Vertices the policy was solved for (re-scaled when applicable).
    pub fn effective_vertices(&self) -> Vec<Vec<f64>> {
        let v = self.dom.vertices();
        match &self.scales {
            Some(s) => crate::domsets::apply_scales(&v, s),
            None => v,
        }
    }
}

pub fn evaluate_pap(pol: &PiecewisePolicy, xi: &[f64]) -> Vec<f64> {
    let lam = pol.dom.lambda(xi);
    let x0 = &pol.vertex_solutions[0];
    let mut x = x0.clone();
    for (i, l) in lam.iter().enumerate() {
        let xi_sol = &pol.vertex_solutions[i + 1];
        // zero-step coordinates: vertex i coincides with v₀ and shares its solution
        if *l == 0.0 || !l.is_finite() {
            continue;
        }
        for (xj, (a, b)) in x.iter_mut().zip(xi_sol.iter().zip(x0)) {
            *xj += l * (a - b);
        }
    }
    x
}

/// x(ξ) = Pξ + q with Pⱼc = 0 whenever c is revealed after decision j.
#[derive(Clone, Debug, PartialEq)]
pub struct AffinePolicy {
    pub p: Matrix,
    pub q: Vec<f64>,
}

pub fn evaluate_affine(pol: &AffinePolicy, xi: &[f64]) -> Vec<f64> {
    pol.p
        .mul_vec(xi)
        .iter()
        .zip(&pol.q)
        .map(|(a, b)| a + b)
        .collect()
}

/// The constant policy: the same x for every realization.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxPolicy {
    pub x: Vec<f64>,
}

#[derive(Clone, Debug)]
pub enum Policy {
    Box(BoxPolicy),
    Piecewise(PiecewisePolicy),
    Affine(AffinePolicy),
}

impl Policy {
    pub fn decide(&self, xi: &[f64]) -> Vec<f64> {
        match self {
            Policy::Box(b) => b.x.clone(),
            Policy::Piecewise(p) => evaluate_pap(p, xi),
            Policy::Affine(a) => evaluate_affine(a, xi),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AssessReport {
    pub count: usize,
    pub max_cost: f64,
    pub mean_cost: f64,
    pub worst_violation: f64,
    /// Realizations with a violation above the tolerance.
    pub violated: usize,
    /// Realizations outside U (policies are only certified on U).
    pub outside_set: usize,
}

pub fn assess<F>(inst: &AroInstance, decide: F, realizations: &[Vec<f64>], tol: f64) -> AssessReport
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    if realizations.is_empty() {
        return AssessReport::default();
    }
    let mut rep = AssessReport {
        count: realizations.len(),
        max_cost: f64::NEG_INFINITY,
        ..Default::default()
    };
    let mut total = 0.0;
    for xi in realizations {
        let x = decide(xi);
        let cost = inst.cost(&x);
        total += cost;
        rep.max_cost = rep.max_cost.max(cost);
        let v = inst.violation(&x, xi);
        rep.worst_violation = rep.worst_violation.max(v);
        if v > tol {
            rep.violated += 1;
        }
        if !inst.uset.contains(xi, 1e-9).unwrap_or(false) {
            rep.outside_set += 1;
        }
    }
    rep.mean_cost = total / realizations.len() as f64;
    rep
}

//! One entry point for solving an instance under each policy class.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::domsets::{build_closed_form, build_general, DominatingSet};
use crate::lp::{
    build_box, build_pap_master, solve_affine_cutting_plane, solve_lp, AffineConfig, LpStatus,
    SolverConfig,
};
use crate::model::AroInstance;
use crate::policies::{BoxPolicy, PiecewisePolicy, Policy};
use crate::usets::{SetKind, UncertaintySet};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Box,
    Pap,
    Spap,
    Aff,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] = [
        PolicyKind::Box,
        PolicyKind::Pap,
        PolicyKind::Spap,
        PolicyKind::Aff,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::Box => "box",
            PolicyKind::Pap => "pap",
            PolicyKind::Spap => "spap",
            PolicyKind::Aff => "aff",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "box" => Ok(PolicyKind::Box),
            "pap" => Ok(PolicyKind::Pap),
            "spap" => Ok(PolicyKind::Spap),
            "aff" | "affine" => Ok(PolicyKind::Aff),
            _ => Err(Error::InvalidInput(format!(
                "unknown policy '{s}' (box, pap, spap, aff)"
            ))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub solver: SolverConfig,
    pub affine: AffineConfig,
    pub time_limit: Option<Duration>,
}

#[derive(Clone, Debug)]
pub struct PolicyOutcome {
    pub kind: PolicyKind,
    pub status: LpStatus,
    /// False only for a cutting-plane run stopped before robust feasibility.
    pub converged: bool,
    pub objective: f64,
    pub elapsed: Duration,
    pub policy: Policy,
    /// Approximation factor of the dominating set (PAP/SPAP).
    pub beta: Option<f64>,
    pub cuts: Option<usize>,
}

impl PolicyOutcome {
    pub fn ok(&self) -> bool {
        self.status == LpStatus::Optimal && self.converged
    }

    pub fn status_label(&self) -> &'static str {
        if self.status == LpStatus::Optimal && !self.converged {
            "not_converged"
        } else {
            self.status.as_str()
        }
    }
}

/// Closed form where one exists, the iterative construction otherwise.
pub fn dominating_set_for(u: &UncertaintySet) -> Result<DominatingSet> {
    match u.kind() {
        SetKind::VertexPolytope { .. } => build_general(u),
        _ => build_closed_form(u),
    }
}

pub fn solve_policy(
    inst: &AroInstance,
    kind: PolicyKind,
    opts: &SolveOptions,
) -> Result<PolicyOutcome> {
    let start = Instant::now();
    let mut solver = opts.solver.clone();
    if let Some(t) = opts.time_limit {
        solver.deadline = Some(start + t);
    }
    match kind {
        PolicyKind::Box => {
            let sol = solve_lp(&build_box(inst), &solver);
            Ok(PolicyOutcome {
                kind,
                status: sol.status,
                converged: true,
                objective: sol.objective,
                elapsed: start.elapsed(),
                policy: Policy::Box(BoxPolicy { x: sol.x }),
                beta: None,
                cuts: None,
            })
        }
        PolicyKind::Pap | PolicyKind::Spap => {
            let dom = dominating_set_for(&inst.uset)?;
            let beta = dom.beta;
            let (lp, map) = build_pap_master(inst, &dom, kind == PolicyKind::Spap)?;
            let sol = solve_lp(&lp, &solver);
            Ok(PolicyOutcome {
                kind,
                status: sol.status,
                converged: true,
                objective: sol.objective,
                elapsed: start.elapsed(),
                policy: Policy::Piecewise(PiecewisePolicy::from_lp(dom, &map, &sol.x)),
                beta: Some(beta),
                cuts: None,
            })
        }
        PolicyKind::Aff => {
            let cfg = AffineConfig {
                solver,
                ..opts.affine.clone()
            };
            let out = solve_affine_cutting_plane(inst, &cfg)?;
            Ok(PolicyOutcome {
                kind,
                status: out.status,
                converged: out.converged,
                objective: out.objective,
                elapsed: start.elapsed(),
                policy: Policy::Affine(out.policy),
                beta: None,
                cuts: Some(out.cuts),
            })
        }
    }
}

//! Affine decision rules x(ξ) = Pξ + q (P restricted to revealed coordinates)
//! by scenario generation: solve a master over a finite scenario pool, find
//! the worst ξ ∈ U for the objective and each row with linmax, add violated
//! cuts, repeat. Over budgeted sets a violated robust row is replaced by its
//! exact LP dual instead, so the loop ends after at most l+1 such rounds.

use std::time::Instant;

use super::{LpStatus, Relation, Simplex, SolverConfig};
use crate::model::{AroInstance, Matrix};
use crate::policies::AffinePolicy;
use crate::usets::SetKind;
use crate::{Error, Result};

/// Cuts this far from binding are dropped after each round.
const DROP_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct AffineConfig {
    pub max_rounds: usize,
    /// Stop once no robust constraint is violated by more than this.
    pub tol: f64,
    pub solver: SolverConfig,
}

impl Default for AffineConfig {
    fn default() -> Self {
        AffineConfig {
            max_rounds: 2000,
            tol: 1e-6,
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AffineOutcome {
    pub policy: AffinePolicy,
    /// Master objective; short of convergence it is a lower bound on the
    /// best affine cost.
    pub objective: f64,
    pub status: LpStatus,
    pub converged: bool,
    pub rounds: usize,
    pub cuts: usize,
    /// Master objective after every round (non-decreasing up to solver tolerance).
    pub history: Vec<f64>,
    /// Largest robust violation left (0 when converged within tolerance).
    pub max_violation: f64,
}

struct Layout {
    /// For decision j: (uncertainty coordinate, column) pairs of row j of P.
    p: Vec<Vec<(usize, usize)>>,
    q: Vec<usize>,
    z: usize,
    ncols: usize,
}

fn layout(inst: &AroInstance) -> Result<Layout> {
    let n = inst.n();
    let stage = inst.stages.decision_stage();
    let mut next = 0;
    let mut p = Vec::with_capacity(n);
    for &t in stage.iter().take(n) {
        let prefix = inst.stages.revealed_prefix(t)?;
        let cols: Vec<(usize, usize)> = prefix
            .iter()
            .enumerate()
            .map(|(k, &c)| (c, next + k))
            .collect();
        next += cols.len();
        p.push(cols);
    }
    let q: Vec<usize> = (next..next + n).collect();
    next += n;
    Ok(Layout {
        p,
        q,
        z: next,
        ncols: next + 1,
    })
}

/// Coefficients of Σⱼ wⱼ xⱼ(ξ̂) in the master variables.
fn affine_row(lay: &Layout, w: &[f64], xi: &[f64], out: &mut Vec<(usize, f64)>) {
    for (j, &wj) in w.iter().enumerate() {
        if wj == 0.0 {
            continue;
        }
        out.push((lay.q[j], wj));
        for &(c, col) in &lay.p[j] {
            if xi[c] != 0.0 {
                out.push((col, wj * xi[c]));
            }
        }
    }
}

fn objective_cut(inst: &AroInstance, lay: &Layout, xi: &[f64]) -> Vec<(usize, f64)> {
    let mut row = vec![(lay.z, 1.0)];
    let neg: Vec<f64> = inst.c.iter().map(|c| -c).collect();
    affine_row(lay, &neg, xi, &mut row);
    row
}

fn constraint_cut(
    inst: &AroInstance,
    lay: &Layout,
    r: usize,
    xi: &[f64],
) -> (Vec<(usize, f64)>, f64) {
    let mut row = Vec::new();
    affine_row(lay, inst.a.row(r), xi, &mut row);
    let rhs = inst
        .d_mat
        .row(r)
        .iter()
        .zip(xi)
        .map(|(a, b)| a * b)
        .sum::<f64>()
        + inst.d[r];
    (row, rhs)
}

fn extract(inst: &AroInstance, lay: &Layout, x: &[f64]) -> AffinePolicy {
    let (n, m) = (inst.n(), inst.m());
    let mut p = Matrix::zeros(n, m);
    for j in 0..n {
        for &(c, col) in &lay.p[j] {
            p.set(j, c, x[col]);
        }
    }
    AffinePolicy {
        p,
        q: lay.q.iter().map(|&c| x[c]).collect(),
    }
}

/// Worst-case violations of (P, q, z): index 0 is the objective epigraph,
/// index r+1 is row r. Each entry carries the separating scenario.
fn separate(inst: &AroInstance, pol: &AffinePolicy, z: f64) -> Result<Vec<(f64, Vec<f64>)>> {
    let (n, m) = (inst.n(), inst.m());
    let u = &inst.uset;
    let mut out = Vec::with_capacity(inst.l() + 1);
    let mut a = vec![0.0; m];
    for j in 0..n {
        let cj = inst.c[j];
        if cj != 0.0 {
            for (ac, pjc) in a.iter_mut().zip(pol.p.row(j)) {
                *ac += cj * pjc;
            }
        }
    }
    let (val, xi) = u.linmax(&a)?;
    out.push((crate::model::dot(&inst.c, &pol.q) + val - z, xi));
    for r in 0..inst.l() {
        let arow = inst.a.row(r);
        a.copy_from_slice(inst.d_mat.row(r));
        for j in 0..n {
            if arow[j] != 0.0 {
                for (ac, pjc) in a.iter_mut().zip(pol.p.row(j)) {
                    *ac -= arow[j] * pjc;
                }
            }
        }
        let (val, xi) = u.linmax(&a)?;
        let slack = crate::model::dot(arow, &pol.q) - inst.d[r];
        out.push((val - slack, xi));
    }
    Ok(out)
}

/// Exact robust counterpart of one robust row over a budgeted set, by LP
/// duality: min_{ξ∈U} gᵀξ = max { −kμ − Σν : μ, ν ≥ 0, g + μe + ν ≥ 0 }.
/// Row 0 is the objective epigraph, row r+1 constraint r; `cols` are the
/// m+1 reserved dual columns (μ first).
fn dual_block(
    inst: &AroInstance,
    lay: &Layout,
    k: f64,
    row: usize,
    cols: &[usize],
) -> Vec<(Vec<(usize, f64)>, f64)> {
    let (n, m) = (inst.n(), inst.m());
    // w·x(ξ) − D_r ξ ≥ d_r  with  w = a_r,  or  z − cᵀx(ξ) ≥ 0  with  w = −c
    let (w, dr, rhs): (Vec<f64>, Vec<f64>, f64) = if row == 0 {
        (inst.c.iter().map(|c| -c).collect(), vec![0.0; m], 0.0)
    } else {
        (
            inst.a.row(row - 1).to_vec(),
            inst.d_mat.row(row - 1).to_vec(),
            inst.d[row - 1],
        )
    };
    let mu = cols[0];
    let mut main = vec![(mu, -k)];
    if row == 0 {
        main.push((lay.z, 1.0));
    }
    let mut g: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
    for j in 0..n {
        if w[j] == 0.0 {
            continue;
        }
        main.push((lay.q[j], w[j]));
        for &(c, col) in &lay.p[j] {
            g[c].push((col, w[j]));
        }
    }
    let mut out = Vec::with_capacity(m + 1);
    for (c, mut gc) in g.into_iter().enumerate() {
        main.push((cols[c + 1], -1.0));
        gc.push((mu, 1.0));
        gc.push((cols[c + 1], 1.0));
        out.push((gc, dr[c]));
    }
    out.push((main, rhs));
    out
}

pub fn solve_affine_cutting_plane(inst: &AroInstance, cfg: &AffineConfig) -> Result<AffineOutcome> {
    let m = inst.m();
    let lay = layout(inst)?;
    let mut lp = super::LinearProgram::new(vec![0.0; lay.ncols]);
    lp.objective[lay.z] = 1.0;
    // budgeted sets: reserve dual columns so violated rows can be dualized
    let budget = match inst.uset.kind() {
        SetKind::Budgeted { k } => Some(*k),
        _ => None,
    };
    let dual_cols: Vec<Vec<usize>> = match budget {
        Some(_) => (0..=inst.l())
            .map(|_| {
                (0..=m)
                    .map(|_| lp.add_var(0.0, 0.0, f64::INFINITY))
                    .collect()
            })
            .collect(),
        None => Vec::new(),
    };
    let mut dualized = vec![false; dual_cols.len()];
    let mut pool: Vec<Vec<f64>> = vec![vec![0.0; m]];
    for i in 0..m {
        let mut e = vec![0.0; m];
        e[i] = 1.0;
        pool.push(e);
    }
    for xi in &pool {
        lp.add_row(objective_cut(inst, &lay, xi), Relation::Ge, 0.0);
        for r in 0..inst.l() {
            let (row, rhs) = constraint_cut(inst, &lay, r, xi);
            lp.add_row(row, Relation::Ge, rhs);
        }
    }
    let mut cuts = lp.rows.len();
    let mut master = Simplex::new(&lp, cfg.solver.clone());
    // the initial pool keeps the master bounded, so it is never dropped
    master.pin_rows();
    let mut status = master.solve();
    let mut history = Vec::new();
    let mut rounds = 0;
    loop {
        let sol = master.solution();
        if status != LpStatus::Optimal {
            return Ok(AffineOutcome {
                policy: extract(inst, &lay, &sol.x),
                objective: sol.objective,
                status,
                converged: false,
                rounds,
                cuts,
                history,
                max_violation: f64::INFINITY,
            });
        }
        rounds += 1;
        history.push(sol.objective);
        let pol = extract(inst, &lay, &sol.x);
        let viols = separate(inst, &pol, sol.x[lay.z])?;
        let worst = viols.iter().map(|v| v.0).fold(0.0, f64::max);
        let timed_out = cfg.solver.deadline.is_some_and(|d| Instant::now() >= d);
        if worst <= cfg.tol || rounds >= cfg.max_rounds || timed_out {
            return Ok(AffineOutcome {
                policy: pol,
                objective: sol.objective,
                status: if worst > cfg.tol && timed_out {
                    LpStatus::TimeLimit
                } else {
                    status
                },
                converged: worst <= cfg.tol,
                rounds,
                cuts,
                history,
                max_violation: worst,
            });
        }
        let before = cuts;
        for (k, (v, xi)) in viols.iter().enumerate() {
            if *v <= cfg.tol {
                continue;
            }
            if let (Some(b), false) = (budget, dualized.get(k).copied().unwrap_or(true)) {
                for (row, rhs) in dual_block(inst, &lay, b, k, &dual_cols[k]) {
                    master.add_pinned_row(row, Relation::Ge, rhs);
                    cuts += 1;
                }
                dualized[k] = true;
            } else if k == 0 {
                master.add_row(objective_cut(inst, &lay, xi), Relation::Ge, 0.0);
                cuts += 1;
            } else {
                let (row, rhs) = constraint_cut(inst, &lay, k - 1, xi);
                master.add_row(row, Relation::Ge, rhs);
                cuts += 1;
            }
        }
        if cuts == before {
            return Err(Error::Solver(
                "separation found violations but produced no cuts".into(),
            ));
        }
        status = master.reoptimize();
        // deleting only on strict progress keeps the loop from cycling
        if status == LpStatus::Optimal {
            let obj = master.solution().objective;
            if obj > sol.objective + 1e-9 * (1.0 + sol.objective.abs()) {
                master.drop_slack_rows(DROP_MARGIN);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::gen_affine_gap;
    use crate::lp::{build_box, solve_lp};
    use crate::model::StagePartition;
    use crate::usets::UncertaintySet;

    #[test]
    fn no_uncertainty_influence_converges_in_one_round() {
        let inst = AroInstance {
            a: Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]]),
            c: vec![1.0, 2.0],
            d_mat: Matrix::zeros(3, 2),
            d: vec![3.0, 0.0, 0.0],
            stages: StagePartition::new(vec![vec![0], vec![1]], vec![vec![0], vec![1]]),
            uset: UncertaintySet::hypersphere(2),
        };
        let out = solve_affine_cutting_plane(&inst, &AffineConfig::default()).unwrap();
        assert!(out.converged);
        assert_eq!(out.rounds, 1);
        assert!((out.objective - 3.0).abs() < 1e-9);
    }

    #[test]
    fn static_full_budget_matches_box() {
        let m = 3;
        let inst = AroInstance {
            a: Matrix::from_rows(&[
                vec![1.0, 0.2, 0.0],
                vec![0.0, 1.0, 0.5],
                vec![0.3, 0.0, 1.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
            ]),
            c: vec![1.0, 1.5, 0.7],
            d_mat: Matrix::from_rows(&[
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
                vec![0.0; 3],
                vec![0.0; 3],
                vec![0.0; 3],
            ]),
            d: vec![0.0; 6],
            stages: StagePartition::new(vec![vec![], vec![0, 1, 2]], vec![vec![0, 1, 2], vec![]]),
            uset: UncertaintySet::budgeted(m, 3.0).unwrap(),
        };
        let out = solve_affine_cutting_plane(&inst, &AffineConfig::default()).unwrap();
        let bx = solve_lp(&build_box(&inst), &SolverConfig::default());
        assert!(out.converged);
        assert!((out.objective - bx.objective).abs() < 1e-7);
    }

    #[test]
    fn affine_gap_m4() {
        let out = solve_affine_cutting_plane(&gen_affine_gap(4).unwrap(), &AffineConfig::default())
            .unwrap();
        assert!(out.converged);
        assert!(out.objective >= 1.0 - 1e-6, "{}", out.objective);
        assert!(out.history.windows(2).all(|w| w[1] >= w[0] - 1e-9));
    }
}

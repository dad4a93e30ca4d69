use std::collections::HashMap;

use super::{LinearProgram, Relation};
use crate::domsets::DominatingSet;
use crate::model::AroInstance;
use crate::{Error, Result};

/// How nonanticipativity between vertex solutions is imposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AliasMode {
    /// Vertices with equal revealed prefixes share the same LP columns.
    Merge,
    /// Every vertex gets its own columns, tied by explicit equality rows.
    EqualityRows,
}

/// Where the pieces of the vertex master live in the LP.
#[derive(Clone, Debug, PartialEq)]
pub struct VariableMap {
    /// `columns[i][j]`: column of decision j in the solution for vertex i
    /// (vertex 0 is v₀, vertex i ≥ 1 is v₀ + ρᵢeᵢ).
    pub columns: Vec<Vec<usize>>,
    pub z: usize,
    /// Re-scaling variables s ∈ [0,1]^m when enabled.
    pub scales: Option<Vec<usize>>,
    pub num_columns: usize,
}

fn vertex(dom: &DominatingSet, i: usize) -> Vec<f64> {
    let mut v = dom.v0.clone();
    if i > 0 {
        v[i - 1] += dom.rho[i - 1];
    }
    v
}

pub fn build_pap_master(
    inst: &AroInstance,
    dom: &DominatingSet,
    rescale: bool,
) -> Result<(LinearProgram, VariableMap)> {
    build_pap_master_with(inst, dom, rescale, AliasMode::Merge)
}

/// Vertex LP: min z s.t. z ≥ cᵀxᵢ and A xᵢ ≥ D vᵢ + d for every vertex vᵢ of
/// the dominating set, with stage-t blocks of xᵢ shared whenever vᵢ agrees
/// with another vertex on every coordinate revealed up to t. With re-scaling
/// the vertices become vᵢ + s⊙(e − vᵢ) and s joins the LP.
pub fn build_pap_master_with(
    inst: &AroInstance,
    dom: &DominatingSet,
    rescale: bool,
    mode: AliasMode,
) -> Result<(LinearProgram, VariableMap)> {
    let m = inst.m();
    let n = inst.n();
    if dom.dim() != m {
        return Err(Error::Dimension(format!(
            "dominating set of dimension {} for m={m}",
            dom.dim()
        )));
    }
    let verts: Vec<Vec<f64>> = (0..=m).map(|i| vertex(dom, i)).collect();
    let stages = &inst.stages;
    let mut columns = vec![vec![usize::MAX; n]; m + 1];
    let mut next = 0usize;
    // (vertex, representative) pairs that need equality rows
    let mut ties: Vec<(usize, usize, usize)> = Vec::new();
    for t in 0..stages.num_stages() {
        let prefix = stages.revealed_prefix(t)?;
        let decs = &stages.decisions[t];
        let mut classes: HashMap<Vec<u64>, usize> = HashMap::new();
        for (i, v) in verts.iter().enumerate() {
            let key: Vec<u64> = prefix.iter().map(|&c| v[c].to_bits()).collect();
            match (classes.get(&key), mode) {
                (Some(&rep), AliasMode::Merge) => {
                    for &j in decs {
                        columns[i][j] = columns[rep][j];
                    }
                }
                (rep, _) => {
                    if let Some(&rep) = rep {
                        ties.push((i, rep, t));
                    } else {
                        classes.insert(key, i);
                    }
                    for &j in decs {
                        columns[i][j] = next;
                        next += 1;
                    }
                }
            }
        }
    }
    let z = next;
    next += 1;
    let mut lp = LinearProgram::new(vec![0.0; next]);
    lp.objective[z] = 1.0;
    let scales = rescale.then(|| {
        (0..m)
            .map(|_| lp.add_var(0.0, 0.0, 1.0))
            .collect::<Vec<_>>()
    });

    let mut seen: HashMap<(Vec<usize>, Vec<u64>), ()> = HashMap::new();
    for (i, v) in verts.iter().enumerate() {
        let key = (columns[i].clone(), v.iter().map(|x| x.to_bits()).collect());
        if seen.insert(key, ()).is_some() {
            continue;
        }
        let mut epi = vec![(z, 1.0)];
        epi.extend(
            (0..n)
                .filter(|&j| inst.c[j] != 0.0)
                .map(|j| (columns[i][j], -inst.c[j])),
        );
        lp.add_row(epi, Relation::Ge, 0.0);
        let rhs = inst.rhs(v);
        for (r, rhs_r) in rhs.iter().enumerate() {
            let arow = inst.a.row(r);
            let mut coeffs: Vec<(usize, f64)> = (0..n)
                .filter(|&j| arow[j] != 0.0)
                .map(|j| (columns[i][j], arow[j]))
                .collect();
            if let Some(s) = &scales {
                let drow = inst.d_mat.row(r);
                for c in 0..m {
                    let w = drow[c] * (1.0 - v[c]);
                    if w != 0.0 {
                        coeffs.push((s[c], -w));
                    }
                }
            }
            lp.add_row(coeffs, Relation::Ge, *rhs_r);
        }
    }
    for (i, rep, t) in ties {
        for &j in &stages.decisions[t] {
            lp.add_row(
                vec![(columns[i][j], 1.0), (columns[rep][j], -1.0)],
                Relation::Eq,
                0.0,
            );
        }
    }
    let num_columns = lp.num_vars();
    Ok((
        lp,
        VariableMap {
            columns,
            z,
            scales,
            num_columns,
        },
    ))
}

/// Constant policy: min cᵀx s.t. A x ≥ D e + d.
pub fn build_box(inst: &AroInstance) -> LinearProgram {
    let mut lp = LinearProgram::new(inst.c.clone());
    let rhs = inst.rhs(&vec![1.0; inst.m()]);
    for (r, b) in rhs.iter().enumerate() {
        lp.add_dense_row(inst.a.row(r), Relation::Ge, *b);
    }
    lp
}

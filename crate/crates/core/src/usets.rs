//! Down-monotone uncertainty sets U ⊆ [0,1]^m containing every unit vector.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::lp::{self, LinearProgram, LpStatus, Relation, SolverConfig};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum SetKind {
    /// {ξ ≥ 0 : ‖ξ‖₂ ≤ 1}
    Hypersphere,
    /// {ξ ∈ [0,1]^m : Σξ ≤ k}
    Budgeted { k: f64 },
    /// {ξ ≥ 0 : ‖ξ‖_p ≤ 1}
    PNorm { p: f64 },
    /// {ξ ≥ 0 : ξᵀ((1−a)I + aJ)ξ ≤ 1}
    Ellipsoid { a: f64 },
    /// Down-monotone closure of conv(vertices).
    VertexPolytope { vertices: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct UncertaintySet {
    dim: usize,
    kind: SetKind,
}

fn positive_part(a: &[f64]) -> Vec<f64> {
    a.iter().map(|x| x.max(0.0)).collect()
}

fn norm2(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn pnorm(a: &[f64], p: f64) -> f64 {
    // scale first so large p does not overflow
    let mx = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if mx == 0.0 {
        return 0.0;
    }
    mx * a
        .iter()
        .map(|x| (x.abs() / mx).powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

impl UncertaintySet {
    pub fn hypersphere(m: usize) -> Self {
        UncertaintySet {
            dim: m,
            kind: SetKind::Hypersphere,
        }
    }

    pub fn budgeted(m: usize, k: f64) -> Result<Self> {
        if !(k >= 1.0 && k <= m as f64) {
            return Err(Error::InvalidInput(format!(
                "budget k={k} outside [1, {m}]"
            )));
        }
        Ok(UncertaintySet {
            dim: m,
            kind: SetKind::Budgeted { k },
        })
    }

    pub fn pnorm(m: usize, p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "p-norm needs 1 < p < inf, got {p}"
            )));
        }
        Ok(UncertaintySet {
            dim: m,
            kind: SetKind::PNorm { p },
        })
    }

    pub fn ellipsoid(m: usize, a: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::InvalidInput(format!(
                "ellipsoid weight a={a} outside [0,1]"
            )));
        }
        Ok(UncertaintySet {
            dim: m,
            kind: SetKind::Ellipsoid { a },
        })
    }

    /// Rejects vertices outside [0,1]^m and vertex sets that miss a unit vector.
    pub fn vertex_polytope(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let m = vertices
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidInput("no vertices".into()))?;
        for (k, v) in vertices.iter().enumerate() {
            if v.len() != m {
                return Err(Error::Dimension(format!(
                    "vertex {k} has length {}, expected {m}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !(0.0..=1.0).contains(x)) {
                return Err(Error::InvalidInput(format!("vertex {k} leaves [0,1]^m")));
            }
        }
        for i in 0..m {
            // e_i is dominated by a convex combination only if some vertex has v_i = 1
            if !vertices.iter().any(|v| v[i] >= 1.0 - 1e-12) {
                return Err(Error::InvalidInput(format!(
                    "unit vector e_{} not contained",
                    i + 1
                )));
            }
        }
        Ok(UncertaintySet {
            dim: m,
            kind: SetKind::VertexPolytope { vertices },
        })
    }

    /// Unit vectors plus `extra` random points of [0,1]^m with random support.
    pub fn random_vertex_polytope(m: usize, extra: usize, seed: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut vertices: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let mut e = vec![0.0; m];
                e[i] = 1.0;
                e
            })
            .collect();
        for _ in 0..extra {
            let density = rng.gen_range(0.2..1.0);
            vertices.push(
                (0..m)
                    .map(|_| {
                        if rng.gen_bool(density) {
                            rng.gen_range(0.0..=1.0)
                        } else {
                            0.0
                        }
                    })
                    .collect(),
            );
        }
        Self::vertex_polytope(vertices)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &SetKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            SetKind::Hypersphere => "hypersphere",
            SetKind::Budgeted { .. } => "budgeted",
            SetKind::PNorm { .. } => "pnorm",
            SetKind::Ellipsoid { .. } => "ellipsoid",
            SetKind::VertexPolytope { .. } => "vertex-polytope",
        }
    }

    pub fn is_permutation_invariant(&self) -> bool {
        !matches!(self.kind, SetKind::VertexPolytope { .. })
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Dimension(format!(
                "vector of length {} for set of dimension {}",
                x.len(),
                self.dim
            )));
        }
        Ok(())
    }

    pub fn contains(&self, xi: &[f64], tol: f64) -> Result<bool> {
        self.check_len(xi)?;
        if xi.iter().any(|x| !x.is_finite() || *x < -tol) {
            return Ok(false);
        }
        let x = positive_part(xi);
        Ok(match &self.kind {
            SetKind::Hypersphere => norm2(&x) <= 1.0 + tol,
            SetKind::Budgeted { k } => {
                x.iter().all(|v| *v <= 1.0 + tol) && x.iter().sum::<f64>() <= k + tol
            }
            SetKind::PNorm { p } => pnorm(&x, *p) <= 1.0 + tol,
            SetKind::Ellipsoid { a } => ellipsoid_norm(&x, *a) <= 1.0 + tol,
            SetKind::VertexPolytope { vertices } => polytope_contains(vertices, &x, tol)?,
        })
    }

    /// Largest average of the first j coordinates over U (permutation-invariant sets).
    pub fn gamma(&self, j: usize) -> Result<f64> {
        if j == 0 || j > self.dim {
            return Err(Error::InvalidInput(format!(
                "gamma needs 1 <= j <= {}, got {j}",
                self.dim
            )));
        }
        let jf = j as f64;
        Ok(match &self.kind {
            SetKind::Hypersphere => 1.0 / jf.sqrt(),
            SetKind::Budgeted { k } => (k / jf).min(1.0),
            SetKind::PNorm { p } => jf.powf(-1.0 / p),
            SetKind::Ellipsoid { a } => 1.0 / (a * jf * jf + (1.0 - a) * jf).sqrt(),
            SetKind::VertexPolytope { .. } => {
                return Err(Error::Unsupported("gamma of a vertex polytope".into()));
            }
        })
    }

    /// max { aᵀξ : ξ ∈ U } with a maximizer.
    pub fn linmax(&self, a: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.check_len(a)?;
        let m = self.dim;
        let ap = positive_part(a);
        if ap.iter().all(|x| *x == 0.0) {
            return Ok((0.0, vec![0.0; m]));
        }
        let xi = match &self.kind {
            SetKind::Hypersphere => {
                let n = norm2(&ap);
                ap.iter().map(|x| x / n).collect()
            }
            SetKind::Budgeted { k } => {
                let mut idx: Vec<usize> = (0..m).filter(|&i| ap[i] > 0.0).collect();
                idx.sort_by(|&i, &j| ap[j].total_cmp(&ap[i]).then(i.cmp(&j)));
                let mut left = *k;
                let mut xi = vec![0.0; m];
                for i in idx {
                    if left <= 0.0 {
                        break;
                    }
                    xi[i] = left.min(1.0);
                    left -= xi[i];
                }
                xi
            }
            SetKind::PNorm { p } => {
                let q = p / (p - 1.0);
                let mx = ap.iter().fold(0.0f64, |m, x| m.max(*x));
                let w: Vec<f64> = ap.iter().map(|x| (x / mx).powf(q - 1.0)).collect();
                let n = pnorm(&w, *p);
                w.iter().map(|x| x / n).collect()
            }
            SetKind::Ellipsoid { a: w } => ellipsoid_linmax(&ap, *w),
            SetKind::VertexPolytope { vertices } => {
                let mut best = (f64::NEG_INFINITY, 0);
                for (k, v) in vertices.iter().enumerate() {
                    let val: f64 = v.iter().zip(&ap).map(|(x, y)| x * y).sum();
                    if val > best.0 {
                        best = (val, k);
                    }
                }
                vertices[best.1]
                    .iter()
                    .zip(&ap)
                    .map(|(x, y)| if *y > 0.0 { *x } else { 0.0 })
                    .collect()
            }
        };
        let val = a.iter().zip(&xi).map(|(x, y)| x * y).sum();
        Ok((val, xi))
    }

    /// max { Σᵢ (ξᵢ − vᵢ)₊ : ξ ∈ U } with a maximizer; only for polyhedral sets.
    pub fn plusmax(&self, v: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.check_len(v)?;
        let m = self.dim;
        match &self.kind {
            SetKind::Budgeted { k } => {
                let mut idx: Vec<usize> = (0..m).collect();
                idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]).then(i.cmp(&j)));
                let whole = (k.floor() as usize).min(m);
                let frac = k - k.floor();
                let mut xi = vec![0.0; m];
                let mut val = 0.0;
                for &i in &idx[..whole] {
                    if v[i] < 1.0 {
                        xi[i] = 1.0;
                        val += 1.0 - v[i];
                    }
                }
                if whole < m && frac > v[idx[whole]] {
                    xi[idx[whole]] = frac;
                    val += frac - v[idx[whole]];
                }
                Ok((val, xi))
            }
            SetKind::VertexPolytope { vertices } => {
                let mut best = (f64::NEG_INFINITY, 0);
                for (k, w) in vertices.iter().enumerate() {
                    let val: f64 = w.iter().zip(v).map(|(x, y)| (x - y).max(0.0)).sum();
                    if val > best.0 {
                        best = (val, k);
                    }
                }
                Ok((best.0, vertices[best.1].clone()))
            }
            _ => Err(Error::Unsupported(format!(
                "plusmax over a {} set",
                self.name()
            ))),
        }
    }

    /// Largest t ≥ 0 with t·d ∈ U, for a non-negative direction d ≠ 0.
    pub fn radial_limit(&self, d: &[f64]) -> Result<f64> {
        self.check_len(d)?;
        let d = positive_part(d);
        if d.iter().all(|x| *x == 0.0) {
            return Ok(f64::INFINITY);
        }
        Ok(match &self.kind {
            SetKind::Hypersphere => 1.0 / norm2(&d),
            SetKind::Budgeted { k } => {
                let mx = d.iter().fold(0.0f64, |m, x| m.max(*x));
                (1.0 / mx).min(k / d.iter().sum::<f64>())
            }
            SetKind::PNorm { p } => 1.0 / pnorm(&d, *p),
            SetKind::Ellipsoid { a } => 1.0 / ellipsoid_norm(&d, *a),
            SetKind::VertexPolytope { .. } => {
                let mut hi = 1.0;
                while self.contains(&scale(&d, hi), 0.0)? {
                    hi *= 2.0;
                }
                let mut lo = 0.0;
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if self.contains(&scale(&d, mid), 0.0)? {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            }
        })
    }

    /// `n` deterministic pseudo-random points of U. Mixes dense, sparse and
    /// equal-valued directions pushed to the boundary with interior points, so
    /// the permutation-invariant extreme profiles are hit regularly.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = self.dim;
        let mut out = Vec::with_capacity(n);
        if let SetKind::VertexPolytope { vertices } = &self.kind {
            for _ in 0..n {
                out.push(sample_polytope(vertices, &mut rng));
            }
            return Ok(out);
        }
        let mut perm: Vec<usize> = (0..m).collect();
        while out.len() < n {
            let mode = rng.gen_range(0..4);
            let mut d = vec![0.0; m];
            match mode {
                0 => {
                    for x in d.iter_mut() {
                        *x = rng.sample::<f64, _>(StandardNormal).abs();
                    }
                }
                1 | 2 => {
                    let j = rng.gen_range(1..=m);
                    perm.shuffle(&mut rng);
                    for &i in &perm[..j] {
                        d[i] = if mode == 1 {
                            1.0
                        } else {
                            rng.sample::<f64, _>(StandardNormal).abs()
                        };
                    }
                }
                _ => {
                    for x in d.iter_mut() {
                        *x = if rng.gen_bool(0.5) {
                            rng.gen::<f64>()
                        } else {
                            0.0
                        };
                    }
                }
            }
            let t = self.radial_limit(&d)?;
            if !t.is_finite() {
                out.push(vec![0.0; m]);
                continue;
            }
            // boundary half of the time, otherwise a uniform radius
            let r = if rng.gen_bool(0.5) {
                1.0
            } else {
                rng.gen::<f64>()
            };
            let mut p = scale(&d, t * r);
            for x in p.iter_mut() {
                *x = x.min(1.0);
            }
            out.push(p);
        }
        Ok(out)
    }
}

fn scale(d: &[f64], t: f64) -> Vec<f64> {
    d.iter().map(|x| x * t).collect()
}

fn ellipsoid_norm(x: &[f64], a: f64) -> f64 {
    let s: f64 = x.iter().sum();
    let q: f64 = x.iter().map(|v| v * v).sum();
    ((1.0 - a) * q + a * s * s).max(0.0).sqrt()
}

/// Maximizer of aᵀξ over the non-negative ellipsoid for a ≥ 0, a ≠ 0. The
/// optimal support is a top set of a; on top-j the maximizer is proportional
/// to a_F − τ with τ = w·S_F/(1−w+w·j). Every candidate with non-negative
/// entries is feasible after scaling, so the best candidate is optimal.
fn ellipsoid_linmax(ap: &[f64], w: f64) -> Vec<f64> {
    let m = ap.len();
    let mut idx: Vec<usize> = (0..m).filter(|&i| ap[i] > 0.0).collect();
    idx.sort_by(|&i, &j| ap[j].total_cmp(&ap[i]).then(i.cmp(&j)));
    if w >= 1.0 - 1e-12 {
        let mut xi = vec![0.0; m];
        xi[idx[0]] = 1.0;
        return xi;
    }
    let (mut s1, mut s2) = (0.0, 0.0);
    let mut best = (f64::NEG_INFINITY, 1, 0.0);
    for (j0, &i) in idx.iter().enumerate() {
        let j = (j0 + 1) as f64;
        s1 += ap[i];
        s2 += ap[i] * ap[i];
        let tau = w * s1 / (1.0 - w + w * j);
        if ap[i] < tau {
            continue;
        }
        let su = s1 - j * tau;
        let suu = s2 - 2.0 * tau * s1 + j * tau * tau;
        let quad = (1.0 - w) * suu + w * su * su;
        if quad <= 0.0 {
            continue;
        }
        let val = (s2 - tau * s1) / quad.sqrt();
        if val > best.0 {
            best = (val, j0 + 1, tau);
        }
    }
    let (_, j, tau) = best;
    let mut xi = vec![0.0; m];
    for &i in &idx[..j] {
        xi[i] = ap[i] - tau;
    }
    let nrm = ellipsoid_norm(&xi, w);
    xi.iter().map(|x| x / nrm).collect()
}

fn polytope_contains(vertices: &[Vec<f64>], x: &[f64], tol: f64) -> Result<bool> {
    // cheap exits first
    if vertices
        .iter()
        .any(|v| v.iter().zip(x).all(|(a, b)| *a >= b - tol))
    {
        return Ok(true);
    }
    if x.iter().any(|v| *v > 1.0 + tol) {
        return Ok(false);
    }
    let k = vertices.len();
    let mut lp = LinearProgram::new(vec![0.0; k]);
    for j in 0..k {
        lp.lower[j] = 0.0;
    }
    lp.add_row((0..k).map(|j| (j, 1.0)).collect(), Relation::Eq, 1.0);
    for (i, xi) in x.iter().enumerate() {
        let row: Vec<(usize, f64)> = vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| v[i] != 0.0)
            .map(|(j, v)| (j, v[i]))
            .collect();
        lp.add_row(row, Relation::Ge, xi - tol);
    }
    let sol = lp::solve_lp(&lp, &SolverConfig::default());
    match sol.status {
        LpStatus::Optimal => Ok(true),
        LpStatus::Infeasible => Ok(false),
        s => Err(Error::Solver(format!(
            "polytope membership LP ended with {s:?}"
        ))),
    }
}

fn sample_polytope(vertices: &[Vec<f64>], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let m = vertices[0].len();
    let mut w: Vec<f64> = vertices
        .iter()
        .map(|_| {
            if rng.gen_bool(0.6) {
                rng.sample::<f64, _>(Exp1)
            } else {
                0.0
            }
        })
        .collect();
    let total: f64 = w.iter().sum();
    if total == 0.0 {
        let k = rng.gen_range(0..vertices.len());
        w[k] = 1.0;
    }
    let total: f64 = w.iter().sum();
    let mut p = vec![0.0; m];
    for (wk, v) in w.iter().zip(vertices) {
        for (pi, vi) in p.iter_mut().zip(v) {
            *pi += wk / total * vi;
        }
    }
    // push part of the points below the hull to exercise down-monotonicity
    if rng.gen_bool(0.3) {
        for x in p.iter_mut() {
            if rng.gen_bool(0.5) {
                *x *= rng.gen::<f64>();
            }
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn membership_examples() {
        assert!(UncertaintySet::hypersphere(2)
            .contains(&[1.0, 0.0], 0.0)
            .unwrap());
        let b = UncertaintySet::budgeted(4, 2.0).unwrap();
        assert!(!b.contains(&[1.0, 1.0, 0.5, 0.0], 1e-9).unwrap());
        let e = UncertaintySet::ellipsoid(2, 1.0).unwrap();
        assert!(e.contains(&[0.5, 0.5], 1e-12).unwrap());
        assert!(!e.contains(&[0.5, 0.6], 1e-12).unwrap());
        assert!(!UncertaintySet::hypersphere(2)
            .contains(&[-0.1, 0.0], 1e-9)
            .unwrap());
    }

    #[test]
    fn gamma_examples() {
        assert!(close(UncertaintySet::hypersphere(4).gamma(4).unwrap(), 0.5));
        let b = UncertaintySet::budgeted(4, 2.0).unwrap();
        assert!(close(b.gamma(1).unwrap(), 1.0));
        assert!(close(b.gamma(4).unwrap(), 0.5));
        assert!(close(
            UncertaintySet::ellipsoid(4, 0.0).unwrap().gamma(4).unwrap(),
            0.5
        ));
    }

    /// γ(j) is the value of linmax for the direction 1/j on the first j coords.
    #[test]
    fn gamma_agrees_with_linmax() {
        let sets = [
            UncertaintySet::hypersphere(7),
            UncertaintySet::budgeted(7, 2.5).unwrap(),
            UncertaintySet::pnorm(7, 3.0).unwrap(),
            UncertaintySet::ellipsoid(7, 0.3).unwrap(),
        ];
        for u in &sets {
            for j in 1..=7 {
                let mut a = vec![0.0; 7];
                a[..j].iter_mut().for_each(|x| *x = 1.0 / j as f64);
                let (v, _) = u.linmax(&a).unwrap();
                assert!(
                    (v - u.gamma(j).unwrap()).abs() < 1e-12,
                    "{} j={j}",
                    u.name()
                );
            }
        }
    }

    #[test]
    fn linmax_examples() {
        let (v, x) = UncertaintySet::hypersphere(2).linmax(&[3.0, -4.0]).unwrap();
        assert!(close(v, 3.0));
        assert_eq!(x, vec![1.0, 0.0]);
        let (v, x) = UncertaintySet::budgeted(4, 2.0)
            .unwrap()
            .linmax(&[3.0, -1.0, 2.0, 0.5])
            .unwrap();
        assert!(close(v, 5.0));
        assert_eq!(x, vec![1.0, 0.0, 1.0, 0.0]);
        let (v, _) = UncertaintySet::pnorm(3, 2.5)
            .unwrap()
            .linmax(&[0.0; 3])
            .unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn plusmax_examples() {
        let b = UncertaintySet::budgeted(3, 2.0).unwrap();
        let (v, x) = b.plusmax(&[0.2, 0.5, 0.9]).unwrap();
        assert!(close(v, 1.3));
        assert_eq!(x, vec![1.0, 1.0, 0.0]);
        let bx = UncertaintySet::vertex_polytope(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ])
        .unwrap();
        assert_eq!(bx.plusmax(&[1.0, 1.0]).unwrap().0, 0.0);
        let (v, x) = bx.plusmax(&[0.0, 0.0]).unwrap();
        assert_eq!((v, x), (2.0, vec![1.0, 1.0]));
        assert!(UncertaintySet::hypersphere(3).plusmax(&[0.0; 3]).is_err());
    }

    /// Brute force over all vertices of the budgeted polytope for fractional k.
    #[test]
    fn budgeted_plusmax_matches_vertex_enumeration() {
        let u = UncertaintySet::budgeted(4, 2.5).unwrap();
        let v = [0.3, 0.7, 0.1, 0.45];
        let mut best = 0.0f64;
        for mask in 0u32..(1 << 4) {
            let ones: Vec<usize> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
            if ones.len() > 2 {
                continue;
            }
            for frac in std::iter::once(None).chain((0..4).map(Some)) {
                let mut x = [0.0; 4];
                for &i in &ones {
                    x[i] = 1.0;
                }
                if let Some(f) = frac {
                    if ones.contains(&f) || ones.len() != 2 {
                        continue;
                    }
                    x[f] = 0.5;
                }
                best = best.max(
                    x.iter()
                        .zip(&v)
                        .map(|(a, b): (&f64, &f64)| (a - b).max(0.0))
                        .sum::<f64>(),
                );
            }
        }
        assert!((u.plusmax(&v).unwrap().0 - best).abs() < 1e-12);
    }

    #[test]
    fn unit_vector_required_in_polytope() {
        assert!(UncertaintySet::vertex_polytope(vec![vec![0.5, 1.0]]).is_err());
        assert!(UncertaintySet::vertex_polytope(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).is_ok());
    }

    #[test]
    fn polytope_membership() {
        let s = UncertaintySet::vertex_polytope(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(s.contains(&[0.5, 0.5], 1e-9).unwrap());
        assert!(s.contains(&[0.2, 0.3], 1e-9).unwrap());
        assert!(!s.contains(&[0.6, 0.6], 1e-9).unwrap());
    }

    #[test]
    fn sampling_examples() {
        let h = UncertaintySet::hypersphere(2);
        let pts = h.sample(100, 7).unwrap();
        assert_eq!(pts.len(), 100);
        assert!(pts.iter().all(|p| h.contains(p, 1e-9).unwrap()));
        let b = UncertaintySet::budgeted(4, 2.0).unwrap();
        let pts = b.sample(50, 1).unwrap();
        assert!(pts.iter().all(|p| p.iter().sum::<f64>() <= 2.0 + 1e-9));
        assert_eq!(pts, b.sample(50, 1).unwrap());
    }
}

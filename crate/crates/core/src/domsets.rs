//! Dominating sets Û = conv(v₀, v₀+ρ₁e₁, …, v₀+ρ_m e_m) for an uncertainty
//! set U, built in closed form for the permutation-invariant families and by
//! the iterative base-vertex scheme for polyhedral sets.

use std::collections::HashSet;

use crate::usets::{SetKind, UncertaintySet};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Origin {
    ClosedForm,
    /// Base-vertex iteration; `iterations` is the loop count J (β = 2J+1).
    Iterative {
        iterations: usize,
    },
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DominatingSet {
    pub v0: Vec<f64>,
    pub rho: Vec<f64>,
    /// Approximation factor guaranteed by the construction (Û/β ⊆ U).
    pub beta: f64,
    /// Common base value when v₀ = μe.
    pub mu: Option<f64>,
    pub origin: Origin,
}

impl DominatingSet {
    /// ρᵢ may only vanish where v₀ᵢ ≥ 1, i.e. where U cannot exceed v₀.
    pub fn new(v0: Vec<f64>, rho: Vec<f64>, beta: f64) -> Result<Self> {
        if v0.len() != rho.len() {
            return Err(Error::Dimension(format!(
                "v0 has length {}, rho {}",
                v0.len(),
                rho.len()
            )));
        }
        for i in 0..v0.len() {
            if !(v0[i].is_finite() && rho[i].is_finite() && v0[i] >= 0.0 && rho[i] >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "bad base vertex or step at coordinate {}",
                    i + 1
                )));
            }
            if rho[i] == 0.0 && v0[i] < 1.0 {
                return Err(Error::InvalidInput(format!(
                    "rho_{} = 0 while v0_{} < 1",
                    i + 1,
                    i + 1
                )));
            }
        }
        Ok(DominatingSet {
            v0,
            rho,
            beta,
            mu: None,
            origin: Origin::Custom,
        })
    }

    fn uniform(m: usize, mu: f64, rho: f64, beta: f64) -> Self {
        DominatingSet {
            v0: vec![mu; m],
            rho: vec![rho; m],
            beta,
            mu: Some(mu),
            origin: Origin::ClosedForm,
        }
    }

    pub fn dim(&self) -> usize {
        self.v0.len()
    }

    /// Vertex 0 is v₀, vertex i ≥ 1 is v₀ + ρᵢeᵢ.
    pub fn vertex(&self, i: usize) -> Vec<f64> {
        let mut v = self.v0.clone();
        if i > 0 {
            v[i - 1] += self.rho[i - 1];
        }
        v
    }

    pub fn vertices(&self) -> Vec<Vec<f64>> {
        (0..=self.dim()).map(|i| self.vertex(i)).collect()
    }

    /// λᵢ = ((ξ − v₀)₊)ᵢ / ρᵢ. Coordinates with ρᵢ = 0 give 0 when ξᵢ ≤ v₀ᵢ
    /// and +∞ otherwise.
    pub fn lambda(&self, xi: &[f64]) -> Vec<f64> {
        xi.iter()
            .zip(&self.v0)
            .zip(&self.rho)
            .map(|((x, v), r)| {
                let e = (x - v).max(0.0);
                if e == 0.0 {
                    0.0
                } else if *r == 0.0 {
                    f64::INFINITY
                } else {
                    e / r
                }
            })
            .collect()
    }

    /// Σλ(ξ); ξ is dominated inside Û iff this is ≤ 1.
    pub fn weight(&self, xi: &[f64]) -> f64 {
        self.lambda(xi).iter().sum()
    }
}

fn hypersphere(m: f64) -> (f64, f64, f64) {
    let r = m.powf(0.25);
    (1.0 / (2.0 * r), r / 2.0, ((m.sqrt() + 1.0) / 2.0).sqrt())
}

/// Closed-form (μ, ρ, β) for the permutation-invariant families.
pub fn build_closed_form(u: &UncertaintySet) -> Result<DominatingSet> {
    let m = u.dim();
    let mf = m as f64;
    let (mu, rho, beta) = match u.kind() {
        SetKind::Hypersphere => hypersphere(mf),
        SetKind::Budgeted { k } => {
            let den = mf + k * (k - 2.0);
            let mu = k * (k - 1.0) / den;
            let rho = k * (mf - k) / den;
            // the two containment conditions coincide for integer k
            let beta = ((mf * mu + rho) / k).max(mu + rho);
            (mu, rho, beta)
        }
        SetKind::PNorm { p } => {
            let kk = 2.0 * (mf - 1.0) + 2f64.powf(*p);
            let e = (1.0 - 1.0 / p).powi(2);
            let mu = 2f64.powf(1.0 / p) * kk.powf(-1.0 / (p * p)) / p * (p - 1.0).powf(1.0 / p + e);
            let rho =
                2f64.powf(1.0 / p - 1.0) * kk.powf(1.0 / p - 1.0 / (p * p)) / p * (p - 1.0).powf(e);
            let beta = kk.powf(1.0 / p - 1.0 / (p * p)) * p.powf(1.0 / p - 1.0) * (p - 1.0).powf(e);
            (mu, rho, beta)
        }
        SetKind::Ellipsoid { a } => {
            let a = *a;
            if a <= mf.powf(-2.0 / 3.0) {
                let b = 1.0 - a;
                let mu = 1.0 / (2.0 * (b.powi(3) * mf + b * b * a * mf * mf).powf(0.25));
                let rho = 1.0 / (4.0 * b * mu);
                let beta = (0.5 * (1.0 + (a * mf + (b * mf + a * mf * mf).sqrt()) / b)).sqrt();
                (mu, rho, beta)
            } else {
                (0.0, 1.0 / a.sqrt(), 1.0 / a.sqrt())
            }
        }
        SetKind::VertexPolytope { .. } => {
            return Err(Error::Unsupported(
                "no closed form for vertex polytopes; use build_general".into(),
            ));
        }
    };
    Ok(DominatingSet::uniform(m, mu, rho, beta))
}

/// Iterative base-vertex construction: starting from v = 0, while
/// max_ξ Σ(ξ − v)₊ exceeds j+1, raise v to the componentwise max with the
/// maximizer. Then β = 2J+1 and ρᵢ = (β+1)/2.
pub fn build_general(u: &UncertaintySet) -> Result<DominatingSet> {
    let m = u.dim();
    let mut v = vec![0.0; m];
    let mut j = 0usize;
    loop {
        let (val, xi) = u.plusmax(&v)?;
        if val <= (j + 1) as f64 + 1e-12 {
            break;
        }
        for (vi, x) in v.iter_mut().zip(&xi) {
            *vi = vi.max(*x);
        }
        j += 1;
        if j > m {
            return Err(Error::Solver(
                "base-vertex iteration did not terminate".into(),
            ));
        }
    }
    let beta = 2.0 * j as f64 + 1.0;
    Ok(DominatingSet {
        v0: v,
        rho: vec![(beta + 1.0) / 2.0; m],
        beta,
        mu: None,
        origin: Origin::Iterative { iterations: j },
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CheckMode {
    /// Exact: max_j j(γ(j) − μ)₊/ρ for symmetric sets, vertex enumeration for
    /// vertex polytopes.
    ClosedForm,
    Sampling {
        n: usize,
        seed: u64,
    },
}

/// max over ξ ∈ U of Σλ(ξ); the set is a valid dominating set iff ≤ 1.
pub fn check_validity(dom: &DominatingSet, u: &UncertaintySet, mode: CheckMode) -> Result<f64> {
    let m = u.dim();
    if dom.dim() != m {
        return Err(Error::Dimension(format!(
            "dominating set of dimension {} for m={m}",
            dom.dim()
        )));
    }
    match mode {
        CheckMode::ClosedForm => {
            if let SetKind::VertexPolytope { vertices } = u.kind() {
                return Ok(vertices.iter().map(|w| dom.weight(w)).fold(0.0, f64::max));
            }
            let uniform =
                dom.v0.iter().all(|x| *x == dom.v0[0]) && dom.rho.iter().all(|x| *x == dom.rho[0]);
            if !uniform {
                return Err(Error::Unsupported(
                    "closed-form check needs v0 = μe and constant ρ".into(),
                ));
            }
            let (mu, rho) = (dom.v0[0], dom.rho[0]);
            let mut worst = 0.0f64;
            for j in 1..=m {
                let excess = j as f64 * (u.gamma(j)? - mu).max(0.0);
                let t = if excess == 0.0 {
                    0.0
                } else if rho == 0.0 {
                    f64::INFINITY
                } else {
                    excess / rho
                };
                worst = worst.max(t);
            }
            Ok(worst)
        }
        CheckMode::Sampling { n, seed } => {
            let mut worst = 0.0f64;
            for xi in u.sample(n, seed)? {
                worst = worst.max(dom.weight(&xi));
            }
            for i in 0..m {
                let mut e = vec![0.0; m];
                e[i] = 1.0;
                worst = worst.max(dom.weight(&e));
            }
            Ok(worst)
        }
    }
}

/// Smallest β ≥ 1 with every vertex of Û inside βU, by 60-step bisection
/// on membership (independent of the closed-form β).
pub fn compute_beta(dom: &DominatingSet, u: &UncertaintySet) -> Result<f64> {
    let m = u.dim();
    let hi0 = 4.0 * (m as f64).sqrt() + 4.0;
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut beta = 1.0f64;
    for w in dom.vertices() {
        if u.is_permutation_invariant() {
            let mut key: Vec<u64> = w.iter().map(|x| x.to_bits()).collect();
            key.sort_unstable();
            if !seen.insert(key) {
                continue;
            }
        }
        let inside = |b: f64| -> Result<bool> {
            let p: Vec<f64> = w.iter().map(|x| x / b).collect();
            u.contains(&p, 0.0)
        };
        if inside(1.0)? {
            continue;
        }
        if !inside(hi0)? {
            return Err(Error::InvalidInput(format!("vertex not inside {hi0}·U")));
        }
        let (mut lo, mut hi) = (1.0, hi0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if inside(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        beta = beta.max(hi);
    }
    Ok(beta)
}

/// v′ = v + s⊙(e − v) for every vertex.
pub fn apply_scales(vertices: &[Vec<f64>], s: &[f64]) -> Vec<Vec<f64>> {
    vertices
        .iter()
        .map(|v| {
            v.iter()
                .zip(s)
                .map(|(vi, si)| vi + si * (1.0 - vi))
                .collect()
        })
        .collect()
}

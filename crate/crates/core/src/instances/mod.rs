//! Instance families: random Gaussian covering problems, the multistage
//! demand-covering model, and the small family on which affine policies are
//! provably poor. Every generator is a pure function of its spec.

mod file;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

pub use file::{decode, encode, write_realizations_csv, SCHEMA_VERSION};

use crate::model::{AroInstance, Matrix, StagePartition};
use crate::usets::UncertaintySet;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetChoice {
    Hypersphere,
    /// Budget k = √m unless overridden.
    Budgeted,
}

impl SetChoice {
    pub fn name(self) -> &'static str {
        match self {
            SetChoice::Hypersphere => "hypersphere",
            SetChoice::Budgeted => "budgeted",
        }
    }

    fn build(self, m: usize, budget: Option<f64>) -> Result<UncertaintySet> {
        match self {
            SetChoice::Hypersphere => Ok(UncertaintySet::hypersphere(m)),
            SetChoice::Budgeted => UncertaintySet::budgeted(m, budget.unwrap_or((m as f64).sqrt())),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageLayout {
    /// ⌊√m⌋ stages; stage t reveals block t and decides the matching block.
    #[default]
    Multistage,
    /// Here-and-now first block of decisions, everything else after all of ξ.
    TwoStage,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec {
    pub m: usize,
    pub alpha: f64,
    pub uset: SetChoice,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
    #[serde(default)]
    pub layout: StageLayout,
}

impl GaussianSpec {
    pub fn new(m: usize, alpha: f64, uset: SetChoice, seed: u64) -> Self {
        GaussianSpec {
            m,
            alpha,
            uset,
            seed,
            budget: None,
            layout: StageLayout::Multistage,
        }
    }
}

fn default_execution() -> usize {
    8
}

fn default_cost_resource() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemandSpec {
    pub locations: usize,
    pub planning: usize,
    #[serde(default = "default_execution")]
    pub execution: usize,
    #[serde(default = "default_cost_resource")]
    pub cost_resource: f64,
    pub cost_demand: f64,
    pub uset: SetChoice,
    pub seed: u64,
}

impl DemandSpec {
    pub fn new(
        locations: usize,
        planning: usize,
        cost_demand: f64,
        uset: SetChoice,
        seed: u64,
    ) -> Self {
        DemandSpec {
            locations,
            planning,
            execution: 8,
            cost_resource: 1.0,
            cost_demand,
            uset,
            seed,
        }
    }

    /// Base uncertainty dimension 2·m^l·m^p·m^e.
    pub fn dim(&self) -> usize {
        2 * self.locations * self.planning * self.execution
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum InstanceSpec {
    Gaussian(GaussianSpec),
    Demand(DemandSpec),
    AffineGap { m: usize },
}

impl InstanceSpec {
    pub fn generate(&self) -> Result<AroInstance> {
        match self {
            InstanceSpec::Gaussian(g) => gen_gaussian(g),
            InstanceSpec::Demand(d) => gen_demand_covering(d).map(|(i, _)| i),
            InstanceSpec::AffineGap { m } => gen_affine_gap(*m),
        }
    }
}

fn isqrt(m: usize) -> usize {
    let mut r = (m as f64).sqrt() as usize;
    while r * r > m {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= m {
        r += 1;
    }
    r
}

/// ⌊√m⌋ contiguous blocks, sizes as equal as possible, larger blocks first.
pub fn gaussian_blocks(m: usize) -> Vec<Vec<usize>> {
    let t = isqrt(m).max(1);
    let (base, rem) = (m / t, m % t);
    let mut out = Vec::with_capacity(t);
    let mut start = 0;
    for b in 0..t {
        let len = base + usize::from(b < rem);
        out.push((start..start + len).collect());
        start += len;
    }
    out
}

/// c = e + αg, A = I + G over rows A x ≥ ξ, plus x ≥ 0 rows; G = |Y|/√m and
/// g = |y| for standard Gaussian Y, y drawn in that order.
pub fn gen_gaussian(spec: &GaussianSpec) -> Result<AroInstance> {
    let m = spec.m;
    if m < 2 {
        return Err(Error::InvalidInput(format!(
            "Gaussian instances need m >= 2, got {m}"
        )));
    }
    if !(spec.alpha >= 0.0 && spec.alpha.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "alpha must be finite and >= 0, got {}",
            spec.alpha
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sq = (m as f64).sqrt();
    let mut a = Matrix::zeros(2 * m, m);
    for i in 0..m {
        for j in 0..m {
            let y: f64 = StandardNormal.sample(&mut rng);
            a.set(i, j, y.abs() / sq + if i == j { 1.0 } else { 0.0 });
        }
    }
    let c: Vec<f64> = (0..m)
        .map(|_| {
            let y: f64 = StandardNormal.sample(&mut rng);
            1.0 + spec.alpha * y.abs()
        })
        .collect();
    let mut d_mat = Matrix::zeros(2 * m, m);
    for i in 0..m {
        a.set(m + i, i, 1.0);
        d_mat.set(i, i, 1.0);
    }
    let blocks = gaussian_blocks(m);
    let stages = match spec.layout {
        StageLayout::Multistage => StagePartition::new(blocks.clone(), blocks),
        StageLayout::TwoStage => {
            let rest: Vec<usize> = blocks[1..].iter().flatten().copied().collect();
            StagePartition::new(
                vec![vec![], (0..m).collect()],
                vec![blocks[0].clone(), rest],
            )
        }
    };
    Ok(AroInstance {
        a,
        c,
        d_mat,
        d: vec![0.0; 2 * m],
        stages,
        uset: spec.uset.build(m, spec.budget)?,
    })
}

/// Two stages: scalar α (cost √m) first, then x ≥ 0 with unit costs, subject
/// to αe + x ≥ ξ over the hypersphere.
pub fn gen_affine_gap(m: usize) -> Result<AroInstance> {
    if m < 2 {
        return Err(Error::InvalidInput(format!(
            "affine-gap instances need m >= 2, got {m}"
        )));
    }
    let n = m + 1;
    let mut a = Matrix::zeros(2 * m + 1, n);
    let mut d_mat = Matrix::zeros(2 * m + 1, m);
    for i in 0..m {
        a.set(i, 0, 1.0);
        a.set(i, i + 1, 1.0);
        d_mat.set(i, i, 1.0);
    }
    for j in 0..n {
        a.set(m + j, j, 1.0);
    }
    let mut c = vec![1.0; n];
    c[0] = (m as f64).sqrt();
    Ok(AroInstance {
        a,
        c,
        d_mat,
        d: vec![0.0; 2 * m + 1],
        stages: StagePartition::new(
            vec![vec![], (0..m).collect()],
            vec![vec![0], (1..n).collect()],
        ),
        uset: UncertaintySet::hypersphere(m),
    })
}

/// Index bookkeeping for the compiled demand-covering model.
#[derive(Clone, Debug, PartialEq)]
pub struct DemandMeta {
    pub locations: usize,
    pub planning: usize,
    pub execution: usize,
    pub positions: Vec<(i64, i64)>,
    /// `demand[t][l]` = d_{lt}
    pub demand: Vec<Vec<f64>>,
    /// Loss rate on delay out of period t.
    pub q_delay: Vec<f64>,
    /// Loss rate on redirect l → l′.
    pub q_redirect: Vec<Vec<f64>>,
    pub var_labels: Vec<String>,
    pub coord_labels: Vec<String>,
}

impl DemandMeta {
    pub fn periods(&self) -> usize {
        self.planning * self.execution
    }

    pub fn var_r(&self, p: usize, l: usize) -> usize {
        1 + p * self.locations + l
    }

    fn period_base(&self, t: usize) -> usize {
        1 + self.planning * self.locations + t * self.locations * self.locations
    }

    pub fn var_delay(&self, t: usize, l: usize) -> usize {
        self.period_base(t) + l
    }

    pub fn var_redirect(&self, t: usize, from: usize, to: usize) -> usize {
        assert_ne!(from, to);
        let k = from * (self.locations - 1) + if to > from { to - 1 } else { to };
        self.period_base(t) + self.locations + k
    }

    fn chunk(&self, t: usize) -> usize {
        (t / self.execution) * 2 * self.execution * self.locations
    }

    pub fn coord_planning(&self, t: usize, l: usize) -> usize {
        self.chunk(t) + (t % self.execution) * self.locations + l
    }

    pub fn coord_execution(&self, t: usize, l: usize) -> usize {
        self.chunk(t) + self.execution * self.locations + (t % self.execution) * self.locations + l
    }

    /// Realized demand d_{lt}(1 + ξᵖ_{lt} + ½ξᵉ_{lt}), indexed [t][l].
    pub fn realized_demand(&self, xi: &[f64]) -> Vec<Vec<f64>> {
        (0..self.periods())
            .map(|t| {
                (0..self.locations)
                    .map(|l| {
                        let d = self.demand[t][l];
                        d * (1.0
                            + xi[self.coord_planning(t, l)]
                            + 0.5 * xi[self.coord_execution(t, l)])
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn gen_demand_covering(spec: &DemandSpec) -> Result<(AroInstance, DemandMeta)> {
    let (nl, np, ne) = (spec.locations, spec.planning, spec.execution);
    if nl < 2 || np < 1 || ne < 1 {
        return Err(Error::InvalidInput(format!(
            "need m^l >= 2, m^p >= 1, m^e >= 1; got {nl}, {np}, {ne}"
        )));
    }
    if !(spec.cost_demand > 0.0 && spec.cost_resource > 0.0) {
        return Err(Error::InvalidInput("costs must be positive".into()));
    }
    let tt = np * ne;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let side = 2 * isqrt(nl) as i64 + 1;
    let positions: Vec<(i64, i64)> = (0..nl)
        .map(|_| (rng.gen_range(0..=side), rng.gen_range(0..=side)))
        .collect();
    let normal = Normal::new(10.0, 2.0).expect("valid normal");
    let demand: Vec<Vec<f64>> = (0..tt)
        .map(|_| {
            (0..nl)
                .map(|_| {
                    let v: f64 = normal.sample(&mut rng);
                    v.max(0.0)
                })
                .collect()
        })
        .collect();
    let q_delay: Vec<f64> = (0..tt)
        .map(|t| if t % ne == ne - 1 { 0.2 } else { 0.1 })
        .collect();
    let q_redirect: Vec<Vec<f64>> = positions
        .iter()
        .map(|a| {
            positions
                .iter()
                .map(|b| {
                    let dist = (((a.0 - b.0).pow(2) + (a.1 - b.1).pow(2)) as f64).sqrt();
                    (1.0 - 0.02 * dist).max(0.0)
                })
                .collect()
        })
        .collect();
    let mut meta = DemandMeta {
        locations: nl,
        planning: np,
        execution: ne,
        positions,
        demand,
        q_delay,
        q_redirect,
        var_labels: Vec::new(),
        coord_labels: Vec::new(),
    };
    let n = 1 + np * nl + tt * nl * nl;
    let m = spec.dim();

    let mut var_labels = vec![String::new(); n];
    var_labels[0] = "R".into();
    for p in 0..np {
        for l in 0..nl {
            var_labels[meta.var_r(p, l)] = format!("r[{p}][{l}]");
        }
    }
    for t in 0..tt {
        for l in 0..nl {
            var_labels[meta.var_delay(t, l)] = format!("sd[{t}][{l}]");
            for l2 in (0..nl).filter(|&x| x != l) {
                var_labels[meta.var_redirect(t, l, l2)] = format!("sr[{t}][{l}][{l2}]");
            }
        }
    }
    let mut coord_labels = vec![String::new(); m];
    for t in 0..tt {
        for l in 0..nl {
            coord_labels[meta.coord_planning(t, l)] = format!("xp[{t}][{l}]");
            coord_labels[meta.coord_execution(t, l)] = format!("xe[{t}][{l}]");
        }
    }

    let mut unc = vec![vec![]];
    let mut dec = vec![vec![0]];
    for p in 0..np {
        let periods = p * ne..(p + 1) * ne;
        let mut block: Vec<usize> = periods
            .clone()
            .flat_map(|t| (0..nl).map(move |l| (t, l)))
            .map(|(t, l)| meta.coord_planning(t, l))
            .collect();
        block.sort_unstable();
        unc.push(block);
        dec.push((0..nl).map(|l| meta.var_r(p, l)).collect());
        for t in periods {
            unc.push((0..nl).map(|l| meta.coord_execution(t, l)).collect());
            let mut d: Vec<usize> = (0..nl).map(|l| meta.var_delay(t, l)).collect();
            for l in 0..nl {
                for l2 in (0..nl).filter(|&x| x != l) {
                    d.push(meta.var_redirect(t, l, l2));
                }
            }
            d.sort_unstable();
            dec.push(d);
        }
    }

    let rows = tt * nl + np + n;
    let mut a = Matrix::zeros(rows, n);
    let mut d_mat = Matrix::zeros(rows, m);
    let mut d = vec![0.0; rows];
    let mut r = 0;
    for t in 0..tt {
        for l in 0..nl {
            a.set(r, meta.var_r(t / ne, l), 1.0);
            a.set(r, meta.var_delay(t, l), 1.0);
            if t > 0 {
                a.set(r, meta.var_delay(t - 1, l), -(1.0 - meta.q_delay[t - 1]));
            }
            for l2 in (0..nl).filter(|&x| x != l) {
                a.set(r, meta.var_redirect(t, l, l2), 1.0);
                a.set(
                    r,
                    meta.var_redirect(t, l2, l),
                    -(1.0 - meta.q_redirect[l2][l]),
                );
            }
            let dem = meta.demand[t][l];
            d_mat.set(r, meta.coord_planning(t, l), dem);
            d_mat.set(r, meta.coord_execution(t, l), dem / 2.0);
            d[r] = dem;
            r += 1;
        }
    }
    for p in 0..np {
        a.set(r, 0, 1.0);
        for l in 0..nl {
            a.set(r, meta.var_r(p, l), -1.0);
        }
        r += 1;
    }
    for j in 0..n {
        a.set(r, j, 1.0);
        r += 1;
    }

    let mut c = vec![0.0; n];
    c[0] = spec.cost_resource;
    for t in 0..tt {
        for l in 0..nl {
            c[meta.var_delay(t, l)] = spec.cost_demand * meta.q_delay[t];
            for l2 in (0..nl).filter(|&x| x != l) {
                c[meta.var_redirect(t, l, l2)] = spec.cost_demand * meta.q_redirect[l][l2];
            }
        }
    }
    meta.var_labels = var_labels;
    meta.coord_labels = coord_labels;
    let inst = AroInstance {
        a,
        c,
        d_mat,
        d,
        stages: StagePartition::new(unc, dec),
        uset: spec.uset.build(m, None)?,
    };
    Ok((inst, meta))
}

/// Realizations for simulation: folded normal |N(0, 1/m)| per coordinate for
/// demand covering, uniform-in-set samples otherwise.
pub fn sample_realizations(spec: &InstanceSpec, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    match spec {
        InstanceSpec::Demand(d) => {
            let m = d.dim();
            let sd = 1.0 / (m as f64).sqrt();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..n)
                .map(|_| {
                    (0..m)
                        .map(|_| {
                            let z: f64 = StandardNormal.sample(&mut rng);
                            (z * sd).abs()
                        })
                        .collect()
                })
                .collect())
        }
        _ => spec.generate()?.uset.sample(n, seed),
    }
}

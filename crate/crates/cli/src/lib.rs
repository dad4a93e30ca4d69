//! Experiment grids over instance families and policies, written as tidy CSV.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::sync::mpsc;
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use anyhow::{bail, Context};
use pap_core::instances::{
    gen_affine_gap, gen_demand_covering, gen_gaussian, sample_realizations, DemandSpec,
    GaussianSpec, InstanceSpec, SetChoice, StageLayout,
};
use pap_core::policies::assess;
use pap_core::solve::{solve_policy, PolicyKind, SolveOptions};
use pap_core::AroInstance;
use serde::{Deserialize, Serialize};

/// Failure classes with their process exit codes.
#[derive(Debug)]
pub enum Failure {
    BadInput(String),
    Solver(String),
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::BadInput(_) => 2,
            Failure::Solver(_) => 3,
            Failure::Verification(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::BadInput(m) | Failure::Solver(m) | Failure::Verification(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for Failure {}

/// Exit code for any error surfaced by the binary.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(f) = cause.downcast_ref::<Failure>() {
            return f.exit_code();
        }
        if let Some(pap_core::Error::Solver(_)) = cause.downcast_ref::<pap_core::Error>() {
            return 3;
        }
    }
    2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Gaussian,
    Demand,
    AffineGap,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::Demand => "demand",
            Family::AffineGap => "affine-gap",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub family: Family,
    /// Uncertainty dimension (gaussian, affine-gap).
    pub m: Vec<usize>,
    /// Cost spread α (gaussian) or demand-slack cost c^D (demand).
    pub alpha: Vec<f64>,
    pub uset: Vec<SetChoice>,
    /// Budget k; √m when absent.
    pub budget: Option<f64>,
    pub layout: StageLayout,
    /// Demand grid: number of locations and planning periods.
    pub locations: Vec<usize>,
    pub planning: Vec<usize>,
    pub policies: Vec<PolicyKind>,
    pub seeds: u64,
    /// Seconds per solve call.
    pub time_limit: f64,
    /// Realizations for the simulated mean (demand family only).
    pub simulations: usize,
    pub jobs: usize,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            family: Family::Gaussian,
            m: (10..=100).step_by(10).collect(),
            alpha: vec![0.0, 1.0, 5.0],
            uset: vec![SetChoice::Hypersphere, SetChoice::Budgeted],
            budget: None,
            layout: StageLayout::Multistage,
            locations: vec![2],
            planning: vec![1],
            policies: PolicyKind::ALL.to_vec(),
            seeds: 100,
            time_limit: 3600.0,
            simulations: 500,
            jobs: 1,
            out: None,
        }
    }
}

pub const PRESETS: [&str; 4] = ["gauss-desk", "gauss-paper", "demand-desk", "affine-gap"];

pub fn preset(name: &str) -> anyhow::Result<ExperimentConfig> {
    let base = ExperimentConfig::default();
    Ok(match name {
        "gauss-desk" => ExperimentConfig {
            m: vec![10, 20],
            seeds: 5,
            time_limit: 600.0,
            ..base
        },
        "gauss-paper" => base,
        "demand-desk" => ExperimentConfig {
            family: Family::Demand,
            m: vec![],
            alpha: vec![0.5, 2.0],
            locations: vec![2, 3],
            planning: vec![1, 2],
            seeds: 3,
            time_limit: 600.0,
            ..base
        },
        "affine-gap" => ExperimentConfig {
            family: Family::AffineGap,
            m: vec![4, 9, 16, 25],
            alpha: vec![0.0],
            uset: vec![SetChoice::Hypersphere],
            seeds: 1,
            time_limit: 600.0,
            ..base
        },
        _ => bail!(Failure::BadInput(format!(
            "unknown preset '{name}' ({})",
            PRESETS.join(", ")
        ))),
    })
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), Failure> {
        let bad = |m: &str| Err(Failure::BadInput(m.to_string()));
        if self.policies.is_empty()
            || self.seeds == 0
            || self.uset.is_empty()
            || self.alpha.is_empty()
        {
            return bad("policies, uset, alpha and seeds must be nonempty");
        }
        match self.family {
            Family::Demand if self.locations.is_empty() || self.planning.is_empty() => {
                return bad("demand grids need locations and planning");
            }
            Family::Gaussian | Family::AffineGap if self.m.is_empty() => {
                return bad("the m grid is empty")
            }
            _ => {}
        }
        if !(self.time_limit > 0.0 && self.time_limit.is_finite()) {
            return bad("time limit must be positive");
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1");
        }
        Ok(())
    }

    /// Every (instance, seed) unit in output order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        match self.family {
            Family::Gaussian => {
                for &m in &self.m {
                    for &alpha in &self.alpha {
                        for &uset in &self.uset {
                            for seed in 0..self.seeds {
                                let mut g = GaussianSpec::new(m, alpha, uset, seed);
                                g.budget = self.budget;
                                g.layout = self.layout;
                                out.push(Cell {
                                    m,
                                    alpha,
                                    uset,
                                    seed,
                                    spec: InstanceSpec::Gaussian(g),
                                });
                            }
                        }
                    }
                }
            }
            Family::Demand => {
                for &l in &self.locations {
                    for &p in &self.planning {
                        for &cd in &self.alpha {
                            for &uset in &self.uset {
                                for seed in 0..self.seeds {
                                    let d = DemandSpec::new(l, p, cd, uset, seed);
                                    out.push(Cell {
                                        m: d.dim(),
                                        alpha: cd,
                                        uset,
                                        seed,
                                        spec: InstanceSpec::Demand(d),
                                    });
                                }
                            }
                        }
                    }
                }
            }
            Family::AffineGap => {
                for &m in &self.m {
                    out.push(Cell {
                        m,
                        alpha: 0.0,
                        uset: SetChoice::Hypersphere,
                        seed: 0,
                        spec: InstanceSpec::AffineGap { m },
                    });
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub m: usize,
    pub alpha: f64,
    pub uset: SetChoice,
    pub seed: u64,
    pub spec: InstanceSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub family: String,
    pub m: usize,
    pub alpha_cd: f64,
    pub uset: String,
    pub policy: String,
    pub seed: u64,
    pub objective: Option<f64>,
    pub ratio: Option<f64>,
    pub time_ms: f64,
    pub status: String,
    pub sim_mean: Option<f64>,
}

fn generate(spec: &InstanceSpec) -> anyhow::Result<AroInstance> {
    Ok(match spec {
        InstanceSpec::Gaussian(g) => gen_gaussian(g)?,
        InstanceSpec::Demand(d) => gen_demand_covering(d)?.0,
        InstanceSpec::AffineGap { m } => gen_affine_gap(*m)?,
    })
}

/// Rows for one cell in policy order; BOX is always solved for the ratio.
pub fn run_cell(cfg: &ExperimentConfig, family: Family, cell: &Cell) -> Vec<ResultRow> {
    let row = |policy: PolicyKind, status: &str| ResultRow {
        family: family.as_str().into(),
        m: cell.m,
        alpha_cd: cell.alpha,
        uset: cell.uset.name().into(),
        policy: policy.as_str().into(),
        seed: cell.seed,
        objective: None,
        ratio: None,
        time_ms: 0.0,
        status: status.into(),
        sim_mean: None,
    };
    let inst = match generate(&cell.spec) {
        Ok(i) => i,
        Err(e) => {
            return cfg
                .policies
                .iter()
                .map(|&p| row(p, &format!("error: {e}")))
                .collect()
        }
    };
    let opts = SolveOptions {
        time_limit: Some(Duration::from_secs_f64(cfg.time_limit)),
        ..Default::default()
    };
    let realizations = match family {
        Family::Demand if cfg.simulations > 0 => {
            sample_realizations(&cell.spec, cfg.simulations, cell.seed).ok()
        }
        _ => None,
    };
    let mut box_obj = None;
    let mut kinds = vec![PolicyKind::Box];
    kinds.extend(
        cfg.policies
            .iter()
            .copied()
            .filter(|&p| p != PolicyKind::Box),
    );
    let mut rows = HashMap::new();
    for kind in kinds {
        let mut r = row(kind, "");
        match solve_policy(&inst, kind, &opts) {
            Ok(out) => {
                r.time_ms = out.elapsed.as_secs_f64() * 1e3;
                r.status = out.status_label().into();
                if out.ok() {
                    r.objective = Some(out.objective);
                    if kind == PolicyKind::Box {
                        box_obj = Some(out.objective);
                    }
                    r.ratio = box_obj.map(|b| out.objective / b);
                    if let Some(real) = &realizations {
                        r.sim_mean =
                            Some(assess(&inst, |xi| out.policy.decide(xi), real, 1e-6).mean_cost);
                    }
                }
            }
            Err(e) => r.status = format!("error: {e}"),
        }
        rows.insert(kind, r);
    }
    cfg.policies.iter().filter_map(|p| rows.remove(p)).collect()
}

fn writer(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write + Send>> {
    Ok(match out {
        Some(p) => {
            Box::new(std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)
        }
        None => Box::new(std::io::stdout()),
    })
}

/// Runs the grid, writing rows in deterministic cell order as soon as every
/// earlier cell is done. Returns all rows.
pub fn run_experiment(cfg: &ExperimentConfig) -> anyhow::Result<Vec<ResultRow>> {
    cfg.validate()?;
    let cells = cfg.cells();
    let mut csv = csv::Writer::from_writer(writer(&cfg.out)?);
    let (tx, rx) = mpsc::channel::<(usize, Vec<ResultRow>)>();
    let next = Mutex::new(0usize);
    let mut all = Vec::new();
    thread::scope(|s| -> anyhow::Result<()> {
        for _ in 0..cfg.jobs.min(cells.len().max(1)) {
            let tx = tx.clone();
            let (cells, next) = (&cells, &next);
            s.spawn(move || loop {
                let i = {
                    let mut g = next.lock().unwrap();
                    *g += 1;
                    *g - 1
                };
                let Some(cell) = cells.get(i) else { break };
                if tx.send((i, run_cell(cfg, cfg.family, cell))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut pending = BTreeMap::new();
        let mut written = 0;
        for (i, rows) in rx {
            pending.insert(i, rows);
            while let Some(rows) = pending.remove(&written) {
                for r in &rows {
                    csv.serialize(r)?;
                }
                csv.flush()?;
                all.extend(rows);
                written += 1;
            }
        }
        Ok(())
    })?;
    Ok(all)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub family: String,
    pub m: usize,
    pub alpha_cd: f64,
    pub uset: String,
    pub policy: String,
    pub count: usize,
    pub solved: usize,
    pub median_ratio: Option<f64>,
    pub median_objective: Option<f64>,
    pub median_time_ms: Option<f64>,
    pub median_sim_mean: Option<f64>,
}

pub fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

pub fn read_rows(path: &std::path::Path) -> anyhow::Result<Vec<ResultRow>> {
    let mut rdr =
        csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let mut rows = Vec::new();
    for r in rdr.deserialize() {
        rows.push(r.map_err(|e| Failure::BadInput(format!("{}: {e}", path.display())))?);
    }
    Ok(rows)
}

/// Medians per (family, m, alpha/cd, uset, policy) cell, in first-seen order.
pub fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    let mut order: Vec<(String, usize, u64, String, String)> = Vec::new();
    let mut groups: HashMap<(String, usize, u64, String, String), Vec<&ResultRow>> = HashMap::new();
    for r in rows {
        let key = (
            r.family.clone(),
            r.m,
            r.alpha_cd.to_bits(),
            r.uset.clone(),
            r.policy.clone(),
        );
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let g = &groups[&key];
            let ok: Vec<&&ResultRow> = g.iter().filter(|r| r.objective.is_some()).collect();
            SummaryRow {
                family: key.0.clone(),
                m: key.1,
                alpha_cd: f64::from_bits(key.2),
                uset: key.3.clone(),
                policy: key.4.clone(),
                count: g.len(),
                solved: ok.len(),
                median_ratio: median(ok.iter().filter_map(|r| r.ratio).collect()),
                median_objective: median(ok.iter().filter_map(|r| r.objective).collect()),
                median_time_ms: median(ok.iter().map(|r| r.time_ms).collect()),
                median_sim_mean: median(ok.iter().filter_map(|r| r.sim_mean).collect()),
            }
        })
        .collect()
}

pub fn write_summary<W: Write>(w: W, rows: &[SummaryRow]) -> anyhow::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    for r in rows {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_desk_shape() {
        let cfg = preset("gauss-desk").unwrap();
        assert_eq!(cfg.cells().len() * cfg.policies.len(), 2 * 3 * 5 * 2 * 4);
    }

    #[test]
    fn validation() {
        let mut cfg = preset("gauss-desk").unwrap();
        cfg.time_limit = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = preset("gauss-desk").unwrap();
        cfg.m.clear();
        assert!(cfg.validate().is_err());
        assert!(preset("nope").is_err());
    }

    #[test]
    fn medians() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(vec![4.0, 1.0]), Some(2.5));
        assert_eq!(median(vec![]), None);
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = preset("demand-desk").unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(
            serde_json::from_str::<ExperimentConfig>(&text).unwrap(),
            cfg
        );
        let partial: ExperimentConfig = serde_json::from_str(r#"{"m": [4], "seeds": 2}"#).unwrap();
        assert_eq!(partial.m, vec![4]);
        assert_eq!(partial.family, Family::Gaussian);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            exit_code(&anyhow::Error::new(Failure::Verification("x".into()))),
            4
        );
        assert_eq!(
            exit_code(&anyhow::Error::new(pap_core::Error::Solver("x".into()))),
            3
        );
        assert_eq!(
            exit_code(&anyhow::Error::new(pap_core::Error::InvalidInput(
                "x".into()
            ))),
            2
        );
    }
}

//! JSON instance files. Indices are 0-based; floats are written in shortest
//! round-trip form so decode(encode(x)) reproduces x bit for bit.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::InstanceSpec;
use crate::model::{AroInstance, Matrix, StagePartition};
use crate::usets::{SetKind, UncertaintySet};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    spec: Option<InstanceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrices: Option<RawMatrices>,
    stages: RawStages,
    uncertainty: RawSet,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrices {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    c: Vec<f64>,
    #[serde(rename = "D")]
    d_mat: Vec<Vec<f64>>,
    d: Vec<f64>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
struct RawStages {
    uncertainty: Vec<Vec<usize>>,
    decisions: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum RawSet {
    Hypersphere { dim: usize },
    Budgeted { dim: usize, k: f64 },
    Pnorm { dim: usize, p: f64 },
    Ellipsoid { dim: usize, a: f64 },
    VertexPolytope { vertices: Vec<Vec<f64>> },
}

impl RawSet {
    fn from_set(u: &UncertaintySet) -> Self {
        let dim = u.dim();
        match u.kind() {
            SetKind::Hypersphere => RawSet::Hypersphere { dim },
            SetKind::Budgeted { k } => RawSet::Budgeted { dim, k: *k },
            SetKind::PNorm { p } => RawSet::Pnorm { dim, p: *p },
            SetKind::Ellipsoid { a } => RawSet::Ellipsoid { dim, a: *a },
            SetKind::VertexPolytope { vertices } => RawSet::VertexPolytope {
                vertices: vertices.clone(),
            },
        }
    }

    fn to_set(&self) -> Result<UncertaintySet> {
        let schema = |e: Error| Error::Schema {
            path: "uncertainty".into(),
            msg: e.to_string(),
        };
        match self {
            RawSet::Hypersphere { dim } => Ok(UncertaintySet::hypersphere(*dim)),
            RawSet::Budgeted { dim, k } => UncertaintySet::budgeted(*dim, *k).map_err(schema),
            RawSet::Pnorm { dim, p } => UncertaintySet::pnorm(*dim, *p).map_err(schema),
            RawSet::Ellipsoid { dim, a } => UncertaintySet::ellipsoid(*dim, *a).map_err(schema),
            RawSet::VertexPolytope { vertices } => {
                UncertaintySet::vertex_polytope(vertices.clone()).map_err(schema)
            }
        }
    }
}

/// Serializes an instance. With `spec` and `with_matrices = false` the file
/// only records the generator input and is regenerated on decode.
pub fn encode(
    inst: &AroInstance,
    spec: Option<&InstanceSpec>,
    with_matrices: bool,
) -> Result<String> {
    if spec.is_none() && !with_matrices {
        return Err(Error::InvalidInput(
            "an instance file needs matrices or a spec".into(),
        ));
    }
    let raw = RawFile {
        schema_version: SCHEMA_VERSION,
        spec: spec.cloned(),
        matrices: with_matrices.then(|| RawMatrices {
            a: inst.a.to_rows(),
            c: inst.c.clone(),
            d_mat: inst.d_mat.to_rows(),
            d: inst.d.clone(),
        }),
        stages: RawStages {
            uncertainty: inst.stages.uncertainty.clone(),
            decisions: inst.stages.decisions.clone(),
        },
        uncertainty: RawSet::from_set(&inst.uset),
    };
    serde_json::to_string_pretty(&raw).map_err(|e| Error::InvalidInput(e.to_string()))
}

fn schema(path: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        msg: msg.into(),
    }
}

fn matrix(rows: &[Vec<f64>], name: &str, nonneg: bool) -> Result<Matrix> {
    let cols = rows.first().map_or(0, Vec::len);
    for (i, r) in rows.iter().enumerate() {
        if r.len() != cols {
            return Err(schema(
                format!("matrices.{name}[{i}]"),
                format!("row has {} entries, expected {cols}", r.len()),
            ));
        }
        for (j, x) in r.iter().enumerate() {
            if nonneg && *x < 0.0 {
                return Err(schema(
                    format!("matrices.{name}[{i}][{j}]"),
                    format!("negative entry {x}"),
                ));
            }
        }
    }
    Ok(Matrix::from_rows(rows))
}

pub fn decode(text: &str) -> Result<(AroInstance, Option<InstanceSpec>)> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| {
        schema(
            format!("line {}, column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(schema(
            "schema_version",
            format!("unsupported version {}", raw.schema_version),
        ));
    }
    let uset = raw.uncertainty.to_set()?;
    let stages = StagePartition::new(raw.stages.uncertainty.clone(), raw.stages.decisions.clone());
    let inst = match (&raw.matrices, &raw.spec) {
        (Some(mx), _) => {
            for (i, x) in mx.d.iter().enumerate() {
                if *x < 0.0 {
                    return Err(schema(
                        format!("matrices.d[{i}]"),
                        format!("negative entry {x}"),
                    ));
                }
            }
            AroInstance {
                a: matrix(&mx.a, "A", false)?,
                c: mx.c.clone(),
                d_mat: matrix(&mx.d_mat, "D", true)?,
                d: mx.d.clone(),
                stages,
                uset,
            }
        }
        (None, Some(spec)) => {
            let inst = spec.generate()?;
            if inst.stages != stages {
                return Err(schema(
                    "stages",
                    "does not match the stages generated from spec",
                ));
            }
            if inst.uset != uset {
                return Err(schema(
                    "uncertainty",
                    "does not match the set generated from spec",
                ));
            }
            inst
        }
        (None, None) => {
            return Err(schema(
                "matrices",
                "missing, and no spec to regenerate from",
            ))
        }
    };
    if let Some(v) = crate::model::validate_instance(&inst).first() {
        return Err(schema("matrices", v.to_string()));
    }
    Ok((inst, raw.spec))
}

/// One realization per row, coordinates in index order.
pub fn write_realizations_csv<W: Write>(mut w: W, realizations: &[Vec<f64>]) -> Result<()> {
    let m = realizations.first().map_or(0, Vec::len);
    let header: Vec<String> = (1..=m).map(|i| format!("xi{i}")).collect();
    writeln!(w, "{}", header.join(","))?;
    for xi in realizations {
        let row: Vec<String> = xi.iter().map(|x| x.to_string()).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

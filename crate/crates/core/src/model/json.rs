//! JSON instance codec.
//!
//! Top-level fields are exactly `name`, `sense`, `objective`, `bounds`,
//! `var_kind` and `rows`. Infinite bounds are written as `null`.

use super::{Instance, ModelError, Relation, Row, Sense, VarKind};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonRow {
    coeffs: Vec<(usize, f64)>,
    relation: Relation,
    rhs: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonInstance {
    name: String,
    sense: Sense,
    objective: Vec<f64>,
    bounds: Vec<(Option<f64>, Option<f64>)>,
    var_kind: Vec<VarKind>,
    rows: Vec<JsonRow>,
}

pub fn to_json(inst: &Instance) -> String {
    let doc = JsonInstance {
        name: inst.name.clone(),
        sense: inst.sense,
        objective: inst.objective.clone(),
        bounds: inst
            .var_lower
            .iter()
            .zip(&inst.var_upper)
            .map(|(&lo, &hi)| (lo.is_finite().then_some(lo), hi.is_finite().then_some(hi)))
            .collect(),
        var_kind: inst.var_kind.clone(),
        rows: inst
            .rows
            .iter()
            .map(|r| JsonRow { coeffs: r.coeffs.clone(), relation: r.relation, rhs: r.rhs })
            .collect(),
    };
    serde_json::to_string(&doc).expect("instance serialization cannot fail")
}

pub fn from_json(text: &str) -> Result<Instance, ModelError> {
    let doc: JsonInstance = serde_json::from_str(text)?;
    let (lower, upper) =
        doc.bounds.iter().map(|&(lo, hi)| (lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY))).unzip();
    Instance::new(
        doc.name,
        doc.sense,
        doc.objective,
        lower,
        upper,
        doc.var_kind,
        doc.rows.into_iter().map(|r| Row::new(r.coeffs, r.relation, r.rhs)).collect(),
    )
}

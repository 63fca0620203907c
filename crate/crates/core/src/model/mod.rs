//! Mixed-binary MILP instances, file codecs, and solution checking.

mod json;
mod mps;

pub use json::{from_json, to_json};
pub use mps::{load_mps, parse_mps, write_mps};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default feasibility tolerance used wherever a caller does not supply one.
pub const FEAS_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("general integer variable unsupported: {0}")]
    GeneralInteger(String),
    #[error("missing section {0}")]
    MissingSection(&'static str),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("dimension mismatch: expected {expected} values, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    /// Multiplier mapping user-sense objective values to minimization sense.
    pub fn sign(self) -> f64 {
        match self {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> Self {
        Row { coeffs, relation, rhs }
    }

    pub fn activity(&self, values: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * values[j]).sum()
    }

    /// Amount by which `activity` violates the row, zero when satisfied.
    pub fn violation(&self, activity: f64) -> f64 {
        match self.relation {
            Relation::Le => (activity - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - activity).max(0.0),
            Relation::Eq => (activity - self.rhs).abs(),
        }
    }
}

/// A mixed-binary linear program.
///
/// The objective is stored in the user's sense; [`Instance::min_objective`]
/// gives the canonical minimization coefficients used by the solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub var_lower: Vec<f64>,
    pub var_upper: Vec<f64>,
    pub var_kind: Vec<VarKind>,
    pub rows: Vec<Row>,
}

impl Instance {
    /// Builds an instance from parts and checks every structural invariant.
    pub fn new(
        name: impl Into<String>,
        sense: Sense,
        objective: Vec<f64>,
        var_lower: Vec<f64>,
        var_upper: Vec<f64>,
        var_kind: Vec<VarKind>,
        rows: Vec<Row>,
    ) -> Result<Self, ModelError> {
        let inst = Instance { name: name.into(), sense, objective, var_lower, var_upper, var_kind, rows };
        inst.validate()?;
        Ok(inst)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn is_binary(&self, j: usize) -> bool {
        self.var_kind[j] == VarKind::Binary
    }

    pub fn binaries(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_vars()).filter(|&j| self.is_binary(j))
    }

    pub fn num_binaries(&self) -> usize {
        self.binaries().count()
    }

    /// Objective coefficients in minimization sense.
    pub fn min_objective(&self) -> Vec<f64> {
        let s = self.sense.sign();
        self.objective.iter().map(|c| s * c).collect()
    }

    /// Converts a user-sense objective value to minimization sense (and back).
    pub fn to_min(&self, value: f64) -> f64 {
        self.sense.sign() * value
    }

    pub fn from_min(&self, value: f64) -> f64 {
        self.sense.sign() * value
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().zip(values).map(|(c, x)| c * x).sum()
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let n = self.objective.len();
        if self.var_lower.len() != n || self.var_upper.len() != n || self.var_kind.len() != n {
            return Err(ModelError::Invalid(format!(
                "per-variable vectors disagree: objective {}, lower {}, upper {}, kind {}",
                n,
                self.var_lower.len(),
                self.var_upper.len(),
                self.var_kind.len()
            )));
        }
        for j in 0..n {
            if !self.objective[j].is_finite() {
                return Err(ModelError::Invalid(format!("objective coefficient {j} is not finite")));
            }
            let (lo, hi) = (self.var_lower[j], self.var_upper[j]);
            if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(ModelError::Invalid(format!("variable {j} has invalid bounds [{lo}, {hi}]")));
            }
            if lo > hi {
                return Err(ModelError::Invalid(format!("variable {j} has lower {lo} > upper {hi}")));
            }
            if self.var_kind[j] == VarKind::Binary && (lo != 0.0 || hi != 1.0) {
                return Err(ModelError::Invalid(format!(
                    "binary variable {j} must have bounds [0, 1], found [{lo}, {hi}]"
                )));
            }
        }
        let mut seen = vec![usize::MAX; n];
        for (i, row) in self.rows.iter().enumerate() {
            if !row.rhs.is_finite() {
                return Err(ModelError::Invalid(format!("row {i} has non-finite rhs")));
            }
            for &(j, a) in &row.coeffs {
                if j >= n {
                    return Err(ModelError::Invalid(format!("row {i} references variable {j} >= {n}")));
                }
                if !a.is_finite() {
                    return Err(ModelError::Invalid(format!("row {i} has non-finite coefficient")));
                }
                if seen[j] == i {
                    return Err(ModelError::Invalid(format!("row {i} repeats variable {j}")));
                }
                seen[j] = i;
            }
        }
        Ok(())
    }
}

/// A dense point, one value per variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub values: Vec<f64>,
}

impl Assignment {
    pub fn new(values: Vec<f64>) -> Self {
        Assignment { values }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionCheck {
    pub feasible: bool,
    /// Objective in the instance's own sense.
    pub objective: f64,
    pub worst_violation: f64,
}

/// Checks bounds, rows and binary integrality of `a` within `tol`.
pub fn check_solution(inst: &Instance, a: &Assignment, tol: f64) -> Result<SolutionCheck, ModelError> {
    assert!(tol > 0.0, "tolerance must be positive");
    let n = inst.num_vars();
    if a.values.len() != n {
        return Err(ModelError::Dimension { expected: n, got: a.values.len() });
    }
    let mut worst = 0.0f64;
    for (j, &x) in a.values.iter().enumerate() {
        if x.is_nan() {
            worst = f64::INFINITY;
            continue;
        }
        worst = worst.max(inst.var_lower[j] - x).max(x - inst.var_upper[j]);
        if inst.is_binary(j) {
            worst = worst.max(x.abs().min((x - 1.0).abs()));
        }
    }
    for row in &inst.rows {
        worst = worst.max(row.violation(row.activity(&a.values)));
    }
    Ok(SolutionCheck { feasible: worst <= tol, objective: inst.objective_value(&a.values), worst_violation: worst })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knapsack() -> Instance {
        Instance::new(
            "knap",
            Sense::Maximize,
            vec![5.0, 4.0, 3.0],
            vec![0.0; 3],
            vec![1.0; 3],
            vec![VarKind::Binary; 3],
            vec![Row::new(vec![(0, 2.0), (1, 3.0), (2, 1.0)], Relation::Le, 5.0)],
        )
        .unwrap()
    }

    #[test]
    fn brute_force_knapsack_optimum_is_nine() {
        let inst = knapsack();
        let mut best = f64::NEG_INFINITY;
        let mut best_point = None;
        for mask in 0..8u32 {
            let v: Vec<f64> = (0..3).map(|j| ((mask >> j) & 1) as f64).collect();
            let chk = check_solution(&inst, &Assignment::new(v.clone()), FEAS_TOL).unwrap();
            if chk.feasible && chk.objective > best {
                best = chk.objective;
                best_point = Some(v);
            }
        }
        assert_eq!(best, 9.0);
        assert_eq!(best_point.unwrap(), vec![1.0, 1.0, 0.0]);
    }

    #[test]
    fn check_solution_cases() {
        let inst = knapsack();
        let ok = check_solution(&inst, &Assignment::new(vec![1.0, 1.0, 0.0]), 1e-6).unwrap();
        assert!(ok.feasible);
        assert_eq!(ok.objective, 9.0);

        let over = check_solution(&inst, &Assignment::new(vec![1.0, 1.0, 1.0]), 1e-6).unwrap();
        assert!(!over.feasible);
        assert_eq!(over.objective, 12.0);
        assert_eq!(over.worst_violation, 1.0);

        let frac = check_solution(&inst, &Assignment::new(vec![1.0, 0.5, 0.0]), 1e-6).unwrap();
        assert!(!frac.feasible);
        assert_eq!(frac.worst_violation, 0.5);
    }

    #[test]
    fn check_solution_rejects_wrong_length() {
        let inst = knapsack();
        assert!(matches!(
            check_solution(&inst, &Assignment::new(vec![1.0]), 1e-6),
            Err(ModelError::Dimension { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn validation_catches_bad_rows_and_binaries() {
        let dup = Instance::new(
            "dup",
            Sense::Minimize,
            vec![1.0, 1.0],
            vec![0.0; 2],
            vec![1.0; 2],
            vec![VarKind::Binary; 2],
            vec![Row::new(vec![(0, 1.0), (0, 2.0)], Relation::Le, 1.0)],
        );
        assert!(matches!(dup, Err(ModelError::Invalid(_))));

        let out_of_range = Instance::new(
            "oob",
            Sense::Minimize,
            vec![1.0],
            vec![0.0],
            vec![1.0],
            vec![VarKind::Continuous],
            vec![Row::new(vec![(3, 1.0)], Relation::Le, 1.0)],
        );
        assert!(out_of_range.is_err());

        let bad_binary =
            Instance::new("bin", Sense::Minimize, vec![1.0], vec![0.0], vec![2.0], vec![VarKind::Binary], vec![]);
        assert!(bad_binary.is_err());
    }
}

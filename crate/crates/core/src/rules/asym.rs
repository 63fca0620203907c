//! Asymmetric exponents from leaf statistics and cardinality rows.

use super::ScoreParams;
use crate::engine::LeafLog;
use crate::model::{Instance, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaMode {
    /// Integral and infeasible leaves only.
    La,
    /// All leaves, including those pruned by bound.
    Rla,
}

/// Exponents from the last-branch sides of the leaves.
pub fn last_assignment_exponents(log: &LeafLog, p: &ScoreParams, mode: LaMode) -> (f64, f64) {
    let (n0, n1, gate) = match mode {
        LaMode::La => (log.n0_ii, log.n1_ii, log.n0_ii + log.n1_ii),
        LaMode::Rla => (log.n0_all, log.n1_all, log.total_leaves),
    };
    if gate < p.k_i || n0 + n1 == 0 {
        return (0.0, 0.0);
    }
    let a = (n0 as f64 - n1 as f64) / (n0 + n1) as f64;
    if a > 0.0 {
        (0.0, p.eta * a)
    } else if a < 0.0 {
        (-p.eta * a, 0.0)
    } else {
        (0.0, 0.0)
    }
}

/// RLA while integral/infeasible leaves are rarer than `pa_threshold`.
pub fn pa_select_mode(log: &LeafLog, p: &ScoreParams) -> LaMode {
    if log.total_leaves == 0 || (log.total_ii as f64) / (log.total_leaves as f64) < p.pa_threshold {
        LaMode::Rla
    } else {
        LaMode::La
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CardinalityState {
    pub row: usize,
    /// Free binaries in the row.
    pub n: usize,
    /// Residual right-hand side, clamped to `[0, n]`.
    pub k: usize,
}

impl CardinalityState {
    /// Evaluates the row against node bounds.
    pub fn at_node(inst: &Instance, row: usize, lower: &[f64], upper: &[f64]) -> Self {
        let r = &inst.rows[row];
        let mut n = 0usize;
        let mut ones = 0.0;
        for &(j, _) in &r.coeffs {
            if lower[j] == upper[j] {
                ones += lower[j];
            } else {
                n += 1;
            }
        }
        let k = (r.rhs - ones).floor().max(0.0).min(n as f64) as usize;
        CardinalityState { row, n, k }
    }
}

/// `((n-k)/(4n), k/(4n))`; zero when no free variable remains.
pub fn cardinality_exponents(s: CardinalityState) -> (f64, f64) {
    if s.n == 0 {
        return (0.0, 0.0);
    }
    let n = s.n as f64;
    let k = s.k as f64;
    ((n - k) / (4.0 * n), k / (4.0 * n))
}

/// First `sum x_j <= k` row over binaries with unit coefficients, integral
/// `k >= min_rhs`.
pub fn detect_cardinality(inst: &Instance, min_rhs: f64) -> Option<usize> {
    inst.rows.iter().position(|r| {
        r.relation == Relation::Le
            && !r.coeffs.is_empty()
            && r.rhs >= min_rhs.max(1.0)
            && r.rhs.fract() == 0.0
            && r.coeffs.iter().all(|&(j, a)| a == 1.0 && inst.is_binary(j))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Row, Sense, VarKind};
    use crate::rules::RuleConfig;

    fn la_params() -> ScoreParams {
        RuleConfig::parse("la-sb").unwrap().params
    }

    fn log(n0_ii: usize, n1_ii: usize, n0_all: usize, n1_all: usize) -> LeafLog {
        LeafLog {
            n0_ii,
            n1_ii,
            n0_all,
            n1_all,
            total_leaves: n0_all + n1_all,
            total_ii: n0_ii + n1_ii,
            ..LeafLog::default()
        }
    }

    #[test]
    fn algorithm_one_values() {
        let p = la_params();
        assert_eq!(last_assignment_exponents(&log(3, 2, 10, 10), &p, LaMode::La), (0.0, 0.0));
        let (a0, a1) = last_assignment_exponents(&log(30, 10, 40, 40), &p, LaMode::La);
        assert_eq!(a0, 0.0);
        assert!((a1 - 0.075).abs() < 1e-15);
        let (a0, a1) = last_assignment_exponents(&log(10, 30, 40, 40), &p, LaMode::La);
        assert!((a0 - 0.075).abs() < 1e-15);
        assert_eq!(a1, 0.0);
        let (a0, a1) = last_assignment_exponents(&log(0, 0, 30, 10), &p, LaMode::Rla);
        assert_eq!((a0, a1), (0.0, 0.15 * 0.5));
    }

    #[test]
    fn pa_mode_boundary() {
        let p = la_params();
        let mk = |ii: usize| LeafLog { total_ii: ii, total_leaves: 100, ..LeafLog::default() };
        assert_eq!(pa_select_mode(&mk(4), &p), LaMode::Rla);
        assert_eq!(pa_select_mode(&mk(5), &p), LaMode::La);
        assert_eq!(pa_select_mode(&mk(7), &p), LaMode::La);
        assert_eq!(pa_select_mode(&LeafLog::default(), &p), LaMode::Rla);
    }

    #[test]
    fn cardinality_values() {
        let st = |n, k| CardinalityState { row: 0, n, k };
        assert_eq!(cardinality_exponents(st(10, 5)), (0.125, 0.125));
        assert_eq!(cardinality_exponents(st(4, 1)), (0.1875, 0.0625));
        assert_eq!(cardinality_exponents(st(4, 0)), (0.25, 0.0));
        assert_eq!(cardinality_exponents(st(0, 0)), (0.0, 0.0));
    }

    #[test]
    fn detection_and_node_state() {
        let rows = vec![
            Row::new(vec![(0, 1.0), (1, 1.0)], Relation::Le, 1.0),
            Row::new(vec![(0, 2.0), (2, 1.0)], Relation::Le, 2.0),
            Row::new(vec![(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0)], Relation::Le, 2.0),
        ];
        let inst = Instance::new(
            "card",
            Sense::Maximize,
            vec![1.0; 4],
            vec![0.0; 4],
            vec![1.0; 4],
            vec![VarKind::Binary; 4],
            rows,
        )
        .unwrap();
        assert_eq!(detect_cardinality(&inst, 2.0), Some(2));
        assert_eq!(detect_cardinality(&inst, 1.0), Some(0));
        let lower = [1.0, 0.0, 0.0, 0.0];
        let upper = [1.0, 0.0, 1.0, 1.0];
        assert_eq!(CardinalityState::at_node(&inst, 2, &lower, &upper), CardinalityState { row: 2, n: 2, k: 1 });
        let none = Instance::new("n", Sense::Minimize, vec![1.0], vec![0.0], vec![1.0], vec![VarKind::Binary], vec![])
            .unwrap();
        assert_eq!(detect_cardinality(&none, 2.0), None);
    }
}

//! Bounded-variable LP solver.
//!
//! Every row `i` gets a logical variable `r_i` with `A x - r = 0`, so row
//! relations turn into bounds on `r`. The basis inverse is kept dense and
//! refactored every [`REFACTOR_PERIOD`] pivots. Root solves run a two-phase
//! primal simplex from the all-logical basis; child solves start from the
//! parent's optimal basis and run the dual simplex, which keeps every iterate
//! dual feasible and therefore yields a valid bound when stopped early.

mod solver;

use crate::model::{Instance, Relation};
use solver::Simplex;
use std::sync::Arc;
use thiserror::Error;

pub const PRIMAL_TOL: f64 = 1e-7;
pub const DUAL_TOL: f64 = 1e-7;
pub const PIVOT_TOL: f64 = 1e-9;
pub const REFACTOR_PERIOD: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimplexError {
    #[error("singular basis during refactorization")]
    SingularBasis,
    #[error("numerical breakdown: {0}")]
    Numerical(String),
    #[error("basis snapshot has {got} entries, view needs {expected}")]
    BasisMismatch { expected: usize, got: usize },
    #[error("warm start requires an optimal parent outcome")]
    ParentNotOptimal,
}

/// Column- and row-wise copy of an instance's constraint matrix with the
/// objective in minimization sense.
#[derive(Debug, Clone)]
pub struct LpProblem {
    n: usize,
    m: usize,
    cost: Vec<f64>,
    col_start: Vec<usize>,
    col_entries: Vec<(usize, f64)>,
    row_start: Vec<usize>,
    row_entries: Vec<(usize, f64)>,
    row_lower: Vec<f64>,
    row_upper: Vec<f64>,
    var_lower: Vec<f64>,
    var_upper: Vec<f64>,
}

impl LpProblem {
    pub fn new(inst: &Instance) -> Self {
        let n = inst.num_vars();
        let m = inst.num_rows();
        let mut counts = vec![0usize; n + 1];
        let mut row_start = Vec::with_capacity(m + 1);
        let mut row_entries = Vec::new();
        let mut row_lower = Vec::with_capacity(m);
        let mut row_upper = Vec::with_capacity(m);
        row_start.push(0);
        for row in &inst.rows {
            for &(j, a) in &row.coeffs {
                if a != 0.0 {
                    row_entries.push((j, a));
                    counts[j + 1] += 1;
                }
            }
            row_start.push(row_entries.len());
            let (lo, hi) = match row.relation {
                Relation::Le => (f64::NEG_INFINITY, row.rhs),
                Relation::Ge => (row.rhs, f64::INFINITY),
                Relation::Eq => (row.rhs, row.rhs),
            };
            row_lower.push(lo);
            row_upper.push(hi);
        }
        for j in 0..n {
            counts[j + 1] += counts[j];
        }
        let col_start = counts.clone();
        let mut fill = counts;
        let mut col_entries = vec![(0usize, 0.0f64); row_entries.len()];
        for i in 0..m {
            for &(j, a) in &row_entries[row_start[i]..row_start[i + 1]] {
                col_entries[fill[j]] = (i, a);
                fill[j] += 1;
            }
        }
        LpProblem {
            n,
            m,
            cost: inst.min_objective(),
            col_start,
            col_entries,
            row_start,
            row_entries,
            row_lower,
            row_upper,
            var_lower: inst.var_lower.clone(),
            var_upper: inst.var_upper.clone(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.m
    }

    pub fn cost(&self) -> &[f64] {
        &self.cost
    }

    fn column(&self, j: usize) -> &[(usize, f64)] {
        &self.col_entries[self.col_start[j]..self.col_start[j + 1]]
    }

    fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.row_entries[self.row_start[i]..self.row_start[i + 1]]
    }

    pub fn root_view(&self) -> LpView<'_> {
        LpView { problem: self, lower: self.var_lower.clone(), upper: self.var_upper.clone() }
    }
}

/// An LP together with an overlay of (tightened) variable bounds.
#[derive(Debug, Clone)]
pub struct LpView<'a> {
    problem: &'a LpProblem,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl<'a> LpView<'a> {
    pub fn problem(&self) -> &'a LpProblem {
        self.problem
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn set_bounds(&mut self, var: usize, lo: f64, hi: f64) {
        self.lower[var] = lo;
        self.upper[var] = hi;
    }

    pub fn with_bounds(&self, var: usize, lo: f64, hi: f64) -> Self {
        let mut v = self.clone();
        v.set_bounds(var, lo, hi);
        v
    }

    pub fn is_trivially_infeasible(&self) -> bool {
        self.lower.iter().zip(&self.upper).any(|(lo, hi)| lo > hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum VarStatus {
    Basic,
    AtLower,
    AtUpper,
    Free,
}

/// Basis header and nonbasic positions of a solved LP.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSnapshot {
    pub(crate) head: Vec<usize>,
    pub(crate) status: Vec<VarStatus>,
}

impl BasisSnapshot {
    pub fn num_rows(&self) -> usize {
        self.head.len()
    }

    /// Structural variables currently basic, in basis order.
    pub fn basic_structurals(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.status.len() - self.head.len();
        self.head.iter().copied().filter(move |&k| k < n)
    }
}

#[derive(Debug, Clone)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Objective in minimization sense; meaningful for `Optimal`.
    pub objective: f64,
    /// Valid lower bound on the view's optimum (`+inf` when infeasible).
    pub dual_bound: f64,
    /// Structural values, present for `Optimal`.
    pub primal: Option<Vec<f64>>,
    pub basis: Option<Arc<BasisSnapshot>>,
    pub iterations: usize,
}

impl LpOutcome {
    pub(crate) fn infeasible(iterations: usize) -> Self {
        LpOutcome {
            status: LpStatus::Infeasible,
            objective: f64::INFINITY,
            dual_bound: f64::INFINITY,
            primal: None,
            basis: None,
            iterations,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn is_infeasible(&self) -> bool {
        self.status == LpStatus::Infeasible
    }
}

/// Solves the view from scratch with the two-phase primal simplex.
pub fn solve_root(view: &LpView) -> Result<LpOutcome, SimplexError> {
    if view.is_trivially_infeasible() {
        return Ok(LpOutcome::infeasible(0));
    }
    let mut spx = Simplex::slack_basis(view);
    spx.solve_warm(None)
}

/// Re-solves `view` with `var` restricted to `new_bounds`, warm-starting the
/// dual simplex from `parent`'s optimal basis.
pub fn resolve_bound_change(
    parent: &LpOutcome,
    view: &LpView,
    var: usize,
    new_bounds: (f64, f64),
    iter_cap: Option<usize>,
) -> Result<LpOutcome, SimplexError> {
    WarmStart::new(view, parent)?.branch(var, new_bounds, iter_cap)
}

/// A factorized parent basis from which many single-variable bound changes
/// can be re-solved without refactoring each time.
pub struct WarmStart<'a> {
    base: Simplex<'a>,
}

impl<'a> WarmStart<'a> {
    pub fn new(view: &LpView<'a>, parent: &LpOutcome) -> Result<Self, SimplexError> {
        if parent.status != LpStatus::Optimal {
            return Err(SimplexError::ParentNotOptimal);
        }
        let basis = parent.basis.as_ref().ok_or(SimplexError::ParentNotOptimal)?;
        Ok(WarmStart { base: Simplex::from_snapshot(view, basis)? })
    }

    pub fn branch(&self, var: usize, (lo, hi): (f64, f64), iter_cap: Option<usize>) -> Result<LpOutcome, SimplexError> {
        let lo = lo.max(self.base.lower(var));
        let hi = hi.min(self.base.upper(var));
        if lo > hi {
            return Ok(LpOutcome::infeasible(0));
        }
        let mut spx = self.base.clone();
        spx.tighten(var, lo, hi);
        spx.solve_warm(iter_cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Row, Sense, VarKind};

    fn knapsack_lp() -> Instance {
        Instance::new(
            "knap",
            Sense::Maximize,
            vec![5.0, 4.0, 3.0],
            vec![0.0; 3],
            vec![1.0; 3],
            vec![VarKind::Continuous; 3],
            vec![Row::new(vec![(0, 2.0), (1, 3.0), (2, 1.0)], Relation::Le, 5.0)],
        )
        .unwrap()
    }

    #[test]
    fn knapsack_root() {
        let inst = knapsack_lp();
        let lp = LpProblem::new(&inst);
        let out = solve_root(&lp.root_view()).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert!((out.objective + 32.0 / 3.0).abs() < 1e-9);
        let x = out.primal.unwrap();
        for (got, want) in x.iter().zip([1.0, 2.0 / 3.0, 1.0]) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn knapsack_children() {
        let inst = knapsack_lp();
        let lp = LpProblem::new(&inst);
        let view = lp.root_view();
        let root = solve_root(&view).unwrap();
        let down = resolve_bound_change(&root, &view, 1, (0.0, 0.0), None).unwrap();
        assert_eq!(down.status, LpStatus::Optimal);
        assert!((down.objective + 8.0).abs() < 1e-9);
        let up = resolve_bound_change(&root, &view, 1, (1.0, 1.0), None).unwrap();
        assert!((up.objective + 9.5).abs() < 1e-9);
        let capped = resolve_bound_change(&root, &view, 1, (0.0, 0.0), Some(0)).unwrap();
        assert_eq!(capped.status, LpStatus::IterationLimit);
        assert!((capped.dual_bound - root.objective).abs() < 1e-9);
    }

    #[test]
    fn contradictory_overlay_is_infeasible() {
        let inst = Instance::new(
            "c",
            Sense::Minimize,
            vec![1.0, 1.0],
            vec![0.0; 2],
            vec![1.0; 2],
            vec![VarKind::Continuous; 2],
            vec![Row::new(vec![(0, 1.0)], Relation::Le, 0.0)],
        )
        .unwrap();
        let lp = LpProblem::new(&inst);
        let view = lp.root_view().with_bounds(0, 1.0, 1.0);
        assert_eq!(solve_root(&view).unwrap().status, LpStatus::Infeasible);
        let crossed = lp.root_view().with_bounds(1, 1.0, 0.0);
        assert!(crossed.is_trivially_infeasible());
        assert_eq!(solve_root(&crossed).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn empty_constraint_set_hits_corner() {
        let inst = Instance::new(
            "box",
            Sense::Minimize,
            vec![2.0, -3.0, 0.0],
            vec![-1.0, 0.0, 0.0],
            vec![4.0, 2.0, 1.0],
            vec![VarKind::Continuous; 3],
            vec![],
        )
        .unwrap();
        let lp = LpProblem::new(&inst);
        let out = solve_root(&lp.root_view()).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.objective, -8.0);
        assert_eq!(&out.primal.unwrap()[..2], &[-1.0, 2.0]);
    }

    #[test]
    fn unbounded_detected() {
        let inst = Instance::new(
            "u",
            Sense::Minimize,
            vec![-1.0, 0.0],
            vec![0.0; 2],
            vec![f64::INFINITY; 2],
            vec![VarKind::Continuous; 2],
            vec![Row::new(vec![(0, 1.0), (1, -1.0)], Relation::Le, 1.0)],
        )
        .unwrap();
        let lp = LpProblem::new(&inst);
        assert_eq!(solve_root(&lp.root_view()).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_and_free_variables() {
        // min x0 + 2 x1 - x2  s.t.  x0 + x1 + x2 = 4,  x0 - x2 >= 1,  x2 free, x2 <= 2
        let inst = Instance::new(
            "eq",
            Sense::Minimize,
            vec![1.0, 2.0, -1.0],
            vec![0.0, 0.0, f64::NEG_INFINITY],
            vec![f64::INFINITY, f64::INFINITY, 2.0],
            vec![VarKind::Continuous; 3],
            vec![
                Row::new(vec![(0, 1.0), (1, 1.0), (2, 1.0)], Relation::Eq, 4.0),
                Row::new(vec![(0, 1.0), (2, -1.0)], Relation::Ge, 1.0),
            ],
        )
        .unwrap();
        let lp = LpProblem::new(&inst);
        let out = solve_root(&lp.root_view()).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        // x1 = 0, x0 + x2 = 4, x0 - x2 >= 1: objective x0 - x2 is minimized at 1.
        assert!((out.objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn determinism() {
        let inst = knapsack_lp();
        let lp = LpProblem::new(&inst);
        let a = solve_root(&lp.root_view()).unwrap();
        let b = solve_root(&lp.root_view()).unwrap();
        assert_eq!(a.primal, b.primal);
        assert_eq!(a.basis, b.basis);
        assert_eq!(a.iterations, b.iterations);
    }
}

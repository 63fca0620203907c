//! Best-bound branch-and-bound.
//!
//! Internally everything is in minimization sense; [`SolveReport`] offers
//! user-sense accessors. Child LPs are solved when their parent branches and
//! cached on the child, so popping a node never re-solves its LP.

use crate::model::{Assignment, Instance, Sense};
use crate::rules::{child_gain, Brancher, GainPair, RuleConfig};
use crate::simplex::{solve_root, LpOutcome, LpProblem, LpStatus, LpView, SimplexError, WarmStart};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::Write as _;
use thiserror::Error;

/// Distance from {0,1} below which a binary counts as integral.
pub const INT_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("LP failure at node {node}: {source}")]
    Lp {
        node: usize,
        #[source]
        source: SimplexError,
    },
    #[error("root LP is unbounded")]
    Unbounded,
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Whether a node with `bound` can be discarded given incumbent `incumbent`
/// (both minimization sense).
pub fn prunes(bound: f64, incumbent: f64) -> bool {
    incumbent.is_finite() && bound >= incumbent - 1e-6 * incumbent.abs().max(1.0)
}

/// `z* ± gap·|z*|` in the direction that makes the bound worse.
pub fn init_primal_bound(z_star: f64, gap: f64, sense: Sense) -> f64 {
    assert!(gap >= 0.0 && z_star.is_finite(), "gap must be >= 0 and z* finite");
    if z_star == 0.0 && gap > 0.0 {
        log::warn!("relative primal gap {gap} is degenerate for z* = 0; using z*");
        return z_star;
    }
    match sense {
        Sense::Minimize => z_star + gap * z_star.abs(),
        Sense::Maximize => z_star - gap * z_star.abs(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafReason {
    Infeasible,
    Integral,
    BoundPruned,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LeafLog {
    pub n0_ii: usize,
    pub n1_ii: usize,
    pub n0_all: usize,
    pub n1_all: usize,
    pub total_leaves: usize,
    pub total_ii: usize,
    pub infeasible: usize,
    pub integral: usize,
    pub bound_pruned: usize,
}

impl LeafLog {
    /// Counts a leaf; `side` is the last branching fixing (absent at the root).
    pub fn record_leaf(&mut self, side: Option<u8>, reason: LeafReason) {
        self.total_leaves += 1;
        match side {
            Some(0) => self.n0_all += 1,
            Some(_) => self.n1_all += 1,
            None => {}
        }
        match reason {
            LeafReason::Infeasible => self.infeasible += 1,
            LeafReason::Integral => self.integral += 1,
            LeafReason::BoundPruned => self.bound_pruned += 1,
        }
        if reason != LeafReason::BoundPruned {
            self.total_ii += 1;
            match side {
                Some(0) => self.n0_ii += 1,
                Some(_) => self.n1_ii += 1,
                None => {}
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Optimal,
    NodeLimit,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IncumbentSource {
    Initial,
    Discovered,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Incumbent {
    /// Minimization sense, `+inf` when none.
    pub bound: f64,
    pub solution: Option<Assignment>,
    pub source: Option<IncumbentSource>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeTelemetry {
    pub id: usize,
    pub depth: usize,
    pub bound: f64,
    pub var: usize,
    pub a_min: f64,
    pub a_max: f64,
    pub a0: f64,
    pub a1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub rule: String,
    pub sense: Sense,
    pub status: SolveStatus,
    pub tree_size: usize,
    pub branchings: usize,
    pub incumbent: Incumbent,
    /// Minimization sense.
    pub dual_bound: f64,
    /// Root LP value, minimization sense (`+inf` if infeasible).
    pub root_lp: f64,
    pub leaves: LeafLog,
    pub telemetry: Vec<NodeTelemetry>,
}

impl SolveReport {
    /// Incumbent value in the instance's sense.
    pub fn incumbent_value(&self) -> f64 {
        self.sense.sign() * self.incumbent.bound
    }

    pub fn dual_bound_value(&self) -> f64 {
        self.sense.sign() * self.dual_bound
    }

    pub fn root_lp_value(&self) -> f64 {
        self.sense.sign() * self.root_lp
    }

    pub fn telemetry_csv(&self) -> String {
        let mut s = String::from("id,depth,bound,var,a_min,a_max,a0,a1\n");
        for t in &self.telemetry {
            let _ = writeln!(
                s,
                "{},{},{:?},{},{:?},{:?},{:?},{:?}",
                t.id, t.depth, t.bound, t.var, t.a_min, t.a_max, t.a0, t.a1
            );
        }
        s
    }
}

struct Node {
    id: usize,
    depth: usize,
    fixings: Vec<(usize, u8)>,
    lp_bound: f64,
    outcome: LpOutcome,
}

impl Node {
    fn last_side(&self) -> Option<u8> {
        self.fixings.last().map(|&(_, s)| s)
    }
}

/// Heap entry ordered so the smallest `(lp_bound, id)` pops first.
struct Open(Node);

impl PartialEq for Open {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Open {}
impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Open {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.lp_bound.total_cmp(&self.0.lp_bound).then(other.0.id.cmp(&self.0.id))
    }
}

fn fractional_binaries(inst: &Instance, x: &[f64]) -> Vec<(usize, f64)> {
    inst.binaries().filter(|&j| x[j].min(1.0 - x[j]) > INT_TOL).map(|j| (j, x[j])).collect()
}

fn node_view<'a>(root: &LpView<'a>, fixings: &[(usize, u8)]) -> LpView<'a> {
    let mut v = root.clone();
    for &(j, s) in fixings {
        v.set_bounds(j, s as f64, s as f64);
    }
    v
}

/// Runs branch-and-bound with `rule`.
///
/// `init_primal` is an objective value in the instance's sense installed as
/// the initial incumbent bound without a solution. `seed` is bookkeeping
/// only: the search is deterministic.
pub fn solve(
    inst: &Instance,
    rule: &RuleConfig,
    init_primal: Option<f64>,
    node_limit: usize,
    seed: u64,
) -> Result<SolveReport, EngineError> {
    let _ = seed;
    if node_limit == 0 {
        return Err(EngineError::Invalid("node_limit must be at least 1".into()));
    }
    inst.validate().map_err(|e| EngineError::Invalid(e.to_string()))?;
    let lp = LpProblem::new(inst);
    let root_view = lp.root_view();
    let lp_err = |node| move |source| EngineError::Lp { node, source };
    let root_out = solve_root(&root_view).map_err(lp_err(0))?;

    let mut incumbent = Incumbent { bound: f64::INFINITY, solution: None, source: None };
    if let Some(z) = init_primal {
        incumbent.bound = inst.to_min(z);
        incumbent.source = Some(IncumbentSource::Initial);
    }
    let mut leaves = LeafLog::default();
    let mut telemetry = Vec::new();
    let mut brancher = Brancher::new(rule.clone(), inst);
    let mut branchings = 0usize;
    let mut next_id = 1usize;
    let mut frontier = BinaryHeap::new();
    let root_lp = match root_out.status {
        LpStatus::Optimal => root_out.objective,
        LpStatus::Infeasible => f64::INFINITY,
        LpStatus::Unbounded => return Err(EngineError::Unbounded),
        LpStatus::IterationLimit => unreachable!("root solve has no iteration cap"),
    };
    if root_out.is_infeasible() {
        leaves.record_leaf(None, LeafReason::Infeasible);
    } else {
        frontier.push(Open(Node { id: 0, depth: 0, fixings: Vec::new(), lp_bound: root_lp, outcome: root_out }));
    }

    let mut hit_limit = false;
    while let Some(Open(node)) = frontier.pop() {
        if prunes(node.lp_bound, incumbent.bound) {
            leaves.record_leaf(node.last_side(), LeafReason::BoundPruned);
            continue;
        }
        let x = node.outcome.primal.as_ref().expect("open nodes hold optimal LPs");
        let cands = fractional_binaries(inst, x);
        if cands.is_empty() {
            leaves.record_leaf(node.last_side(), LeafReason::Integral);
            incumbent = Incumbent {
                bound: node.outcome.objective,
                solution: Some(Assignment::new(x.clone())),
                source: Some(IncumbentSource::Discovered),
            };
            let mut open: Vec<Node> = frontier.drain().map(|o| o.0).collect();
            open.sort_by(|a, b| a.lp_bound.total_cmp(&b.lp_bound).then(a.id.cmp(&b.id)));
            for n in open {
                if prunes(n.lp_bound, incumbent.bound) {
                    leaves.record_leaf(n.last_side(), LeafReason::BoundPruned);
                } else {
                    frontier.push(Open(n));
                }
            }
            continue;
        }
        if 2 * branchings + 3 > node_limit {
            frontier.push(Open(node));
            hit_limit = true;
            break;
        }
        if branchings.is_multiple_of(rule.params.update_period) {
            brancher.refresh(&leaves);
        }
        let view = node_view(&root_view, &node.fixings);
        let warm = WarmStart::new(&view, &node.outcome).map_err(lp_err(node.id))?;
        let d = brancher
            .decide(inst, view.lower(), view.upper(), &warm, &node.outcome, incumbent.bound, &cands)
            .map_err(lp_err(node.id))?;
        let kids = match d.children {
            Some(k) => k,
            None => [
                warm.branch(d.var, (0.0, 0.0), None).map_err(lp_err(node.id))?,
                warm.branch(d.var, (1.0, 1.0), None).map_err(lp_err(node.id))?,
            ],
        };
        if !d.strong_branched {
            let g0 = child_gain(node.outcome.objective, &kids[0]).map_err(lp_err(node.id))?;
            let g1 = child_gain(node.outcome.objective, &kids[1]).map_err(lp_err(node.id))?;
            brancher.observe(d.var, x[d.var], GainPair::new(g0, g1));
        }
        branchings += 1;
        telemetry.push(NodeTelemetry {
            id: node.id,
            depth: node.depth,
            bound: node.lp_bound,
            var: d.var,
            a_min: rule.params.a_min,
            a_max: rule.params.a_max,
            a0: d.a0,
            a1: d.a1,
        });
        for (side, out) in kids.into_iter().enumerate() {
            let id = next_id;
            next_id += 1;
            if out.is_infeasible() {
                leaves.record_leaf(Some(side as u8), LeafReason::Infeasible);
                continue;
            }
            if out.status != LpStatus::Optimal {
                return Err(EngineError::Lp {
                    node: id,
                    source: SimplexError::Numerical(format!("child LP ended with {:?}", out.status)),
                });
            }
            let mut fixings = node.fixings.clone();
            fixings.push((d.var, side as u8));
            frontier.push(Open(Node {
                id,
                depth: node.depth + 1,
                fixings,
                lp_bound: out.objective.max(node.lp_bound),
                outcome: out,
            }));
        }
    }

    let (status, dual_bound) = if hit_limit {
        let open_min = frontier.iter().map(|o| o.0.lp_bound).fold(f64::INFINITY, f64::min);
        (SolveStatus::NodeLimit, open_min.min(incumbent.bound))
    } else if incumbent.bound.is_finite() {
        (SolveStatus::Optimal, incumbent.bound)
    } else {
        (SolveStatus::Infeasible, f64::INFINITY)
    };
    Ok(SolveReport {
        rule: rule.name.clone(),
        sense: inst.sense,
        status,
        tree_size: 2 * branchings + 1,
        branchings,
        incumbent,
        dual_bound,
        root_lp,
        leaves,
        telemetry,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{check_solution, Relation, Row, VarKind};

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

    fn rule(name: &str) -> RuleConfig {
        RuleConfig::parse(name).unwrap()
    }

    #[test]
    fn knapsack_def_sb() {
        let inst = knapsack();
        let r = solve(&inst, &rule("def-sb"), None, 1000, 0).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.incumbent_value(), 9.0);
        let sol = r.incumbent.solution.clone().unwrap();
        assert!(check_solution(&inst, &sol, 1e-6).unwrap().feasible);
        assert_eq!(r.tree_size, 2 * r.branchings + 1);
        let l = &r.leaves;
        assert_eq!(l.infeasible + l.integral + l.bound_pruned, l.total_leaves);
        assert_eq!(l.total_leaves, r.branchings + 1);
    }

    #[test]
    fn integral_root_and_infeasible_root() {
        let integral = Instance::new(
            "int",
            Sense::Minimize,
            vec![1.0, 1.0],
            vec![0.0; 2],
            vec![1.0; 2],
            vec![VarKind::Binary; 2],
            vec![Row::new(vec![(0, 1.0), (1, 1.0)], Relation::Ge, 1.0)],
        )
        .unwrap();
        let r = solve(&integral, &rule("def-sb"), None, 10, 0).unwrap();
        assert_eq!((r.status, r.tree_size, r.incumbent_value()), (SolveStatus::Optimal, 1, 1.0));
        assert_eq!((r.leaves.total_leaves, r.leaves.total_ii, r.leaves.n0_all + r.leaves.n1_all), (1, 1, 0));

        let contradictory = Instance::new(
            "bad",
            Sense::Minimize,
            vec![1.0],
            vec![0.0],
            vec![1.0],
            vec![VarKind::Binary],
            vec![Row::new(vec![(0, 1.0)], Relation::Ge, 0.8), Row::new(vec![(0, 1.0)], Relation::Le, 0.2)],
        )
        .unwrap();
        let r = solve(&contradictory, &rule("eff-sb"), None, 10, 0).unwrap();
        assert_eq!((r.status, r.tree_size), (SolveStatus::Infeasible, 1));
    }

    #[test]
    fn primal_bound_initialization() {
        assert_eq!(init_primal_bound(100.0, 0.10, Sense::Minimize), 110.0);
        assert_eq!(init_primal_bound(-50.0, 0.10, Sense::Minimize), -45.0);
        assert_eq!(init_primal_bound(7.5, 0.0, Sense::Maximize), 7.5);
        assert_eq!(init_primal_bound(100.0, 0.10, Sense::Maximize), 90.0);
        assert_eq!(init_primal_bound(0.0, 0.10, Sense::Minimize), 0.0);
    }

    #[test]
    fn root_pruned_by_exact_bound() {
        let inst = knapsack();
        let lp_value = 32.0 / 3.0;
        let r = solve(&inst, &rule("def-sb"), Some(lp_value), 1000, 0).unwrap();
        assert_eq!((r.status, r.tree_size), (SolveStatus::Optimal, 1));
        assert_eq!(r.leaves.bound_pruned, 1);
        assert_eq!(r.leaves.n0_all + r.leaves.n1_all, 0);
        assert_eq!(r.incumbent.source, Some(IncumbentSource::Initial));
    }

    #[test]
    fn leaf_counters() {
        let mut log = LeafLog::default();
        log.record_leaf(Some(1), LeafReason::Infeasible);
        assert_eq!((log.n1_ii, log.n1_all), (1, 1));
        log.record_leaf(Some(0), LeafReason::BoundPruned);
        assert_eq!((log.n0_all, log.n0_ii), (1, 0));
        log.record_leaf(None, LeafReason::BoundPruned);
        assert_eq!(log.total_leaves, 3);
        assert_eq!(log.n0_all + log.n1_all, 2);
    }

    #[test]
    fn node_limit_stops_early() {
        let inst = knapsack();
        let r = solve(&inst, &rule("def-sb"), None, 1, 0).unwrap();
        assert_eq!((r.status, r.tree_size), (SolveStatus::NodeLimit, 1));
        assert!((r.dual_bound_value() - 32.0 / 3.0).abs() < 1e-9);
    }
}

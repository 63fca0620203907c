mod common;

use branchlab::engine::{init_primal_bound, solve, SolveReport, SolveStatus};
use branchlab::model::check_solution;
use branchlab::rules::{RuleConfig, CATALOG};
use common::{brute_force_milp, random_milp};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instances(seed: u64, count: usize) -> Vec<branchlab::model::Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_milp(&mut rng, 12)).collect()
}

fn assert_consistent(r: &SolveReport) {
    assert_eq!(r.tree_size, 2 * r.branchings + 1);
    let l = &r.leaves;
    assert_eq!(l.infeasible + l.integral + l.bound_pruned, l.total_leaves);
    assert_eq!(l.n0_ii + l.n1_ii, l.total_ii - usize::from(r.tree_size == 1 && l.total_ii == 1));
    assert!(r.dual_bound <= r.incumbent.bound + 1e-6);
    for w in r.telemetry.windows(2) {
        assert!(w[1].bound >= w[0].bound - 1e-9, "best-bound order violated");
    }
    for t in &r.telemetry {
        assert!(t.a0 * t.a1 == 0.0 || r.rule.starts_with("eff-card"));
    }
}

#[test]
fn every_rule_matches_brute_force() {
    let mut feasible = 0;
    for (case, inst) in instances(21, 60).iter().enumerate() {
        let opt = brute_force_milp(inst);
        for name in CATALOG {
            let rule = RuleConfig::parse(name).unwrap();
            let r = solve(inst, &rule, None, 100_000, 0).unwrap();
            assert_consistent(&r);
            match opt {
                None => assert_eq!(r.status, SolveStatus::Infeasible, "case {case} {name}"),
                Some(z) => {
                    assert_eq!(r.status, SolveStatus::Optimal, "case {case} {name}");
                    assert!((r.incumbent.bound - z).abs() <= 1e-6, "case {case} {name}: {} vs {z}", r.incumbent.bound);
                    let sol = r.incumbent.solution.as_ref().unwrap();
                    assert!(check_solution(inst, sol, 1e-6).unwrap().feasible);
                }
            }
            let Some(z) = opt else { continue };
            let z_user = inst.from_min(z);
            for gap in [0.0, 0.05] {
                let init = init_primal_bound(z_user, gap, inst.sense);
                let r = solve(inst, &rule, Some(init), 100_000, 0).unwrap();
                assert_consistent(&r);
                assert_eq!(r.status, SolveStatus::Optimal);
                assert!(
                    (r.incumbent_value() - z_user).abs() <= 1e-6,
                    "case {case} {name} gap {gap}: {} vs {z_user}",
                    r.incumbent_value()
                );
            }
        }
        feasible += opt.is_some() as usize;
    }
    assert!(feasible >= 50, "only {feasible} feasible instances");
}

#[test]
fn efficacious_equals_default_without_incumbent() {
    let def = RuleConfig::parse("def-sb").unwrap();
    let eff = RuleConfig::parse("eff-sb").unwrap();
    let mut nontrivial = 0;
    for inst in instances(22, 120) {
        let a = solve(&inst, &def, None, 100_000, 0).unwrap();
        let b = solve(&inst, &eff, None, 100_000, 0).unwrap();
        assert_eq!(a.telemetry, b.telemetry);
        assert_eq!(a.leaves, b.leaves);
        nontrivial += (a.tree_size > 1) as usize;
    }
    assert!(nontrivial >= 20, "only {nontrivial} instances branched");
}

#[test]
fn reliability_degenerates_to_full_strong() {
    for (sb, rb) in [("def-sb", "def-rb"), ("eff-sb-37", "eff-rb-37"), ("pala-sb", "pala-rb")] {
        let sb = RuleConfig::parse(sb).unwrap();
        let rb = RuleConfig::parse(&format!("{rb}:reliability=inf,budget=inf,iter_cap=none")).unwrap();
        for inst in instances(23, 15) {
            let a = solve(&inst, &sb, None, 100_000, 0).unwrap();
            let b = solve(&inst, &rb, None, 100_000, 0).unwrap();
            assert_eq!(a.telemetry, b.telemetry);
            assert_eq!(a.leaves, b.leaves);
        }
    }
}

#[test]
fn default_reliability_branching_solves_to_optimality() {
    let rb = RuleConfig::parse("def-rb:reliability=2,budget=1,iter_cap=3").unwrap();
    for inst in instances(24, 20) {
        let opt = brute_force_milp(&inst);
        let r = solve(&inst, &rb, None, 100_000, 0).unwrap();
        match opt {
            Some(z) => assert!((r.incumbent.bound - z).abs() <= 1e-6),
            None => assert_eq!(r.status, SolveStatus::Infeasible),
        }
    }
}

#[test]
fn reports_are_deterministic() {
    for inst in instances(25, 5) {
        for name in ["pala-sb", "eff-card", "pala-rb"] {
            let rule = RuleConfig::parse(name).unwrap();
            let a = solve(&inst, &rule, None, 100_000, 1).unwrap();
            let b = solve(&inst, &rule, None, 100_000, 1).unwrap();
            assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
            assert_eq!(a.telemetry_csv(), b.telemetry_csv());
        }
    }
}

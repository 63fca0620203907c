mod common;

use branchlab::model::{check_solution, Assignment};
use branchlab::simplex::{resolve_bound_change, solve_root, LpProblem, LpStatus, WarmStart};
use common::{random_lp, vertex_optimum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn root_solves_match_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut optimal, mut infeasible) = (0, 0);
    for case in 0..400 {
        let inst = random_lp(&mut rng, 6, 6);
        let lp = LpProblem::new(&inst);
        let out = solve_root(&lp.root_view()).unwrap();
        match vertex_optimum(&inst, &inst.var_lower, &inst.var_upper) {
            Some(z) => {
                assert_eq!(out.status, LpStatus::Optimal, "case {case}: {inst:?}");
                assert!((out.objective - z).abs() <= 1e-6, "case {case}: {} vs {z}", out.objective);
                let x = Assignment::new(out.primal.clone().unwrap());
                assert!(check_solution(&inst, &x, 1e-6).unwrap().feasible, "case {case}");
                optimal += 1;
            }
            None => {
                assert_eq!(out.status, LpStatus::Infeasible, "case {case}: {inst:?}");
                infeasible += 1;
            }
        }
    }
    assert!(optimal >= 100 && infeasible >= 10, "{optimal} optimal, {infeasible} infeasible");
}

#[test]
fn warm_started_children_match_cold_solves() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut checked = 0;
    while checked < 300 {
        let inst = random_lp(&mut rng, 6, 6);
        let lp = LpProblem::new(&inst);
        let view = lp.root_view();
        let root = solve_root(&view).unwrap();
        if !root.is_optimal() {
            continue;
        }
        let warm = WarmStart::new(&view, &root).unwrap();
        for _ in 0..3 {
            let j = rng.gen_range(0..inst.num_vars());
            let (l, u) = (inst.var_lower[j], inst.var_upper[j]);
            let a = rng.gen_range(l as i32..=u as i32) as f64;
            let b = if rng.gen_bool(0.5) { a } else { rng.gen_range(a as i32..=u as i32) as f64 };
            let mut lo = inst.var_lower.clone();
            let mut hi = inst.var_upper.clone();
            lo[j] = a;
            hi[j] = b;
            let expect = vertex_optimum(&inst, &lo, &hi);
            let child = warm.branch(j, (a, b), None).unwrap();
            match expect {
                Some(z) => {
                    assert_eq!(child.status, LpStatus::Optimal);
                    assert!((child.objective - z).abs() <= 1e-6, "{} vs {z}", child.objective);
                }
                None => assert_eq!(child.status, LpStatus::Infeasible),
            }
            let capped = resolve_bound_change(&root, &view, j, (a, b), Some(1)).unwrap();
            match capped.status {
                LpStatus::Infeasible => assert!(expect.is_none()),
                _ => {
                    if let Some(z) = expect {
                        assert!(capped.dual_bound <= z + 1e-6, "bound {} above optimum {z}", capped.dual_bound);
                    }
                    assert!(capped.dual_bound >= root.objective - 1e-6);
                }
            }
            checked += 1;
        }
    }
}

//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use branchlab::model::{Instance, Relation, Row, Sense, VarKind};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const ORACLE_TOL: f64 = 1e-7;

/// Solves `a x = b` (k×k, row-major) by Gaussian elimination.
fn solve_square(mut a: Vec<f64>, mut b: Vec<f64>, k: usize) -> Option<Vec<f64>> {
    for c in 0..k {
        let piv = (c..k).max_by(|&r, &s| a[r * k + c].abs().total_cmp(&a[s * k + c].abs()))?;
        if a[piv * k + c].abs() < 1e-10 {
            return None;
        }
        for t in 0..k {
            a.swap(piv * k + t, c * k + t);
        }
        b.swap(piv, c);
        for r in 0..k {
            if r == c {
                continue;
            }
            let f = a[r * k + c] / a[c * k + c];
            if f == 0.0 {
                continue;
            }
            for t in 0..k {
                a[r * k + t] -= f * a[c * k + t];
            }
            b[r] -= f * b[c];
        }
    }
    Some((0..k).map(|i| b[i] / a[i * k + i]).collect())
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), f);
}

/// Minimization-sense LP optimum over the box `[lower, upper]` (all finite)
/// by enumerating every vertex. `None` means infeasible.
pub fn vertex_optimum(inst: &Instance, lower: &[f64], upper: &[f64]) -> Option<f64> {
    if lower.iter().zip(upper).any(|(l, u)| l > u) {
        return None;
    }
    if lower.iter().zip(upper).any(|(l, u)| l == u) {
        return eliminate_fixed(inst, lower, upper);
    }
    let n = inst.num_vars();
    let cost = inst.min_objective();
    if n == 0 {
        return inst.rows.iter().all(|r| r.violation(0.0) <= ORACLE_TOL).then_some(0.0);
    }
    // Hyperplanes: rows, then x_j = l_j, then x_j = u_j.
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for row in &inst.rows {
        let mut a = vec![0.0; n];
        for &(j, v) in &row.coeffs {
            a[j] = v;
        }
        planes.push((a, row.rhs));
    }
    for (bounds, _) in [(lower, 0), (upper, 1)] {
        for j in 0..n {
            let mut a = vec![0.0; n];
            a[j] = 1.0;
            planes.push((a, bounds[j]));
        }
    }
    let mut best: Option<f64> = None;
    combinations(planes.len(), n, &mut |idx| {
        let a: Vec<f64> = idx.iter().flat_map(|&i| planes[i].0.iter().copied()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| planes[i].1).collect();
        let Some(x) = solve_square(a, b, n) else { return };
        let scale = 1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = ORACLE_TOL * scale;
        if (0..n).any(|j| x[j] < lower[j] - tol || x[j] > upper[j] + tol) {
            return;
        }
        if inst.rows.iter().any(|r| r.violation(r.activity(&x)) > tol) {
            return;
        }
        let z: f64 = cost.iter().zip(&x).map(|(c, v)| c * v).sum();
        if best.is_none_or(|b| z < b) {
            best = Some(z);
        }
    });
    best
}

/// Substitutes fixed variables out and solves the remaining LP.
fn eliminate_fixed(inst: &Instance, lower: &[f64], upper: &[f64]) -> Option<f64> {
    let n = inst.num_vars();
    let cost = inst.min_objective();
    let free: Vec<usize> = (0..n).filter(|&j| lower[j] < upper[j]).collect();
    let mut map = vec![usize::MAX; n];
    for (t, &j) in free.iter().enumerate() {
        map[j] = t;
    }
    let constant: f64 = (0..n).filter(|&j| map[j] == usize::MAX).map(|j| cost[j] * lower[j]).sum();
    let mut rows = Vec::new();
    for r in &inst.rows {
        let mut rhs = r.rhs;
        let mut coeffs = Vec::new();
        for &(j, a) in &r.coeffs {
            if map[j] == usize::MAX {
                rhs -= a * lower[j];
            } else {
                coeffs.push((map[j], a));
            }
        }
        if coeffs.is_empty() {
            if r.violation(r.rhs - rhs) > ORACLE_TOL {
                return None;
            }
            continue;
        }
        rows.push(Row::new(coeffs, r.relation, rhs));
    }
    let reduced = Instance::new(
        "reduced",
        Sense::Minimize,
        free.iter().map(|&j| cost[j]).collect(),
        free.iter().map(|&j| lower[j]).collect(),
        free.iter().map(|&j| upper[j]).collect(),
        vec![VarKind::Continuous; free.len()],
        rows,
    )
    .unwrap();
    vertex_optimum(&reduced, &reduced.var_lower, &reduced.var_upper).map(|z| z + constant)
}

/// Minimization-sense MILP optimum by enumerating binaries and solving the
/// continuous remainder by vertex enumeration.
pub fn brute_force_milp(inst: &Instance) -> Option<f64> {
    let bins: Vec<usize> = inst.binaries().collect();
    assert!(bins.len() <= 16, "brute force limited to 16 binaries");
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << bins.len()) {
        let mut lo = inst.var_lower.clone();
        let mut hi = inst.var_upper.clone();
        for (t, &j) in bins.iter().enumerate() {
            let v = ((mask >> t) & 1) as f64;
            lo[j] = v;
            hi[j] = v;
        }
        if let Some(z) = vertex_optimum(inst, &lo, &hi) {
            if best.is_none_or(|b| z < b) {
                best = Some(z);
            }
        }
    }
    best
}

fn random_rows(rng: &mut ChaCha8Rng, n: usize, m: usize, density: f64) -> Vec<Row> {
    (0..m)
        .map(|_| {
            let mut coeffs: Vec<(usize, f64)> = Vec::new();
            for j in 0..n {
                if rng.gen_bool(density) {
                    let a = rng.gen_range(-5i32..=5) as f64;
                    if a != 0.0 {
                        coeffs.push((j, a));
                    }
                }
            }
            if coeffs.is_empty() && n > 0 {
                coeffs.push((rng.gen_range(0..n), rng.gen_range(1i32..=4) as f64));
            }
            let relation = match rng.gen_range(0..10) {
                0..=5 => Relation::Le,
                6..=8 => Relation::Ge,
                _ => Relation::Eq,
            };
            Row::new(coeffs, relation, rng.gen_range(-4i32..=10) as f64)
        })
        .collect()
}

/// A boxed continuous LP with at most `max_n` variables and `max_m` rows.
pub fn random_lp(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize) -> Instance {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(0..=max_m);
    let lower: Vec<f64> = (0..n).map(|_| rng.gen_range(-3i32..=1) as f64).collect();
    let upper: Vec<f64> = lower.iter().map(|l| l + rng.gen_range(0i32..=5) as f64).collect();
    let sense = if rng.gen_bool(0.5) { Sense::Minimize } else { Sense::Maximize };
    Instance::new(
        "lp",
        sense,
        (0..n).map(|_| rng.gen_range(-5i32..=5) as f64).collect(),
        lower,
        upper,
        vec![VarKind::Continuous; n],
        random_rows(rng, n, m, 0.6),
    )
    .unwrap()
}

/// A mixed-binary program with up to `max_bin` binaries and up to three
/// bounded continuous variables.
pub fn random_milp(rng: &mut ChaCha8Rng, max_bin: usize) -> Instance {
    let nb = rng.gen_range(3..=max_bin);
    let nc = rng.gen_range(0..=3);
    let n = nb + nc;
    let m = rng.gen_range(2..=6);
    let mut lower = vec![0.0; n];
    let mut upper = vec![1.0; n];
    let mut kind = vec![VarKind::Binary; n];
    for j in nb..n {
        lower[j] = 0.0;
        upper[j] = rng.gen_range(1i32..=4) as f64;
        kind[j] = VarKind::Continuous;
    }
    let sense = if rng.gen_bool(0.5) { Sense::Minimize } else { Sense::Maximize };
    // Knapsack-like rows keep most instances feasible yet fractional.
    let rows: Vec<Row> = (0..m)
        .map(|_| {
            let mut coeffs: Vec<(usize, f64)> = Vec::new();
            for j in 0..n {
                if rng.gen_bool(0.7) {
                    let a = rng.gen_range(-2i32..=9) as f64;
                    if a != 0.0 {
                        coeffs.push((j, a));
                    }
                }
            }
            let total: f64 = coeffs.iter().map(|&(j, a)| a.max(0.0) * upper[j]).sum();
            let relation = match rng.gen_range(0..10) {
                0..=6 => Relation::Le,
                7..=8 => Relation::Ge,
                _ => Relation::Eq,
            };
            let rhs = match relation {
                Relation::Le => (total * rng.gen_range(0.3..0.7)).floor(),
                Relation::Ge => (total * rng.gen_range(0.1..0.3)).floor(),
                Relation::Eq => (total * rng.gen_range(0.3..0.6)).floor(),
            };
            Row::new(coeffs, relation, rhs)
        })
        .filter(|r| !r.coeffs.is_empty())
        .collect();
    Instance::new("milp", sense, (0..n).map(|_| rng.gen_range(-10i32..=10) as f64).collect(), lower, upper, kind, rows)
        .unwrap()
}

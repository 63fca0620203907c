//! One builder per problem family. Each draws from the supplied RNG in a
//! fixed order so that a seed determines the instance bit for bit.

use super::graphs::{barabasi_albert, geometric_graph, greedy_clique_cover};
use crate::model::{Instance, ModelError, Relation, Row, Sense, VarKind};
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

type Built = Result<Instance, ModelError>;

fn binaries(n: usize) -> (Vec<f64>, Vec<f64>, Vec<VarKind>) {
    (vec![0.0; n], vec![1.0; n], vec![VarKind::Binary; n])
}

pub fn multi_knapsack(rng: &mut ChaCha8Rng, name: String, n: usize, m: usize, frac: f64) -> Built {
    let c: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=200) as f64).collect();
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let mut coeffs = Vec::new();
        for j in 0..n {
            if !rng.gen_bool(0.95) {
                coeffs.push((j, rng.gen_range(1..=200) as f64));
            }
        }
        let total: f64 = coeffs.iter().map(|&(_, a)| a).sum();
        rows.push(Row::new(coeffs, Relation::Le, (frac * total).floor()));
    }
    let (lo, hi, kind) = binaries(n);
    Instance::new(name, Sense::Maximize, c, lo, hi, kind, rows)
}

/// Variables: production `x` (n), inventory `s` (n-1), setups `y` (n).
pub fn lot_sizing(rng: &mut ChaCha8Rng, name: String, n: usize) -> Built {
    let c: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=10) as f64).collect();
    let f: Vec<f64> = (0..n).map(|_| rng.gen_range(300..=600) as f64).collect();
    let h: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(1..=10) as f64).collect();
    let d: Vec<f64> = (0..n).map(|_| rng.gen_range(50..=100) as f64).collect();
    let u: Vec<f64> = (0..n).map(|_| rng.gen_range(150..=250) as f64).collect();
    let (x, s, y) = (|i: usize| i, |i: usize| n + i, |i: usize| 2 * n - 1 + i);
    let nv = 3 * n - 1;
    let mut obj = vec![0.0; nv];
    for i in 0..n {
        obj[x(i)] = c[i];
        obj[y(i)] = f[i];
    }
    for i in 0..n - 1 {
        obj[s(i)] = h[i];
    }
    let mut rows = Vec::new();
    for i in 0..n {
        let mut coeffs = vec![(x(i), 1.0)];
        if i > 0 {
            coeffs.push((s(i - 1), 1.0));
        }
        if i < n - 1 {
            coeffs.push((s(i), -1.0));
        }
        rows.push(Row::new(coeffs, Relation::Eq, d[i]));
    }
    for i in 0..n {
        let rest: f64 = d[i..].iter().sum();
        rows.push(Row::new(vec![(x(i), 1.0), (y(i), -rest)], Relation::Le, 0.0));
    }
    for i in 0..n {
        rows.push(Row::new(vec![(x(i), 1.0), (y(i), -u[i])], Relation::Le, 0.0));
    }
    let mut kind = vec![VarKind::Continuous; nv];
    let mut upper = vec![f64::INFINITY; nv];
    for i in 0..n {
        kind[y(i)] = VarKind::Binary;
        upper[y(i)] = 1.0;
    }
    Instance::new(name, Sense::Minimize, obj, vec![0.0; nv], upper, kind, rows)
}

/// Variables in blocks `x`, `s`, `y`, each indexed `p * t + i`. The initial
/// inventory moves to the right-hand side and `s_T` is fixed to zero.
pub fn big_bucket(rng: &mut ChaCha8Rng, name: String, t: usize, p: usize) -> Built {
    let pt = p * t;
    let draw = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| -> Vec<f64> {
        (0..pt).map(|_| rng.gen_range(lo..=hi) as f64).collect()
    };
    let ts = draw(rng, 200, 500);
    let tu = draw(rng, 1, 10);
    let cap: Vec<f64> = (0..t).map(|_| rng.gen_range(1500..=3000) as f64).collect();
    let f = draw(rng, 300, 600);
    let h = draw(rng, 1, 10);
    let d = draw(rng, 0, 100);
    let z: Vec<f64> = (0..p).map(|_| rng.gen_range(0..=200) as f64).collect();
    let idx = |q: usize, i: usize| q * t + i;
    let (x, s, y) = (|k: usize| k, |k: usize| pt + k, |k: usize| 2 * pt + k);
    let nv = 3 * pt;
    let mut obj = vec![0.0; nv];
    let mut upper = vec![f64::INFINITY; nv];
    let mut kind = vec![VarKind::Continuous; nv];
    for k in 0..pt {
        obj[y(k)] = f[k];
        obj[s(k)] = h[k];
        upper[y(k)] = 1.0;
        kind[y(k)] = VarKind::Binary;
    }
    for q in 0..p {
        upper[s(idx(q, t - 1))] = 0.0;
    }
    let mut rows = Vec::new();
    for q in 0..p {
        for i in 0..t {
            let k = idx(q, i);
            let mut coeffs = vec![(x(k), 1.0), (s(k), -1.0)];
            let mut rhs = d[k];
            if i == 0 {
                rhs -= z[q];
            } else {
                coeffs.insert(0, (s(idx(q, i - 1)), 1.0));
            }
            rows.push(Row::new(coeffs, Relation::Eq, rhs));
        }
    }
    for q in 0..p {
        for i in 0..t {
            let k = idx(q, i);
            let rest: f64 = (i..t).map(|j| d[idx(q, j)]).sum();
            let mut coeffs = vec![(x(k), 1.0)];
            if rest > 0.0 {
                coeffs.push((y(k), -rest));
            }
            rows.push(Row::new(coeffs, Relation::Le, 0.0));
        }
    }
    for i in 0..t {
        let mut coeffs = Vec::new();
        for q in 0..p {
            let k = idx(q, i);
            coeffs.push((x(k), tu[k]));
            coeffs.push((y(k), ts[k]));
        }
        rows.push(Row::new(coeffs, Relation::Le, cap[i]));
    }
    Instance::new(name, Sense::Minimize, obj, vec![0.0; nv], upper, kind, rows)
}

pub fn matching(rng: &mut ChaCha8Rng, name: String, nodes: usize, edges: usize) -> Built {
    let e = geometric_graph(rng, nodes, edges);
    let w: Vec<f64> = (0..e.len()).map(|_| rng.gen::<f64>()).collect();
    let mut incident = vec![Vec::new(); nodes];
    for (k, &(u, v)) in e.iter().enumerate() {
        incident[u].push((k, 1.0));
        incident[v].push((k, 1.0));
    }
    let rows = incident.into_iter().filter(|c| !c.is_empty()).map(|c| Row::new(c, Relation::Le, 1.0)).collect();
    let (lo, hi, kind) = binaries(e.len());
    Instance::new(name, Sense::Maximize, w, lo, hi, kind, rows)
}

/// Variables: set choices `x` (binary) then element coverage `y` in [0,1];
/// the cardinality row comes last.
pub fn weighted_coverage(rng: &mut ChaCha8Rng, name: String, universe: usize, sets: usize, k: usize) -> Built {
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); universe];
    for s in 0..sets {
        for m in members.iter_mut() {
            if rng.gen_bool(0.03) {
                m.push(s);
            }
        }
    }
    let w: Vec<f64> = (0..universe).map(|_| rng.gen::<f64>()).collect();
    let nv = sets + universe;
    let mut obj = vec![0.0; nv];
    obj[sets..].copy_from_slice(&w);
    let mut kind = vec![VarKind::Continuous; nv];
    kind[..sets].fill(VarKind::Binary);
    let mut rows: Vec<Row> = members
        .iter()
        .enumerate()
        .map(|(e, ms)| {
            let mut coeffs = vec![(sets + e, 1.0)];
            coeffs.extend(ms.iter().map(|&s| (s, -1.0)));
            Row::new(coeffs, Relation::Le, 0.0)
        })
        .collect();
    rows.push(Row::new((0..sets).map(|s| (s, 1.0)).collect(), Relation::Le, k as f64));
    Instance::new(name, Sense::Maximize, obj, vec![0.0; nv], vec![1.0; nv], kind, rows)
}

/// Variables: asset weights `x` (unbounded above) then scenario flags `z`.
pub fn portfolio(rng: &mut ChaCha8Rng, name: String, n: usize, m: usize, k: usize) -> Built {
    const R: f64 = 1.1;
    let mut rows = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut coeffs: Vec<(usize, f64)> = (0..n).map(|j| (j, rng.gen_range(0.8..1.5))).collect();
        coeffs.push((n + i, R));
        rows.push(Row::new(coeffs, Relation::Ge, R));
    }
    rows.push(Row::new((0..m).map(|i| (n + i, 1.0)).collect(), Relation::Le, k as f64));
    let nv = n + m;
    let mut obj = vec![0.0; nv];
    obj[..n].fill(1.0);
    let mut upper = vec![1.0; nv];
    upper[..n].fill(f64::INFINITY);
    let mut kind = vec![VarKind::Binary; nv];
    kind[..n].fill(VarKind::Continuous);
    Instance::new(name, Sense::Minimize, obj, vec![0.0; nv], upper, kind, rows)
}

/// Variables: signed flow fractions `x[p][e]`, their magnitudes `z[p][e]`,
/// then edge switches `y[e]`.
pub fn fixed_charge_flow(rng: &mut ChaCha8Rng, name: String, nodes: usize, edges: usize, commodities: usize) -> Built {
    let e = geometric_graph(rng, nodes, edges);
    let ne = e.len();
    let mut od = Vec::with_capacity(commodities);
    for _ in 0..commodities {
        let s = rng.gen_range(0..nodes);
        let mut t = rng.gen_range(0..nodes - 1);
        if t >= s {
            t += 1;
        }
        od.push((s, t));
    }
    let dem: Vec<f64> = (0..commodities).map(|_| rng.gen_range(100..=300) as f64).collect();
    let total: i64 = dem.iter().sum::<f64>() as i64;
    let unit: Vec<f64> = (0..ne).map(|_| rng.gen_range(3..=10) as f64).collect();
    let fixed: Vec<f64> = (0..ne).map(|_| rng.gen_range(3 * total..=8 * total) as f64).collect();
    let cap: Vec<f64> = (0..ne).map(|_| rng.gen_range(90..=240) as f64).collect();
    let pe = commodities * ne;
    let (x, z, y) = (|p: usize, k: usize| p * ne + k, |p: usize, k: usize| pe + p * ne + k, |k: usize| 2 * pe + k);
    let nv = 2 * pe + ne;
    let mut obj = vec![0.0; nv];
    let mut lower = vec![0.0; nv];
    let mut kind = vec![VarKind::Continuous; nv];
    for k in 0..ne {
        obj[y(k)] = fixed[k];
        kind[y(k)] = VarKind::Binary;
        for p in 0..commodities {
            obj[z(p, k)] = dem[p] * unit[k];
            lower[x(p, k)] = -1.0;
        }
    }
    let mut rows = Vec::new();
    for (p, &(s, t)) in od.iter().enumerate() {
        let mut flow = vec![Vec::new(); nodes];
        for (k, &(u, v)) in e.iter().enumerate() {
            flow[u].push((x(p, k), 1.0));
            flow[v].push((x(p, k), -1.0));
        }
        for (v, coeffs) in flow.into_iter().enumerate() {
            let rhs = (v == s) as i32 as f64 - (v == t) as i32 as f64;
            if coeffs.is_empty() && rhs == 0.0 {
                continue;
            }
            rows.push(Row::new(coeffs, Relation::Eq, rhs));
        }
    }
    for k in 0..ne {
        let mut coeffs: Vec<(usize, f64)> = (0..commodities).map(|p| (z(p, k), dem[p])).collect();
        coeffs.push((y(k), -cap[k]));
        rows.push(Row::new(coeffs, Relation::Le, 0.0));
    }
    for p in 0..commodities {
        for k in 0..ne {
            rows.push(Row::new(vec![(z(p, k), 1.0), (x(p, k), -1.0)], Relation::Ge, 0.0));
            rows.push(Row::new(vec![(z(p, k), 1.0), (x(p, k), 1.0)], Relation::Ge, 0.0));
        }
    }
    Instance::new(name, Sense::Minimize, obj, lower, vec![1.0; nv], kind, rows)
}

fn unit_rows(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Vec<(usize, f64)>> {
    let lo = 2 * n / 25 + 1;
    let hi = (3 * n / 25).saturating_sub(1).max(lo);
    (0..m)
        .map(|_| {
            let ni = rng.gen_range(lo..=hi);
            let p = (ni as f64 / n as f64).min(1.0);
            let mut coeffs: Vec<(usize, f64)> = (0..n).filter(|_| rng.gen_bool(p)).map(|j| (j, 1.0)).collect();
            if coeffs.is_empty() {
                coeffs.push((rng.gen_range(0..n), 1.0));
            }
            coeffs
        })
        .collect()
}

pub fn set_packing(rng: &mut ChaCha8Rng, name: String, n: usize, m: usize) -> Built {
    let c: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=100) as f64).collect();
    let rows = unit_rows(rng, n, m).into_iter().map(|r| Row::new(r, Relation::Le, 1.0)).collect();
    let (lo, hi, kind) = binaries(n);
    Instance::new(name, Sense::Maximize, c, lo, hi, kind, rows)
}

pub fn set_covering(rng: &mut ChaCha8Rng, name: String, n: usize, m: usize) -> Built {
    let c: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=100) as f64).collect();
    let rows = unit_rows(rng, n, m).into_iter().map(|r| Row::new(r, Relation::Ge, 1.0)).collect();
    let (lo, hi, kind) = binaries(n);
    Instance::new(name, Sense::Minimize, c, lo, hi, kind, rows)
}

/// One row per clique of a greedy edge cover.
pub fn independent_set(rng: &mut ChaCha8Rng, name: String, nodes: usize, affinity: usize) -> Built {
    let adj = barabasi_albert(rng, nodes, affinity);
    let rows = greedy_clique_cover(&adj)
        .into_iter()
        .map(|c| Row::new(c.into_iter().map(|v| (v, 1.0)).collect(), Relation::Le, 1.0))
        .collect();
    let (lo, hi, kind) = binaries(nodes);
    Instance::new(name, Sense::Maximize, vec![1.0; nodes], lo, hi, kind, rows)
}

/// Variables: assignment fractions `x[i][j]` (customer-major) then `y[j]`.
pub fn facility_location(rng: &mut ChaCha8Rng, name: String, customers: usize, facilities: usize, ratio: f64) -> Built {
    let cx: Vec<f64> = (0..customers).map(|_| rng.gen::<f64>()).collect();
    let cy: Vec<f64> = (0..customers).map(|_| rng.gen::<f64>()).collect();
    let fx: Vec<f64> = (0..facilities).map(|_| rng.gen::<f64>()).collect();
    let fy: Vec<f64> = (0..facilities).map(|_| rng.gen::<f64>()).collect();
    let demand: Vec<f64> = (0..customers).map(|_| rng.gen_range(5..=35) as f64).collect();
    let raw_cap: Vec<f64> = (0..facilities).map(|_| rng.gen_range(10..=160) as f64).collect();
    let base: Vec<f64> = (0..facilities).map(|_| rng.gen_range(100..=110) as f64).collect();
    let extra: Vec<f64> = (0..facilities).map(|_| rng.gen_range(0..=90) as f64).collect();
    let fixed: Vec<f64> = (0..facilities).map(|j| (base[j] * raw_cap[j].sqrt() + extra[j]).floor()).collect();
    let total_demand: f64 = demand.iter().sum();
    let total_cap: f64 = raw_cap.iter().sum();
    let cap: Vec<f64> = raw_cap.iter().map(|c| (c * ratio * total_demand / total_cap).floor()).collect();
    let nx = customers * facilities;
    let nv = nx + facilities;
    let mut obj = vec![0.0; nv];
    for i in 0..customers {
        for j in 0..facilities {
            let dist = ((cx[i] - fx[j]).powi(2) + (cy[i] - fy[j]).powi(2)).sqrt();
            obj[i * facilities + j] = dist * 10.0 * demand[i];
        }
    }
    obj[nx..].copy_from_slice(&fixed);
    let mut rows: Vec<Row> = (0..customers)
        .map(|i| Row::new((0..facilities).map(|j| (i * facilities + j, 1.0)).collect(), Relation::Eq, 1.0))
        .collect();
    for j in 0..facilities {
        let mut coeffs: Vec<(usize, f64)> = (0..customers).map(|i| (i * facilities + j, demand[i])).collect();
        coeffs.push((nx + j, -cap[j]));
        rows.push(Row::new(coeffs, Relation::Le, 0.0));
    }
    let mut kind = vec![VarKind::Continuous; nv];
    kind[nx..].fill(VarKind::Binary);
    Instance::new(name, Sense::Minimize, obj, vec![0.0; nv], vec![1.0; nv], kind, rows)
}

/// Parameters of the "arbitrary relationships" bid generator.
pub struct AuctionParams {
    pub items: usize,
    pub bids: usize,
    pub min_value: f64,
    pub max_value: f64,
    pub value_deviation: f64,
    pub add_item_prob: f64,
    pub max_sub_bids: usize,
    pub additivity: f64,
    pub budget_factor: f64,
    pub resale_factor: f64,
}

fn next_item(rng: &mut ChaCha8Rng, bundle: &BTreeSet<usize>, interests: &[f64], compat: &[Vec<f64>]) -> usize {
    let weights: Vec<f64> = (0..interests.len())
        .map(|j| {
            if bundle.contains(&j) {
                0.0
            } else {
                let mean = bundle.iter().map(|&i| compat[i][j]).sum::<f64>() / bundle.len() as f64;
                interests[j] * mean
            }
        })
        .collect();
    WeightedIndex::new(&weights).expect("some item remains compatible").sample(rng)
}

pub fn combinatorial_auction(rng: &mut ChaCha8Rng, name: String, a: &AuctionParams) -> Built {
    let n = a.items;
    let values: Vec<f64> = (0..n).map(|_| a.min_value + (a.max_value - a.min_value) * rng.gen::<f64>()).collect();
    let mut compat = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let r: f64 = rng.gen();
            if j > i {
                compat[i][j] = r;
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            compat[i][j] = compat[j][i];
        }
    }
    let sums: Vec<f64> = compat.iter().map(|r| r.iter().sum()).collect();
    for row in compat.iter_mut() {
        for (j, c) in row.iter_mut().enumerate() {
            *c /= sums[j];
        }
    }
    let price_of = |pv: &[f64], b: &BTreeSet<usize>| -> f64 {
        b.iter().map(|&i| pv[i]).sum::<f64>() + (b.len() as f64).powf(1.0 + a.additivity)
    };
    let mut bids: Vec<(Vec<usize>, f64)> = Vec::new();
    let mut dummies = 0usize;
    while bids.len() < a.bids {
        let interests: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let pv: Vec<f64> =
            (0..n).map(|i| values[i] + a.max_value * a.value_deviation * (2.0 * interests[i] - 1.0)).collect();
        let first = WeightedIndex::new(&interests).expect("positive interests").sample(rng);
        let mut bundle = BTreeSet::from([first]);
        while rng.gen::<f64>() < a.add_item_prob {
            if bundle.len() == n {
                break;
            }
            let it = next_item(rng, &bundle, &interests, &compat);
            bundle.insert(it);
        }
        let price = price_of(&pv, &bundle);
        if price < 0.0 {
            continue;
        }
        let mut bidder: Vec<(BTreeSet<usize>, f64)> = vec![(bundle.clone(), price)];
        let mut subs = Vec::new();
        for &item in &bundle {
            let mut sb = BTreeSet::from([item]);
            while sb.len() < bundle.len() {
                let it = next_item(rng, &sb, &interests, &compat);
                sb.insert(it);
            }
            let sp = price_of(&pv, &sb);
            subs.push((sb, sp));
        }
        subs.sort_by(|x, y| y.1.total_cmp(&x.1));
        let budget = a.budget_factor * price;
        let resale = |b: &BTreeSet<usize>| b.iter().map(|&i| values[i]).sum::<f64>();
        let min_resale = a.resale_factor * resale(&bundle);
        for (sb, sp) in subs {
            if bidder.len() > a.max_sub_bids || bids.len() + bidder.len() >= a.bids {
                break;
            }
            if sp < 0.0 || sp > budget || resale(&sb) < min_resale || bidder.iter().any(|(b, _)| *b == sb) {
                continue;
            }
            bidder.push((sb, sp));
        }
        let dummy = if bidder.len() > 2 {
            dummies += 1;
            Some(n + dummies - 1)
        } else {
            None
        };
        for (b, p) in bidder {
            let mut items: Vec<usize> = b.into_iter().collect();
            items.extend(dummy);
            bids.push((items, p));
        }
    }
    let mut by_item = vec![Vec::new(); n + dummies];
    for (k, (items, _)) in bids.iter().enumerate() {
        for &i in items {
            by_item[i].push((k, 1.0));
        }
    }
    let rows = by_item.into_iter().filter(|c| !c.is_empty()).map(|c| Row::new(c, Relation::Le, 1.0)).collect();
    let prices = bids.iter().map(|b| b.1).collect();
    let (lo, hi, kind) = binaries(bids.len());
    Instance::new(name, Sense::Maximize, prices, lo, hi, kind, rows)
}

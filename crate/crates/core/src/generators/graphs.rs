//! Random graph models used by the graph-based families.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Points uniform in the unit square; the `edges` closest pairs become edges,
/// ordered by (distance, i, j).
pub fn geometric_graph(rng: &mut ChaCha8Rng, nodes: usize, edges: usize) -> Vec<(usize, usize)> {
    let pts: Vec<(f64, f64)> = (0..nodes).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let mut pairs = Vec::with_capacity(nodes * nodes.saturating_sub(1) / 2);
    for i in 0..nodes {
        for j in i + 1..nodes {
            let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
            pairs.push(((dx * dx + dy * dy).sqrt(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    pairs.truncate(edges);
    pairs.into_iter().map(|(_, i, j)| (i, j)).collect()
}

/// Barabási–Albert graph: the first `affinity + 1` nodes form a clique, then
/// each new node attaches to `affinity` distinct nodes chosen proportionally
/// to degree.
pub fn barabasi_albert(rng: &mut ChaCha8Rng, nodes: usize, affinity: usize) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); nodes];
    let seed = (affinity + 1).min(nodes);
    for i in 0..seed {
        for j in i + 1..seed {
            adj[i].insert(j);
            adj[j].insert(i);
        }
    }
    for v in seed..nodes {
        let mut weights: Vec<f64> = (0..v).map(|u| adj[u].len() as f64).collect();
        for _ in 0..affinity.min(v) {
            let dist = WeightedIndex::new(&weights).expect("positive degrees");
            let u = dist.sample(rng);
            weights[u] = 0.0;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    adj
}

/// Greedy edge cover by cliques: repeatedly take the uncovered edge with the
/// smallest degree sum (ties by index) and grow it into a maximal clique by
/// scanning common neighbours in index order.
pub fn greedy_clique_cover(adj: &[BTreeSet<usize>]) -> Vec<Vec<usize>> {
    let mut uncovered: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    for (u, nb) in adj.iter().enumerate() {
        for &v in nb.range(u + 1..) {
            uncovered.insert((adj[u].len() + adj[v].len(), u, v));
        }
    }
    let key = |u: usize, v: usize| (adj[u].len() + adj[v].len(), u.min(v), u.max(v));
    let mut cliques = Vec::new();
    while let Some(&(_, u, v)) = uncovered.iter().next() {
        let mut clique = vec![u, v];
        for &w in adj[u].intersection(&adj[v]) {
            if clique.iter().all(|c| adj[*c].contains(&w)) {
                clique.push(w);
            }
        }
        clique.sort_unstable();
        for (a, &x) in clique.iter().enumerate() {
            for &y in &clique[a + 1..] {
                uncovered.remove(&key(x, y));
            }
        }
        cliques.push(clique);
    }
    cliques
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn geometric_edges_are_distinct() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let e = geometric_graph(&mut rng, 30, 60);
        assert_eq!(e.len(), 60);
        let set: BTreeSet<_> = e.iter().copied().collect();
        assert_eq!(set.len(), 60);
        assert!(e.iter().all(|&(i, j)| i < j && j < 30));
    }

    #[test]
    fn ba_edge_count_and_clique_cover() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let adj = barabasi_albert(&mut rng, 50, 4);
        let edges: usize = adj.iter().map(|s| s.len()).sum::<usize>() / 2;
        assert_eq!(edges, 10 + 45 * 4);
        let cliques = greedy_clique_cover(&adj);
        let mut covered = BTreeSet::new();
        for c in &cliques {
            assert!(c.len() >= 2);
            for (a, &u) in c.iter().enumerate() {
                for &v in &c[a + 1..] {
                    assert!(adj[u].contains(&v));
                    covered.insert((u, v));
                }
            }
        }
        assert_eq!(covered.len(), edges);
    }
}

//! Small exact-weight graph routines shared by the metric kernel.
//!
//! Weights are scaled integer numerators (the caller owns the common
//! denominator), so shortest paths stay exact.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Sentinel for "unreached" in integer Dijkstra.
pub const UNREACHED: i64 = i64::MAX;

/// Adjacency-list graph with `i64` weights.
#[derive(Clone, Debug, Default)]
pub struct WeightedGraph {
    pub adj: Vec<Vec<(usize, i64)>>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        WeightedGraph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn add_undirected(&mut self, u: usize, v: usize, w: i64) {
        debug_assert!(w >= 0);
        self.adj[u].push((v, w));
        self.adj[v].push((u, w));
    }

    /// Multi-source Dijkstra: `sources` carries initial potentials.
    /// Returns the distance of every vertex to the potential-shifted
    /// source set (`UNREACHED` where unreachable).
    pub fn dijkstra(&self, sources: &[(usize, i64)]) -> Vec<i64> {
        let mut dist = vec![UNREACHED; self.len()];
        let mut heap = BinaryHeap::new();
        for &(s, p) in sources {
            if p < dist[s] {
                dist[s] = p;
                heap.push(Reverse((p, s)));
            }
        }
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        dist
    }
}

/// Dense-graph Dijkstra over an implicit complete graph given by a weight
/// oracle; O(n^2), suitable for quotient pseudometrics on full point sets.
/// `zero_groups` lists index groups connected pairwise at weight 0.
pub fn dense_dijkstra<W>(n: usize, sources: &[(usize, i64)], zero_groups: &[Vec<usize>], weight: W) -> Vec<i64>
where
    W: Fn(usize, usize) -> i64,
{
    let mut group_of = vec![usize::MAX; n];
    for (g, members) in zero_groups.iter().enumerate() {
        for &m in members {
            group_of[m] = g;
        }
    }
    let mut dist = vec![UNREACHED; n];
    let mut done = vec![false; n];
    for &(s, p) in sources {
        if p < dist[s] {
            dist[s] = p;
        }
    }
    for _ in 0..n {
        let mut u = usize::MAX;
        let mut best = UNREACHED;
        for v in 0..n {
            if !done[v] && dist[v] < best {
                best = dist[v];
                u = v;
            }
        }
        if u == usize::MAX {
            break;
        }
        done[u] = true;
        let du = dist[u];
        for v in 0..n {
            if done[v] {
                continue;
            }
            let w = weight(u, v);
            if du + w < dist[v] {
                dist[v] = du + w;
            }
        }
        if group_of[u] != usize::MAX {
            for &v in &zero_groups[group_of[u]] {
                if !done[v] && du < dist[v] {
                    dist[v] = du;
                }
            }
        }
    }
    dist
}

/// Connected components under an arbitrary adjacency predicate; returns
/// the component id per vertex, ids ordered by smallest member.
pub fn components_by<F>(n: usize, adjacent: F) -> Vec<usize>
where
    F: Fn(usize, usize) -> bool,
{
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = next;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if comp[v] == usize::MAX && adjacent(u, v) {
                    comp[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Exact maximum independent set size via branch and bound on an
/// adjacency-bitset graph (intended for <= 64 vertices).
pub fn max_independent_set(adj: &[u64]) -> Vec<usize> {
    let n = adj.len();
    assert!(n <= 64, "bitset MIS supports at most 64 vertices");
    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let mut best: u64;

    fn greedy(adj: &[u64], mut avail: u64) -> u64 {
        let mut chosen = 0u64;
        while avail != 0 {
            // lowest-degree-first greedy seed
            let mut pick = usize::MAX;
            let mut pick_deg = u32::MAX;
            let mut bits = avail;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let deg = (adj[v] & avail).count_ones();
                if deg < pick_deg {
                    pick_deg = deg;
                    pick = v;
                }
            }
            chosen |= 1u64 << pick;
            avail &= !(adj[pick] | (1u64 << pick));
        }
        chosen
    }

    fn branch(adj: &[u64], avail: u64, cur: u64, best: &mut u64) {
        if avail == 0 {
            if cur.count_ones() > best.count_ones() {
                *best = cur;
            }
            return;
        }
        if cur.count_ones() + avail.count_ones() <= best.count_ones() {
            return;
        }
        // branch on a max-degree available vertex
        let mut pick = usize::MAX;
        let mut pick_deg = 0i64;
        let mut bits = avail;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let deg = (adj[v] & avail).count_ones() as i64;
            if pick == usize::MAX || deg > pick_deg {
                pick_deg = deg;
                pick = v;
            }
        }
        if pick_deg == 0 {
            // remaining vertices are pairwise nonadjacent
            let cand = cur | avail;
            if cand.count_ones() > best.count_ones() {
                *best = cand;
            }
            return;
        }
        let v_bit = 1u64 << pick;
        branch(adj, avail & !(adj[pick] | v_bit), cur | v_bit, best);
        branch(adj, avail & !v_bit, cur, best);
    }

    best = greedy(adj, full);
    branch(adj, full, 0, &mut best);

    let mut out = Vec::new();
    let mut bits = best;
    while bits != 0 {
        out.push(bits.trailing_zeros() as usize);
        bits &= bits - 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dijkstra_line_with_shortcut() {
        let mut g = WeightedGraph::new(4);
        g.add_undirected(0, 1, 5);
        g.add_undirected(1, 2, 5);
        g.add_undirected(2, 3, 5);
        g.add_undirected(0, 3, 7);
        let d = g.dijkstra(&[(0, 0)]);
        assert_eq!(d, vec![0, 5, 10, 7]);
    }

    #[test]
    fn dijkstra_potentials_pick_cheaper_source() {
        let mut g = WeightedGraph::new(3);
        g.add_undirected(0, 1, 1);
        g.add_undirected(1, 2, 1);
        let d = g.dijkstra(&[(0, 10), (2, 0)]);
        assert_eq!(d, vec![2, 1, 0]);
    }

    #[test]
    fn dense_dijkstra_zero_groups() {
        // line 0..=3 with {1,2} glued: d(0,3) becomes 1 + 0 + 1
        let coords = [0i64, 1, 2, 3];
        let d = dense_dijkstra(4, &[(0, 0)], &[vec![1, 2]], |a, b| (coords[a] - coords[b]).abs());
        assert_eq!(d[3], 2);
    }

    #[test]
    fn mis_on_path_of_five() {
        // path 0-1-2-3-4: MIS = {0,2,4}
        let mut adj = vec![0u64; 5];
        for v in 0..4 {
            adj[v] |= 1 << (v + 1);
            adj[v + 1] |= 1 << v;
        }
        let mis = max_independent_set(&adj);
        assert_eq!(mis.len(), 3);
    }

    #[test]
    fn mis_brute_force_agreement() {
        // deterministic pseudo-random graphs, compare against 2^n scan
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut rng = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for n in [4usize, 7, 10, 12] {
            let mut adj = vec![0u64; n];
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng() % 3 == 0 {
                        adj[u] |= 1 << v;
                        adj[v] |= 1 << u;
                    }
                }
            }
            let mut brute = 0u32;
            for mask in 0u64..(1 << n) {
                let ok = (0..n).all(|v| mask & (1 << v) == 0 || adj[v] & mask == 0);
                if ok {
                    brute = brute.max(mask.count_ones());
                }
            }
            assert_eq!(max_independent_set(&adj).len() as u32, brute);
        }
    }

    #[test]
    fn components_split() {
        let comp = components_by(5, |a, b| {
            (a as i64 - b as i64).abs() == 1 && a != 2 && b != 2
        });
        // edges: 0-1, 3-4 (vertex 2 isolated)
        assert_eq!(comp[0], comp[1]);
        assert_eq!(comp[3], comp[4]);
        assert_ne!(comp[0], comp[2]);
        assert_ne!(comp[2], comp[3]);
    }
}

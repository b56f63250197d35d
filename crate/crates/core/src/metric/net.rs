//! Greedy nets and exact r-capacities.

use super::space::Space;
use super::MetricError;
use crate::graph::max_independent_set;
use crate::rational::Rat;
use num_traits::Signed;

/// Deterministic greedy net: scan points in id order, keep a point iff it
/// is `>= c` from every kept point. The result is `c`-discrete and
/// `c`-dense.
pub fn greedy_net(space: &Space, c: Rat) -> Vec<usize> {
    assert!(c.is_positive(), "greedy_net needs c > 0");
    let mut kept: Vec<usize> = Vec::new();
    for p in 0..space.len() {
        if kept.iter().all(|&q| space.dist(p, q) >= c) {
            kept.push(p);
        }
    }
    kept
}

/// Exhaustive check of both net contracts; returns the first violation as
/// `(kind, point, point)` with kind "discrete" or "dense".
pub fn check_net(space: &Space, c: Rat, net: &[usize]) -> Option<(&'static str, usize, usize)> {
    for (i, &a) in net.iter().enumerate() {
        for &b in &net[i + 1..] {
            if space.dist(a, b) < c {
                return Some(("discrete", a, b));
            }
        }
    }
    for x in 0..space.len() {
        match net.iter().map(|&y| space.dist(x, y)).min() {
            Some(d) if d <= c => {}
            _ => {
                return Some(("dense", x, net.first().copied().unwrap_or(0)));
            }
        }
    }
    None
}

/// Result of a capacity computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Capacity {
    pub value: usize,
    /// False when the branch-and-bound cap forced a greedy lower bound.
    pub exact: bool,
    /// An r-discrete witness subset of the stated size.
    pub witness: Vec<usize>,
}

/// Maximal cardinality of an `r`-discrete subset of `subset`.
///
/// Exact (max independent set on the `< r` conflict graph) up to
/// `exact_cap` points; greedy lower bound, flagged inexact, beyond.
pub fn capacity(
    space: &Space,
    subset: &[usize],
    r: Rat,
    exact_cap: usize,
) -> Result<Capacity, MetricError> {
    if subset.is_empty() {
        return Err(MetricError::EmptySubset);
    }
    if !r.is_positive() {
        return Err(MetricError::BadParameters("capacity needs r > 0".into()));
    }
    let n = subset.len();
    if n <= exact_cap.min(64) {
        let mut adj = vec![0u64; n];
        for i in 0..n {
            for j in i + 1..n {
                if space.dist(subset[i], subset[j]) < r {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
        }
        let mis = max_independent_set(&adj);
        let witness: Vec<usize> = mis.iter().map(|&i| subset[i]).collect();
        return Ok(Capacity {
            value: witness.len(),
            exact: true,
            witness,
        });
    }
    let mut witness: Vec<usize> = Vec::new();
    for &p in subset {
        if witness.iter().all(|&q| space.dist(p, q) >= r) {
            witness.push(p);
        }
    }
    Ok(Capacity {
        value: witness.len(),
        exact: false,
        witness,
    })
}

/// Default exact-search threshold for [`capacity`].
pub const CAPACITY_EXACT_CAP: usize = 40;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::generators::{generate, GeneratorSpec};
    use crate::rational::{rat, rint};

    fn line(n: i64) -> Space {
        generate(&GeneratorSpec::Grid { dim: 1, radius: n }).unwrap()
    }

    #[test]
    fn net_on_integer_interval() {
        // {0..10} with c = 3 keeps every third point
        let sp = line(5); // coords -5..=5, ids in that order
        let net = greedy_net(&sp, rint(3));
        let ids: Vec<&str> = net.iter().map(|&i| sp.id(i)).collect();
        assert_eq!(ids, ["-5", "-2", "1", "4"]);
        assert!(check_net(&sp, rint(3), &net).is_none());
    }

    #[test]
    fn net_c_above_diameter_is_first_point() {
        let sp = line(3);
        let net = greedy_net(&sp, rint(100));
        assert_eq!(net, vec![0]);
        assert!(check_net(&sp, rint(100), &net).is_none());
    }

    #[test]
    fn net_single_point() {
        let sp = generate(&GeneratorSpec::Grid { dim: 1, radius: 0 }).unwrap();
        assert_eq!(greedy_net(&sp, rat(7, 3)), vec![0]);
    }

    #[test]
    fn net_contract_on_generated_fleet() {
        for spec in [
            GeneratorSpec::Grid { dim: 2, radius: 3 },
            GeneratorSpec::FreeGroup { generators: 2, radius: 3 },
            GeneratorSpec::M0Segment { max: 100 },
        ] {
            let sp = generate(&spec).unwrap();
            for c in [1i64, 2, 4, 8] {
                let net = greedy_net(&sp, rint(c));
                assert!(
                    check_net(&sp, rint(c), &net).is_none(),
                    "{spec:?} at c={c}"
                );
            }
        }
    }

    /// Brute-force capacity over all subsets (oracle for small cases).
    fn capacity_brute(sp: &Space, subset: &[usize], r: Rat) -> usize {
        let n = subset.len();
        assert!(n <= 20);
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let pts: Vec<usize> = (0..n)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| subset[i])
                .collect();
            let ok = pts
                .iter()
                .enumerate()
                .all(|(i, &a)| pts[i + 1..].iter().all(|&b| sp.dist(a, b) >= r));
            if ok {
                best = best.max(pts.len());
            }
        }
        best
    }

    #[test]
    fn capacity_line_of_five() {
        let sp = line(2); // five points
        let all: Vec<usize> = (0..5).collect();
        let cap = capacity(&sp, &all, rint(2), 40).unwrap();
        assert!(cap.exact);
        assert_eq!(cap.value, 3);
        assert_eq!(cap.value, capacity_brute(&sp, &all, rint(2)));
    }

    #[test]
    fn capacity_small_r_counts_everything() {
        let sp = line(3);
        let all: Vec<usize> = (0..7).collect();
        let cap = capacity(&sp, &all, rat(1, 2), 40).unwrap();
        assert_eq!(cap.value, 7);
    }

    #[test]
    fn capacity_singleton() {
        let sp = line(0);
        let cap = capacity(&sp, &[0], rint(17), 40).unwrap();
        assert_eq!(cap.value, 1);
        assert!(cap.exact);
    }

    #[test]
    fn capacity_empty_subset_errors() {
        let sp = line(1);
        assert!(matches!(
            capacity(&sp, &[], rint(1), 40),
            Err(MetricError::EmptySubset)
        ));
    }

    #[test]
    fn capacity_greedy_fallback_flagged() {
        let sp = line(30);
        let all: Vec<usize> = (0..sp.len()).collect();
        let cap = capacity(&sp, &all, rint(2), 10).unwrap();
        assert!(!cap.exact);
        assert!(cap.value >= 20);
    }

    #[test]
    fn capacity_monotone_in_r_and_subset() {
        let sp = generate(&GeneratorSpec::Grid { dim: 2, radius: 2 }).unwrap();
        let all: Vec<usize> = (0..sp.len()).collect();
        let half: Vec<usize> = (0..sp.len() / 2).collect();
        let mut prev = usize::MAX;
        for r in [1i64, 2, 3, 4] {
            let c = capacity(&sp, &all, rint(r), 40).unwrap();
            assert!(c.value <= prev);
            prev = c.value;
            let sub = capacity(&sp, &half, rint(r), 40).unwrap();
            assert!(sub.value <= c.value);
        }
    }

    #[test]
    fn capacity_matches_brute_on_random_spaces() {
        // small grids and the ternary segment against the subset oracle
        for spec in [
            GeneratorSpec::Grid { dim: 2, radius: 1 },
            GeneratorSpec::M0Segment { max: 30 },
        ] {
            let sp = generate(&spec).unwrap();
            let all: Vec<usize> = (0..sp.len()).collect();
            for r in [1i64, 2, 3] {
                let exact = capacity(&sp, &all, rint(r), 40).unwrap();
                assert!(exact.exact);
                assert_eq!(exact.value, capacity_brute(&sp, &all, rint(r)), "{spec:?} r={r}");
            }
        }
    }
}

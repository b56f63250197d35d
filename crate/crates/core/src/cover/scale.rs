//! Dimension at scale `(d, r)`: block the space, color the conflict
//! graph, compare against the exhaustive oracle on small instances.

use super::{ColoredCover, CoverBlock, CoverError};
use crate::graph::components_by;
use crate::metric::{MetricRepr, Space};
use crate::rational::Rat;
use num_traits::Signed;

/// How points are grouped into blocks before coloring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Blocker {
    /// Chain components at scale `< d`, each split by greedy
    /// diameter-`r` clustering in id order.
    #[default]
    Chain,
    /// Axis-aligned brick wall for 2-dimensional lattices; achieves 3
    /// colors where chain clustering may need 4.
    GridBrick,
}

/// Exact chromatic search threshold (blocks); beyond it DSATUR runs and
/// the result is flagged inexact.
pub const CHROMATIC_EXACT_CAP: usize = 25;

/// Point budget of the exhaustive dimension-at-scale oracle.
pub const ORACLE_MAX_POINTS: usize = 14;

#[derive(Clone, Debug)]
pub struct DimAtScaleResult {
    pub colors_used: usize,
    /// True when the chromatic number is exact (small conflict graphs).
    pub exact: bool,
    pub witness: ColoredCover,
    /// Oracle value + 1 on oracle-sized spaces, otherwise the trivial 1.
    pub lower_bound: usize,
}

impl DimAtScaleResult {
    /// Dimension-at-scale upper bound: colors minus one.
    pub fn dim_upper(&self) -> usize {
        self.colors_used - 1
    }
}

/// Deterministic blocking: chain components at `< d`, then greedy
/// diameter-`r` clusters scanned in id order.
pub fn chain_blocks(space: &Space, d: Rat, r: Rat) -> Vec<Vec<usize>> {
    let n = space.len();
    let d_scaled = d * Rat::from_integer(space.denom());
    let comp = components_by(n, |a, b| {
        Rat::from_integer(space.dist_num(a, b)) < d_scaled
    });
    let ncomp = comp.iter().copied().max().map_or(0, |c| c + 1);
    let mut blocks = Vec::new();
    for c in 0..ncomp {
        let members: Vec<usize> = (0..n).filter(|&p| comp[p] == c).collect();
        let mut assigned = vec![false; members.len()];
        for start in 0..members.len() {
            if assigned[start] {
                continue;
            }
            let mut cluster = vec![members[start]];
            assigned[start] = true;
            for j in start + 1..members.len() {
                if assigned[j] {
                    continue;
                }
                let q = members[j];
                let fits = cluster.iter().all(|&p| space.dist(p, q) <= r);
                if fits {
                    cluster.push(q);
                    assigned[j] = true;
                }
            }
            blocks.push(cluster);
        }
    }
    blocks
}

/// Brick-wall blocking of a 2-dimensional lattice: rows of height `side`,
/// odd rows shifted by half a brick; brick colors follow the triangular
/// lattice 3-coloring `(column - row) mod 3`.
fn brick_blocks(space: &Space, r: Rat) -> Result<Vec<(Vec<usize>, usize)>, CoverError> {
    let (dim, coords) = match space.repr() {
        MetricRepr::SupLattice { dim, coords } => (*dim, coords),
        _ => {
            return Err(CoverError::BadParameters(
                "grid blocker needs a lattice space".into(),
            ))
        }
    };
    if dim != 2 {
        return Err(CoverError::BadParameters(format!(
            "grid blocker supports dim 2, got {dim}"
        )));
    }
    let side = (r * Rat::from_integer(space.denom())).floor().to_integer() + 1;
    if side < 2 {
        return Err(CoverError::BadScale("brick side collapses below 2".into()));
    }
    let half = side / 2;
    let mut map = std::collections::BTreeMap::<(i64, i64), Vec<usize>>::new();
    for p in 0..space.len() {
        let x = coords[p * 2];
        let y = coords[p * 2 + 1];
        let row = y.div_euclid(side);
        let shift = if row.rem_euclid(2) == 1 { half } else { 0 };
        let col = (x + shift).div_euclid(side);
        map.entry((row, col)).or_default().push(p);
    }
    Ok(map
        .into_iter()
        .map(|((row, col), pts)| (pts, (col - row).rem_euclid(3) as usize))
        .collect())
}

/// Conflict graph: blocks at distance `< d` must get different colors.
fn conflict_graph(space: &Space, blocks: &[Vec<usize>], d: Rat) -> Vec<Vec<usize>> {
    let n = blocks.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            let dist = Rat::new(
                space.set_dist_num(&blocks[i], &blocks[j]).unwrap(),
                space.denom(),
            );
            if dist < d {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    adj
}

fn can_color_rec(adj: &[Vec<usize>], budget: usize, colors: &mut Vec<usize>, next: usize, max_used: usize) -> bool {
    if next == adj.len() {
        return true;
    }
    for c in 0..budget.min(max_used + 2) {
        if adj[next].iter().all(|&v| colors[v] != c) {
            colors[next] = c;
            if can_color_rec(adj, budget, colors, next + 1, max_used.max(c)) {
                return true;
            }
        }
    }
    colors[next] = usize::MAX;
    false
}

/// Exact chromatic number with coloring, by increasing budget.
fn chromatic_exact(adj: &[Vec<usize>]) -> (usize, Vec<usize>) {
    let n = adj.len();
    if n == 0 {
        return (0, Vec::new());
    }
    for budget in 1..=n {
        let mut colors = vec![usize::MAX; n];
        if can_color_rec(adj, budget, &mut colors, 0, 0) {
            return (budget, colors);
        }
    }
    unreachable!("n colors always suffice")
}

/// DSATUR greedy coloring; returns (colors used, assignment).
fn dsatur(adj: &[Vec<usize>]) -> (usize, Vec<usize>) {
    let n = adj.len();
    let mut colors = vec![usize::MAX; n];
    let mut sat: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colors[v] == usize::MAX)
            .max_by_key(|&v| (sat[v].len(), adj[v].len(), std::cmp::Reverse(v)))
            .unwrap();
        let mut c = 0;
        while sat[v].contains(&c) {
            c += 1;
        }
        colors[v] = c;
        for &u in &adj[v] {
            sat[u].insert(c);
        }
    }
    let used = colors.iter().map(|&c| c + 1).max().unwrap_or(0);
    (used, colors)
}

/// Exact chromatic coloring when the graph is small, DSATUR beyond.
pub(crate) fn chromatic_hint(adj: &[Vec<usize>]) -> (usize, Vec<usize>) {
    if adj.len() <= CHROMATIC_EXACT_CAP {
        chromatic_exact(adj)
    } else {
        dsatur(adj)
    }
}

/// Heuristic dimension at scale: block, build the `< d` conflict graph,
/// color it (exactly up to [`CHROMATIC_EXACT_CAP`] blocks), return the
/// witness cover. `colors_used - 1` is the upper bound.
pub fn color_cover_at_scale(
    space: &Space,
    d: Rat,
    r: Rat,
    blocker: Blocker,
) -> Result<DimAtScaleResult, CoverError> {
    if !d.is_positive() || !r.is_positive() {
        return Err(CoverError::BadScale(format!(
            "need d > 0 and r > 0, got d={d}, r={r}"
        )));
    }
    let (blocks, exact, colors): (Vec<Vec<usize>>, bool, Vec<usize>) = match blocker {
        Blocker::Chain => {
            let blocks = chain_blocks(space, d, r);
            let adj = conflict_graph(space, &blocks, d);
            let (_, coloring, exact) = if blocks.len() <= CHROMATIC_EXACT_CAP {
                let (k, c) = chromatic_exact(&adj);
                (k, c, true)
            } else {
                let (k, c) = dsatur(&adj);
                (k, c, false)
            };
            (blocks, exact, coloring)
        }
        Blocker::GridBrick => {
            let bricks = brick_blocks(space, r)?;
            let blocks: Vec<Vec<usize>> = bricks.iter().map(|(pts, _)| pts.clone()).collect();
            let colors: Vec<usize> = bricks.iter().map(|&(_, c)| c).collect();
            (blocks, true, colors)
        }
    };
    let cover = ColoredCover {
        blocks: blocks
            .into_iter()
            .zip(&colors)
            .map(|(points, &color)| CoverBlock { color, points })
            .collect(),
        d,
        r,
    };
    if let Err(v) = cover.validate(space) {
        return Err(CoverError::BadScale(format!(
            "constructed cover violates its own contract: {v:?}"
        )));
    }
    let colors_used = cover.colors_used();
    let lower_bound = if space.len() <= ORACLE_MAX_POINTS {
        dim_at_scale_oracle(space, d, r)? + 1
    } else {
        1
    };
    Ok(DimAtScaleResult {
        colors_used,
        exact,
        witness: cover,
        lower_bound,
    })
}

/// Exhaustive ground truth on spaces of at most [`ORACLE_MAX_POINTS`]
/// points: the minimum number of colors such that every same-color chain
/// component at scale `< d` has diameter `<= r`, minus one.
///
/// A coloring induces the finest valid block structure (the chain
/// components of each color class); merging blocks only grows diameters,
/// so searching over colorings is exhaustive over covers.
pub fn dim_at_scale_oracle(space: &Space, d: Rat, r: Rat) -> Result<usize, CoverError> {
    let n = space.len();
    if n > ORACLE_MAX_POINTS {
        return Err(CoverError::TooLarge(n, ORACLE_MAX_POINTS));
    }
    if !d.is_positive() || r.is_negative() {
        return Err(CoverError::BadScale("need d > 0 and r >= 0".into()));
    }
    let close = |a: usize, b: usize| space.dist(a, b) < d;

    fn feasible(
        space: &Space,
        close: &dyn Fn(usize, usize) -> bool,
        r: Rat,
        budget: usize,
        assign: &mut Vec<usize>,
        next: usize,
    ) -> bool {
        let n = space.len();
        if next == n {
            return true;
        }
        let cap = if next == 0 { 1 } else { budget };
        for c in 0..cap {
            assign[next] = c;
            // chain component of `next` among assigned same-color points
            let members: Vec<usize> = (0..=next).filter(|&p| assign[p] == c).collect();
            let sub = components_by(members.len(), |x, y| close(members[x], members[y]));
            let mine = sub[members.len() - 1];
            let comp: Vec<usize> = members
                .iter()
                .enumerate()
                .filter(|&(i, _)| sub[i] == mine)
                .map(|(_, &p)| p)
                .collect();
            let diam = Rat::new(space.subset_diameter_num(&comp), space.denom());
            if diam <= r && feasible(space, close, r, budget, assign, next + 1) {
                return true;
            }
        }
        assign[next] = usize::MAX;
        false
    }

    for budget in 1..=n {
        let mut assign = vec![usize::MAX; n];
        if feasible(space, &close, r, budget, &mut assign, 0) {
            return Ok(budget - 1);
        }
    }
    unreachable!("singleton colors always feasible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{generate, GeneratorSpec};
    use crate::rational::rint;

    fn line_pts(n: i64) -> Space {
        // ids 0..n in order
        generate(&GeneratorSpec::Grid {
            dim: 1,
            radius: (n - 1) / 2,
        })
        .unwrap()
    }

    fn int_line(lo: i64, hi: i64) -> Space {
        let coords: Vec<i64> = (lo..=hi).collect();
        let table: Vec<Vec<crate::rational::Rat>> = coords
            .iter()
            .map(|&a| coords.iter().map(|&b| rint((a - b).abs())).collect())
            .collect();
        crate::metric::validate_metric(&table, None, &format!("{lo}..{hi}"), None).unwrap()
    }

    #[test]
    fn twelve_point_line_at_d2_r2() {
        let sp = int_line(0, 11);
        let res = color_cover_at_scale(&sp, rint(2), rint(2), Blocker::Chain).unwrap();
        let pts: Vec<Vec<usize>> = res.witness.blocks.iter().map(|b| b.points.clone()).collect();
        assert_eq!(
            pts,
            vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8], vec![9, 10, 11]]
        );
        assert_eq!(res.colors_used, 2);
        assert_eq!(res.dim_upper(), 1);
        assert!(res.exact);
    }

    #[test]
    fn whole_space_block_when_r_exceeds_diameter() {
        let sp = line_pts(7);
        let res = color_cover_at_scale(&sp, rint(2), rint(100), Blocker::Chain).unwrap();
        assert_eq!(res.witness.blocks.len(), 1);
        assert_eq!(res.colors_used, 1);
        assert_eq!(res.dim_upper(), 0);
    }

    #[test]
    fn separated_space_gets_singleton_blocks_one_color() {
        // {0, 10, 20}: at d = 2 every pair is far, so blocks stay singleton
        let table: Vec<Vec<crate::rational::Rat>> = [0i64, 10, 20]
            .iter()
            .map(|&a| [0i64, 10, 20].iter().map(|&b| rint((a - b).abs())).collect())
            .collect();
        let sp = crate::metric::validate_metric(&table, None, "sep", None).unwrap();
        let res = color_cover_at_scale(&sp, rint(2), rint(0), Blocker::Chain).unwrap();
        assert_eq!(res.witness.blocks.len(), 3);
        assert_eq!(res.colors_used, 1);
    }

    #[test]
    fn oracle_on_six_point_line() {
        let sp = int_line(0, 5);
        assert_eq!(dim_at_scale_oracle(&sp, rint(2), rint(2)).unwrap(), 1);
        assert_eq!(dim_at_scale_oracle(&sp, rint(1), rint(100)).unwrap(), 0);
    }

    #[test]
    fn oracle_two_far_points_r_zero() {
        let table = vec![vec![rint(0), rint(5)], vec![rint(5), rint(0)]];
        let sp = crate::metric::validate_metric(&table, None, "2pt", None).unwrap();
        assert_eq!(dim_at_scale_oracle(&sp, rint(3), rint(0)).unwrap(), 0);
    }

    #[test]
    fn oracle_rejects_large_spaces() {
        let sp = line_pts(31);
        assert!(matches!(
            dim_at_scale_oracle(&sp, rint(1), rint(1)),
            Err(CoverError::TooLarge(..))
        ));
    }

    #[test]
    fn heuristic_never_beats_oracle() {
        for spec in [
            GeneratorSpec::Grid { dim: 1, radius: 5 },
            GeneratorSpec::Grid { dim: 2, radius: 1 },
            GeneratorSpec::M0Segment { max: 30 },
            GeneratorSpec::FreeGroup { generators: 2, radius: 1 },
        ] {
            let sp = generate(&spec).unwrap();
            if sp.len() > ORACLE_MAX_POINTS {
                continue;
            }
            for d in [1i64, 2] {
                for r in [1i64, 2, 4] {
                    let res =
                        color_cover_at_scale(&sp, rint(d), rint(r), Blocker::Chain).unwrap();
                    let oracle = dim_at_scale_oracle(&sp, rint(d), rint(r)).unwrap();
                    assert!(
                        res.colors_used >= oracle + 1,
                        "{spec:?} d={d} r={r}: {} < {}",
                        res.colors_used,
                        oracle + 1
                    );
                }
            }
        }
    }

    #[test]
    fn brick_blocker_three_colors_on_grid() {
        let sp = generate(&GeneratorSpec::Grid { dim: 2, radius: 8 }).unwrap();
        // side = r + 1 = 6, separation floor(6/2)+1 = 4 >= d = 3
        let res = color_cover_at_scale(&sp, rint(3), rint(5), Blocker::GridBrick).unwrap();
        assert!(res.colors_used <= 3, "bricks used {} colors", res.colors_used);
        res.witness.validate(&sp).unwrap();
    }

    #[test]
    fn union_of_far_parts_keeps_cover_valid() {
        // two 6-point line segments 100 apart; cover each part at scale
        // d = 4 <= gap, union the covers, revalidate at d = 4
        let coords: Vec<i64> = (0..6).chain(100..106).collect();
        let table: Vec<Vec<crate::rational::Rat>> = coords
            .iter()
            .map(|&a| coords.iter().map(|&b| rint((a - b).abs())).collect())
            .collect();
        let sp = crate::metric::validate_metric(&table, None, "two parts", None).unwrap();
        let res = color_cover_at_scale(&sp, rint(4), rint(5), Blocker::Chain).unwrap();
        res.witness.validate(&sp).unwrap();
        assert!(res.colors_used <= 2);
    }
}

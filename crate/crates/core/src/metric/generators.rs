//! Canonical example spaces: lattice balls, free-group balls, ternary-set
//! segments, grid skeletons `X(m,k)`, comb trees and spine adjunctions.

use super::space::{validate_metric, MetricRepr, Space};
use super::MetricError;
use crate::graph::WeightedGraph;
use crate::rational::{format_rat, Rat, RatStr};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Default cap on generated point counts.
pub const DEFAULT_POINT_CAP: usize = 100_000;

/// Cap for generators that materialize a dense all-pairs table.
const DENSE_CAP: usize = 4_000;

/// Parameter container for the canonical generators.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// Ball of radius `radius` in `Z^dim` under the sup-metric.
    Grid { dim: usize, radius: i64 },
    /// Ball of radius `radius` in the free group on `generators` letters,
    /// word metric.
    FreeGroup { generators: usize, radius: usize },
    /// `{ n in [0, max] : every base-3 digit of n is 0 or 1 }` on the line.
    M0Segment { max: i64 },
    /// `m * X(1, k)` in `[0, mk]^{dim+1}`: the grid skeleton where at most
    /// one coordinate is off the integer lattice, sampled at `step` (a unit
    /// fraction of the unscaled skeleton) and carrying its geodesic metric.
    XMk { m: i64, k: i64, dim: usize, step: RatStr },
    /// Spine `{0..radius}` with, at each integer `p >= 1`, `phi(p)` copies
    /// of every tooth `[0, m]`, `m <= min(p, max_tooth)`; geodesic metric.
    CombTree { radius: i64, phi: Vec<i64>, max_tooth: i64 },
    /// Spine `{0..spine}` with a copy of `X(m, k_m)` (integer points)
    /// attached by its origin at each listed integer `m`; geodesic metric.
    Adjunction { spine: i64, dim: usize, attachments: Vec<(i64, i64)> },
    /// Explicit distance table, validated on construction.
    ExplicitMatrix {
        ids: Vec<String>,
        rows: Vec<Vec<RatStr>>,
        basepoint: Option<String>,
        label: String,
    },
}

pub fn generate(spec: &GeneratorSpec) -> Result<Space, MetricError> {
    generate_capped(spec, DEFAULT_POINT_CAP)
}

pub fn generate_capped(spec: &GeneratorSpec, cap: usize) -> Result<Space, MetricError> {
    match spec {
        GeneratorSpec::Grid { dim, radius } => grid(*dim, *radius, cap),
        GeneratorSpec::FreeGroup { generators, radius } => free_group(*generators, *radius, cap),
        GeneratorSpec::M0Segment { max } => m0_segment(*max, cap),
        GeneratorSpec::XMk { m, k, dim, step } => x_mk(*m, *k, *dim, step.0, cap),
        GeneratorSpec::CombTree { radius, phi, max_tooth } => comb_tree(*radius, phi, *max_tooth, cap),
        GeneratorSpec::Adjunction { spine, dim, attachments } => adjunction(*spine, *dim, attachments, cap),
        GeneratorSpec::ExplicitMatrix { ids, rows, basepoint, label } => {
            let table: Vec<Vec<Rat>> = rows
                .iter()
                .map(|r| r.iter().map(|x| x.0).collect())
                .collect();
            validate_metric(&table, Some(ids.clone()), label, basepoint.as_deref())
        }
    }
}

fn check_cap(count: usize, cap: usize) -> Result<(), MetricError> {
    if count > cap {
        Err(MetricError::CapExceeded(count, cap))
    } else {
        Ok(())
    }
}

fn grid(dim: usize, radius: i64, cap: usize) -> Result<Space, MetricError> {
    if dim == 0 || radius < 0 {
        return Err(MetricError::BadParameters(
            "grid needs dim >= 1 and radius >= 0".into(),
        ));
    }
    let side = 2 * radius + 1;
    let count = (side as u128)
        .checked_pow(dim as u32)
        .map(|c| c.min(usize::MAX as u128) as usize)
        .unwrap_or(usize::MAX);
    check_cap(count, cap)?;
    let label = format!("grid(dim={dim}, radius={radius})");
    if dim == 1 {
        let coords: Vec<i64> = (-radius..=radius).collect();
        let ids: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
        let bp = radius as usize; // coordinate 0
        return Ok(Space::from_parts(label, ids, bp, 1, MetricRepr::Line { coords }));
    }
    let mut coords = Vec::with_capacity(count * dim);
    let mut ids = Vec::with_capacity(count);
    let mut cur = vec![-radius; dim];
    let mut basepoint = 0;
    for i in 0..count {
        coords.extend_from_slice(&cur);
        ids.push(format_tuple(cur.iter().map(|c| c.to_string())));
        if cur.iter().all(|&c| c == 0) {
            basepoint = i;
        }
        for d in (0..dim).rev() {
            if cur[d] < radius {
                cur[d] += 1;
                break;
            }
            cur[d] = -radius;
        }
    }
    Ok(Space::from_parts(
        label,
        ids,
        basepoint,
        1,
        MetricRepr::SupLattice { dim, coords },
    ))
}

fn format_tuple(parts: impl Iterator<Item = String>) -> String {
    let inner: Vec<String> = parts.collect();
    format!("({})", inner.join(","))
}

fn free_group(g: usize, radius: usize, cap: usize) -> Result<Space, MetricError> {
    if g == 0 || g > 26 {
        return Err(MetricError::BadParameters(
            "free group supports 1..=26 generators".into(),
        ));
    }
    // reduced words of length <= radius, BFS order
    let mut words: Vec<Vec<i16>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<i16>> = vec![Vec::new()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for l in 1..=(g as i16) {
                for s in [l, -l] {
                    if w.last().copied() == Some(-s) {
                        continue;
                    }
                    let mut nw = w.clone();
                    nw.push(s);
                    next.push(nw);
                }
            }
        }
        words.extend(next.iter().cloned());
        check_cap(words.len(), cap.min(DENSE_CAP))?;
        frontier = next;
    }
    let ids: Vec<String> = words
        .iter()
        .map(|w| {
            if w.is_empty() {
                "1".to_string()
            } else {
                w.iter()
                    .map(|&l| {
                        let c = (b'a' + (l.unsigned_abs() as u8 - 1)) as char;
                        if l > 0 {
                            c
                        } else {
                            c.to_ascii_uppercase()
                        }
                    })
                    .collect()
            }
        })
        .collect();
    Ok(Space::from_parts(
        format!("free_group(generators={g}, radius={radius})"),
        ids,
        0,
        1,
        MetricRepr::FreeWords { words },
    ))
}

/// True iff every base-3 digit of `x >= 0` is 0 or 1.
pub(crate) fn is_ternary_01(mut x: i64) -> bool {
    debug_assert!(x >= 0);
    while x > 0 {
        if x % 3 == 2 {
            return false;
        }
        x /= 3;
    }
    true
}

fn m0_segment(max: i64, cap: usize) -> Result<Space, MetricError> {
    if max < 0 {
        return Err(MetricError::BadParameters("m0_segment needs max >= 0".into()));
    }
    let coords: Vec<i64> = (0..=max).filter(|&n| is_ternary_01(n)).collect();
    check_cap(coords.len(), cap)?;
    let ids = coords.iter().map(|c| c.to_string()).collect();
    Ok(Space::from_parts(
        format!("m0_segment(max={max})"),
        ids,
        0,
        1,
        MetricRepr::Line { coords },
    ))
}

/// Shared skeleton enumerator: scaled integer coordinates (denominator
/// `denom`) of `m * X(1, k)` sampled every `m/denom`, plus the adjacency
/// step in scaled units.
fn skeleton_points(m: i64, k: i64, dim: usize, denom: i64) -> (Vec<Vec<i64>>, i64) {
    let ambient = dim + 1;
    let step_num = m; // value m/denom per sample step
    let mut pts: BTreeMap<Vec<i64>, ()> = BTreeMap::new();
    // integer-lattice points: all coordinates multiples of m
    let mut idx = vec![0i64; ambient];
    loop {
        let p: Vec<i64> = idx.iter().map(|&a| a * m * denom).collect();
        pts.insert(p, ());
        let mut d = ambient;
        loop {
            if d == 0 {
                break;
            }
            d -= 1;
            if idx[d] < k {
                idx[d] += 1;
                break;
            }
            idx[d] = 0;
        }
        if idx.iter().all(|&a| a == 0) {
            break;
        }
    }
    // one free axis off the lattice
    let mut base = vec![0i64; ambient - 1];
    loop {
        for axis in 0..ambient {
            for j in 1..(k * denom) {
                if j % denom == 0 {
                    continue;
                }
                let mut p = Vec::with_capacity(ambient);
                let mut bi = 0;
                for a in 0..ambient {
                    if a == axis {
                        p.push(j * step_num);
                    } else {
                        p.push(base[bi] * m * denom);
                        bi += 1;
                    }
                }
                pts.insert(p, ());
            }
        }
        let mut d = ambient - 1;
        loop {
            if d == 0 {
                break;
            }
            d -= 1;
            if base[d] < k {
                base[d] += 1;
                break;
            }
            base[d] = 0;
        }
        if base.iter().all(|&a| a == 0) {
            break;
        }
        if ambient == 1 {
            break;
        }
    }
    (pts.into_keys().collect(), step_num)
}

fn x_mk(m: i64, k: i64, dim: usize, step: Rat, cap: usize) -> Result<Space, MetricError> {
    if m < 1 || k < 1 || dim < 1 {
        return Err(MetricError::BadParameters("x_mk needs m, k, dim >= 1".into()));
    }
    if step.numer() != &1 || !step.denom().is_positive() {
        return Err(MetricError::BadParameters(format!(
            "step must be a unit fraction 1/s, got {}",
            format_rat(step)
        )));
    }
    let denom = *step.denom();
    let (pts, edge_num) = skeleton_points(m, k, dim, denom);
    check_cap(pts.len(), cap.min(DENSE_CAP))?;
    let label = format!(
        "x_mk(m={m}, k={k}, dim={dim}, step={})",
        format_rat(step)
    );
    geodesic_space(label, pts, edge_num, denom, |p| {
        format_tuple(p.iter().map(|&c| format_rat(Rat::new(c, denom))))
    })
}

/// All-pairs geodesic metric over lattice-step adjacency: two points are
/// adjacent iff they differ in exactly one scaled coordinate by `edge_num`.
fn geodesic_space<F>(
    label: String,
    pts: Vec<Vec<i64>>,
    edge_num: i64,
    denom: i64,
    id_of: F,
) -> Result<Space, MetricError>
where
    F: Fn(&[i64]) -> String,
{
    let n = pts.len();
    let index: BTreeMap<&[i64], usize> = pts.iter().map(|p| p.as_slice()).zip(0..).collect();
    let mut g = WeightedGraph::new(n);
    for (i, p) in pts.iter().enumerate() {
        for axis in 0..p.len() {
            let mut q = p.clone();
            q[axis] = p[axis] + edge_num;
            if let Some(&j) = index.get(q.as_slice()) {
                g.add_undirected(i, j, edge_num);
            }
        }
    }
    let nums = apsp(&g)?;
    let ids: Vec<String> = pts.iter().map(|p| id_of(p)).collect();
    let basepoint = 0; // BTreeMap order puts the all-zero point first
    Ok(Space::from_parts(
        label,
        ids,
        basepoint,
        denom,
        MetricRepr::Dense { nums },
    ))
}

fn apsp(g: &WeightedGraph) -> Result<Vec<i64>, MetricError> {
    let n = g.len();
    let mut nums = vec![0i64; n * n];
    for s in 0..n {
        let d = g.dijkstra(&[(s, 0)]);
        if d.iter().any(|&x| x == crate::graph::UNREACHED) {
            return Err(MetricError::BadParameters(
                "generated skeleton is not connected".into(),
            ));
        }
        nums[s * n..(s + 1) * n].copy_from_slice(&d);
    }
    Ok(nums)
}

fn comb_tree(radius: i64, phi: &[i64], max_tooth: i64, cap: usize) -> Result<Space, MetricError> {
    if radius < 0 || max_tooth < 0 {
        return Err(MetricError::BadParameters(
            "comb_tree needs radius >= 0 and max_tooth >= 0".into(),
        ));
    }
    let phi_at = |p: i64| -> i64 {
        let i = (p - 1) as usize;
        if i < phi.len() {
            phi[i].max(0)
        } else {
            *phi.last().unwrap_or(&0)
        }
    };
    let mut ids = vec![];
    let mut g = WeightedGraph::new(0);
    let mut spine_idx = vec![];
    for p in 0..=radius {
        spine_idx.push(ids.len());
        ids.push(format!("s{p}"));
    }
    let mut edges: Vec<(usize, usize)> = (0..radius as usize).map(|i| (i, i + 1)).collect();
    for p in 1..=radius {
        for m in 1..=p.min(max_tooth) {
            for c in 0..phi_at(p) {
                let mut prev = spine_idx[p as usize];
                for o in 1..=m {
                    let idx = ids.len();
                    ids.push(format!("t{p}.{m}.{c}.{o}"));
                    edges.push((prev, idx));
                    prev = idx;
                }
            }
        }
        check_cap(ids.len(), cap.min(DENSE_CAP))?;
    }
    g.adj = vec![Vec::new(); ids.len()];
    for (u, v) in edges {
        g.add_undirected(u, v, 1);
    }
    let nums = apsp(&g)?;
    Ok(Space::from_parts(
        format!("comb_tree(radius={radius}, max_tooth={max_tooth})"),
        ids,
        0,
        1,
        MetricRepr::Dense { nums },
    ))
}

fn adjunction(spine: i64, dim: usize, attachments: &[(i64, i64)], cap: usize) -> Result<Space, MetricError> {
    if spine < 0 || dim < 1 {
        return Err(MetricError::BadParameters(
            "adjunction needs spine >= 0 and dim >= 1".into(),
        ));
    }
    let mut ids: Vec<String> = (0..=spine).map(|p| format!("s{p}")).collect();
    let mut edges: Vec<(usize, usize, i64)> =
        (0..spine as usize).map(|i| (i, i + 1, 1)).collect();
    for &(at, k) in attachments {
        if at < 0 || at > spine || k < 1 {
            return Err(MetricError::BadParameters(format!(
                "attachment ({at}, {k}) outside the spine or with k < 1"
            )));
        }
        let m = at.max(1); // copy of X(m, k) scaled by its attach point
        // integer points of m * X(1, k): sample at 1/m, rescale to denom 1
        let (pts, _) = skeleton_points(m, k, dim, m);
        let pts: Vec<Vec<i64>> = pts
            .into_iter()
            .map(|p| p.into_iter().map(|c| c / m).collect())
            .collect();
        let edge_num = 1i64;
        let origin_pos = pts.iter().position(|p| p.iter().all(|&c| c == 0)).unwrap();
        let base = ids.len();
        let index: BTreeMap<&[i64], usize> = pts.iter().map(|p| p.as_slice()).zip(0..).collect();
        let mut local_to_global = vec![usize::MAX; pts.len()];
        for (li, p) in pts.iter().enumerate() {
            if li == origin_pos {
                local_to_global[li] = at as usize; // identified with the spine point
            } else {
                local_to_global[li] = base + if li > origin_pos { li - 1 } else { li };
                ids.push(format!(
                    "x{at}.{}",
                    format_tuple(p.iter().map(|c| c.to_string()))
                ));
            }
        }
        for (li, p) in pts.iter().enumerate() {
            for axis in 0..p.len() {
                let mut q = p.clone();
                q[axis] += edge_num;
                if let Some(&lj) = index.get(q.as_slice()) {
                    edges.push((local_to_global[li], local_to_global[lj], edge_num));
                }
            }
        }
        check_cap(ids.len(), cap.min(DENSE_CAP))?;
    }
    let mut g = WeightedGraph::new(ids.len());
    for (u, v, w) in edges {
        g.add_undirected(u, v, w);
    }
    let nums = apsp(&g)?;
    Ok(Space::from_parts(
        format!("adjunction(spine={spine}, dim={dim}, copies={})", attachments.len()),
        ids,
        0,
        1,
        MetricRepr::Dense { nums },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    #[test]
    fn grid_2_1_is_nine_points_diameter_two() {
        let sp = generate(&GeneratorSpec::Grid { dim: 2, radius: 1 }).unwrap();
        assert_eq!(sp.len(), 9);
        assert_eq!(sp.diameter(), rint(2));
        assert_eq!(sp.id(sp.basepoint()), "(0,0)");
        // sup-metric ball of radius 1 around the origin is everything
        assert_eq!(sp.ball(sp.basepoint(), rint(1)).unwrap().len(), 9);
    }

    #[test]
    fn m0_segment_13() {
        let sp = generate(&GeneratorSpec::M0Segment { max: 13 }).unwrap();
        let ids: Vec<&str> = sp.ids().iter().map(|s| s.as_str()).collect();
        assert_eq!(ids, ["0", "1", "3", "4", "9", "10", "12", "13"]);
    }

    /// Independent skeleton oracle: enumerate the full fine lattice of
    /// [0,k]^(dim+1) at the sample step and keep points with at most one
    /// off-lattice coordinate.
    fn skeleton_oracle(k: i64, s: i64, ambient: usize) -> Vec<Vec<i64>> {
        let side = k * s + 1;
        let mut out = Vec::new();
        let total = (side as u64).pow(ambient as u32);
        for code in 0..total {
            let mut c = code;
            let mut p = Vec::with_capacity(ambient);
            for _ in 0..ambient {
                p.push((c % side as u64) as i64);
                c /= side as u64;
            }
            let off = p.iter().filter(|&&x| x % s != 0).count();
            if off <= 1 {
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn x_mk_1_2_matches_direct_enumeration() {
        let sp = generate(&GeneratorSpec::XMk {
            m: 1,
            k: 2,
            dim: 1,
            step: rat(1, 2).into(),
        })
        .unwrap();
        let oracle = skeleton_oracle(2, 2, 2);
        assert_eq!(sp.len(), oracle.len());
        assert_eq!(sp.len(), 21);
        // geodesic sanity: opposite corners of [0,2]^2 along the skeleton
        let a = sp.index_of("(0,0)").unwrap();
        let b = sp.index_of("(2,2)").unwrap();
        assert_eq!(sp.dist(a, b), rint(4));
    }

    #[test]
    fn x_mk_scaled_integrality() {
        // every point of m * X(1,k) has at most one coordinate that is not
        // a multiple of m
        let m = 3;
        let sp = generate(&GeneratorSpec::XMk {
            m,
            k: 2,
            dim: 1,
            step: rat(1, 3).into(),
        })
        .unwrap();
        for id in sp.ids() {
            let inner = id.trim_start_matches('(').trim_end_matches(')');
            let coords: Vec<Rat> = inner
                .split(',')
                .map(|t| crate::rational::parse_rat(t).unwrap())
                .collect();
            let off = coords
                .iter()
                .filter(|c| {
                    let scaled = *c / rint(m);
                    scaled.denom() != &1
                })
                .count();
            assert!(off <= 1, "point {id} breaks scaled integrality");
        }
    }

    #[test]
    fn free_group_ball_counts() {
        let sp = generate(&GeneratorSpec::FreeGroup { generators: 2, radius: 1 }).unwrap();
        assert_eq!(sp.len(), 5);
        assert_eq!(sp.diameter(), rint(2));
        let sp = generate(&GeneratorSpec::FreeGroup { generators: 2, radius: 3 }).unwrap();
        // 1 + 4 + 12 + 36
        assert_eq!(sp.len(), 53);
        let a = sp.index_of("ab").unwrap();
        let b = sp.index_of("aB").unwrap();
        assert_eq!(sp.dist(a, b), rint(2));
        let c = sp.index_of("ba").unwrap();
        assert_eq!(sp.dist(a, c), rint(4));
    }

    #[test]
    fn comb_tree_distances() {
        let sp = generate(&GeneratorSpec::CombTree {
            radius: 4,
            phi: vec![1, 1, 2, 2],
            max_tooth: 2,
        })
        .unwrap();
        let s0 = sp.index_of("s0").unwrap();
        let tip = sp.index_of("t3.2.1.2").unwrap();
        assert_eq!(sp.dist(s0, tip), rint(5));
        sp.validate().unwrap();
    }

    #[test]
    fn adjunction_goes_through_spine() {
        let sp = generate(&GeneratorSpec::Adjunction {
            spine: 4,
            dim: 1,
            attachments: vec![(1, 1), (3, 1)],
        })
        .unwrap();
        sp.validate().unwrap();
        // corner of the copy at 1 to corner of the copy at 3: through the spine
        let a = sp.index_of("x1.(1,1)").unwrap();
        let b = sp.index_of("x3.(3,3)").unwrap();
        // 2 (inside copy 1) + 2 (spine) + 6 (inside copy 3)
        assert_eq!(sp.dist(a, b), rint(10));
    }

    #[test]
    fn cap_is_enforced() {
        let err = generate_capped(&GeneratorSpec::Grid { dim: 2, radius: 30 }, 100).unwrap_err();
        assert!(matches!(err, MetricError::CapExceeded(3721, 100)));
    }

    #[test]
    fn generated_spaces_validate() {
        for spec in [
            GeneratorSpec::Grid { dim: 2, radius: 2 },
            GeneratorSpec::Grid { dim: 1, radius: 10 },
            GeneratorSpec::FreeGroup { generators: 2, radius: 2 },
            GeneratorSpec::M0Segment { max: 40 },
            GeneratorSpec::XMk { m: 1, k: 2, dim: 1, step: rat(1, 2).into() },
        ] {
            let sp = generate(&spec).unwrap();
            sp.validate().unwrap_or_else(|e| panic!("{spec:?}: {e}"));
        }
    }
}

//! Finite metric spaces with exact rational distances.
//!
//! A space stores all distances as integer numerators over one shared
//! denominator, so every comparison and every shortest-path sum is exact.
//! Structured point sets (lattices, lines, reduced words) keep a compact
//! representation instead of an `n^2` table; the distance oracle is the
//! same either way.

use crate::graph::{dense_dijkstra, UNREACHED};
use crate::rational::{format_rat, lcm, Rat};
use num_traits::Signed;
use rayon::prelude::*;
use std::collections::BTreeMap;

use super::MetricError;

/// How distances of a [`Space`] are realized.
#[derive(Clone, Debug)]
pub enum MetricRepr {
    /// Full `n*n` table of scaled numerators.
    Dense { nums: Vec<i64> },
    /// Points on a line; distance is the absolute coordinate difference.
    Line { coords: Vec<i64> },
    /// Integer lattice points under the sup-metric, `dim` coordinates per
    /// point, flattened row-major.
    SupLattice { dim: usize, coords: Vec<i64> },
    /// Reduced words in a free group; letters are `1..=g` and their
    /// negatives. Word metric: `|u| + |v| - 2 * common_prefix`.
    FreeWords { words: Vec<Vec<i16>> },
}

/// A finite metric space: ordered point ids, an exact distance oracle and
/// a basepoint.
#[derive(Clone, Debug)]
pub struct Space {
    label: String,
    ids: Vec<String>,
    index: BTreeMap<String, usize>,
    basepoint: usize,
    /// Shared denominator of all distances.
    denom: i64,
    repr: MetricRepr,
}

impl Space {
    pub(crate) fn from_parts(
        label: String,
        ids: Vec<String>,
        basepoint: usize,
        denom: i64,
        repr: MetricRepr,
    ) -> Self {
        assert!(denom >= 1);
        assert!(basepoint < ids.len());
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Space {
            label,
            ids,
            index,
            basepoint,
            denom,
            repr,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn set_basepoint(&mut self, i: usize) {
        assert!(i < self.len());
        self.basepoint = i;
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn repr(&self) -> &MetricRepr {
        &self.repr
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Scaled distance numerator: the exact distance is `dist_num / denom`.
    #[inline]
    pub fn dist_num(&self, i: usize, j: usize) -> i64 {
        match &self.repr {
            MetricRepr::Dense { nums } => nums[i * self.ids.len() + j],
            MetricRepr::Line { coords } => (coords[i] - coords[j]).abs(),
            MetricRepr::SupLattice { dim, coords } => {
                let a = &coords[i * dim..(i + 1) * dim];
                let b = &coords[j * dim..(j + 1) * dim];
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y).abs())
                    .max()
                    .unwrap_or(0)
            }
            MetricRepr::FreeWords { words } => {
                let (u, v) = (&words[i], &words[j]);
                let common = u.iter().zip(v.iter()).take_while(|(a, b)| a == b).count();
                ((u.len() + v.len() - 2 * common) as i64) * self.denom
            }
        }
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> Rat {
        Rat::new(self.dist_num(i, j), self.denom)
    }

    /// Scaled numerator of `x` (i.e. `x * denom`) if exact, else None.
    pub fn scale(&self, x: Rat) -> Option<i64> {
        let scaled = x * Rat::from_integer(self.denom);
        if scaled.denom() == &1 {
            Some(*scaled.numer())
        } else {
            None
        }
    }

    /// Scaled numerator of `x`, rounded down to the space's grid. Distances
    /// compare against thresholds exactly through this.
    pub fn scale_floor(&self, x: Rat) -> i64 {
        (x * Rat::from_integer(self.denom)).floor().to_integer()
    }

    /// Max distance over all pairs (0 for a single point).
    pub fn diameter_num(&self) -> i64 {
        match &self.repr {
            MetricRepr::Line { coords } => {
                let mn = coords.iter().min().copied().unwrap_or(0);
                let mx = coords.iter().max().copied().unwrap_or(0);
                mx - mn
            }
            _ => {
                let n = self.len();
                (0..n)
                    .into_par_iter()
                    .map(|i| (i + 1..n).map(|j| self.dist_num(i, j)).max().unwrap_or(0))
                    .max()
                    .unwrap_or(0)
            }
        }
    }

    pub fn diameter(&self) -> Rat {
        Rat::new(self.diameter_num(), self.denom)
    }

    /// Smallest positive distance between distinct points (the resolution
    /// step of a discretized space); None for a single point.
    pub fn min_positive_dist(&self) -> Option<Rat> {
        let n = self.len();
        let m = (0..n)
            .into_par_iter()
            .map(|i| {
                (i + 1..n)
                    .map(|j| self.dist_num(i, j))
                    .filter(|&d| d > 0)
                    .min()
                    .unwrap_or(i64::MAX)
            })
            .min()
            .unwrap_or(i64::MAX);
        if m == i64::MAX {
            None
        } else {
            Some(Rat::new(m, self.denom))
        }
    }

    /// Closed ball `{y : d(center, y) <= r}` as sorted indices.
    pub fn ball(&self, center: usize, r: Rat) -> Result<Vec<usize>, MetricError> {
        if center >= self.len() {
            return Err(MetricError::UnknownPoint(format!("#{center}")));
        }
        if r.is_negative() {
            return Err(MetricError::BadParameters("ball radius must be >= 0".into()));
        }
        Ok((0..self.len())
            .filter(|&y| self.dist(center, y) <= r)
            .collect())
    }

    /// Closed ball by point id.
    pub fn ball_by_id(&self, center: &str, r: Rat) -> Result<Vec<usize>, MetricError> {
        let c = self
            .index_of(center)
            .ok_or_else(|| MetricError::UnknownPoint(center.to_string()))?;
        self.ball(c, r)
    }

    /// Exact distance from a point to a set (None if the set is empty).
    pub fn dist_to_set_num(&self, x: usize, set: &[usize]) -> Option<i64> {
        set.iter().map(|&y| self.dist_num(x, y)).min()
    }

    /// Exact min distance between two sets (None if either is empty).
    pub fn set_dist_num(&self, a: &[usize], b: &[usize]) -> Option<i64> {
        if a.is_empty() || b.is_empty() {
            return None;
        }
        // Lines admit an O(|a| + |b|) merge over sorted coordinates.
        if let MetricRepr::Line { coords } = &self.repr {
            let mut ca: Vec<i64> = a.iter().map(|&i| coords[i]).collect();
            let mut cb: Vec<i64> = b.iter().map(|&i| coords[i]).collect();
            if !ca.is_sorted() {
                ca.sort_unstable();
            }
            if !cb.is_sorted() {
                cb.sort_unstable();
            }
            let mut best = i64::MAX;
            let (mut i, mut j) = (0, 0);
            while i < ca.len() && j < cb.len() {
                best = best.min((ca[i] - cb[j]).abs());
                if ca[i] < cb[j] {
                    i += 1;
                } else {
                    j += 1;
                }
            }
            return Some(best);
        }
        a.iter()
            .map(|&x| b.iter().map(|&y| self.dist_num(x, y)).min().unwrap())
            .min()
    }

    /// Closed `e`-neighborhood of a set: all points at distance `<= e`
    /// from it, as sorted indices.
    pub fn neighborhood_of_set(&self, set: &[usize], e: Rat) -> Vec<usize> {
        let e_scaled = e * Rat::from_integer(self.denom);
        if let MetricRepr::Line { coords } = &self.repr {
            // generator-built lines have coordinates monotone in index
            if coords.is_sorted() && set.is_sorted() {
                let lo = Rat::from_integer(coords[set[0]]) - e_scaled;
                let hi = Rat::from_integer(coords[*set.last().unwrap()]) + e_scaled;
                let a = coords.partition_point(|&c| Rat::from_integer(c) < lo);
                let b = coords.partition_point(|&c| Rat::from_integer(c) <= hi);
                return (a..b).collect();
            }
        }
        (0..self.len())
            .filter(|&x| {
                let d = self.dist_to_set_num(x, set).unwrap();
                Rat::from_integer(d) <= e_scaled
            })
            .collect()
    }

    /// Diameter of a subset.
    pub fn subset_diameter_num(&self, set: &[usize]) -> i64 {
        if let MetricRepr::Line { coords } = &self.repr {
            let mn = set.iter().map(|&i| coords[i]).min().unwrap_or(0);
            let mx = set.iter().map(|&i| coords[i]).max().unwrap_or(0);
            return mx - mn;
        }
        let mut d = 0;
        for (a, &x) in set.iter().enumerate() {
            for &y in &set[a + 1..] {
                d = d.max(self.dist_num(x, y));
            }
        }
        d
    }

    /// Depth of every point of `block` inside it: `d(x, X \ block)`, or
    /// None (infinite) when the block is the whole space.
    pub fn depths_in_block(&self, block: &[usize]) -> Option<Vec<i64>> {
        if block.len() == self.len() {
            return None;
        }
        let mut inside = vec![false; self.len()];
        for &b in block {
            inside[b] = true;
        }
        let outside: Vec<usize> = (0..self.len()).filter(|&i| !inside[i]).collect();
        if let MetricRepr::Line { coords } = &self.repr {
            let mut co: Vec<i64> = outside.iter().map(|&i| coords[i]).collect();
            co.sort_unstable();
            return Some(
                block
                    .iter()
                    .map(|&x| {
                        let c = coords[x];
                        let p = co.partition_point(|&v| v < c);
                        let mut best = i64::MAX;
                        if p < co.len() {
                            best = best.min(co[p] - c);
                        }
                        if p > 0 {
                            best = best.min(c - co[p - 1]);
                        }
                        best
                    })
                    .collect(),
            );
        }
        Some(
            block
                .iter()
                .map(|&x| self.dist_to_set_num(x, &outside).unwrap())
                .collect(),
        )
    }

    /// Full distance table as rationals (small spaces / file export).
    pub fn to_table(&self) -> Vec<Vec<Rat>> {
        let n = self.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.dist(i, j)).collect())
            .collect()
    }

    /// Runs the exact three-axiom validation against this space's own
    /// distance oracle.
    pub fn validate(&self) -> Result<(), MetricError> {
        let n = self.len();
        let mut nums = vec![0i64; n * n];
        nums.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = self.dist_num(i, j);
            }
        });
        validate_scaled(n, &nums, &self.ids)
    }
}

/// Validates a square rational table and wraps it as a dense space.
///
/// Checks, exactly and in this order per the first offending entry:
/// nonnegativity, zero diagonal, symmetry, then every triangle.
pub fn validate_metric(
    table: &[Vec<Rat>],
    ids: Option<Vec<String>>,
    label: &str,
    basepoint: Option<&str>,
) -> Result<Space, MetricError> {
    let n = table.len();
    if n == 0 {
        return Err(MetricError::BadParameters("empty table".into()));
    }
    if table.iter().any(|row| row.len() != n) {
        return Err(MetricError::BadParameters("table is not square".into()));
    }
    let ids = match ids {
        Some(v) => {
            if v.len() != n {
                return Err(MetricError::BadParameters(format!(
                    "{} ids for {} rows",
                    v.len(),
                    n
                )));
            }
            v
        }
        None => (0..n).map(|i| i.to_string()).collect(),
    };
    {
        let mut seen = BTreeMap::new();
        for (i, id) in ids.iter().enumerate() {
            if let Some(prev) = seen.insert(id.clone(), i) {
                return Err(MetricError::BadParameters(format!(
                    "duplicate point id {id:?} at rows {prev} and {i}"
                )));
            }
        }
    }

    let mut denom = 1i64;
    for row in table {
        for x in row {
            denom = lcm(denom, *x.denom());
        }
    }
    let mut nums = vec![0i64; n * n];
    for (i, row) in table.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let scaled = x * Rat::from_integer(denom);
            debug_assert!(scaled.denom() == &1);
            let v = *scaled.numer();
            if v > i64::MAX / 4 {
                return Err(MetricError::BadParameters(format!(
                    "distance {} too large for exact arithmetic",
                    format_rat(*x)
                )));
            }
            nums[i * n + j] = v;
        }
    }
    validate_scaled(n, &nums, &ids)?;

    let bp = match basepoint {
        None => 0,
        Some(b) => ids
            .iter()
            .position(|x| x == b)
            .ok_or_else(|| MetricError::UnknownPoint(b.to_string()))?,
    };
    Ok(Space::from_parts(
        label.to_string(),
        ids,
        bp,
        denom,
        MetricRepr::Dense { nums },
    ))
}

/// Axiom check over scaled numerators. The triangle scan is the hot path:
/// branchless inner loop over contiguous rows, parallel over the midpoint.
fn validate_scaled(n: usize, nums: &[i64], ids: &[String]) -> Result<(), MetricError> {
    for i in 0..n {
        for j in 0..n {
            if nums[i * n + j] < 0 {
                return Err(MetricError::NegativeDistance(ids[i].clone(), ids[j].clone()));
            }
        }
    }
    for (i, id) in ids.iter().enumerate() {
        if nums[i * n + i] != 0 {
            return Err(MetricError::NonzeroSelfDistance(id.clone()));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if nums[i * n + j] != nums[j * n + i] {
                return Err(MetricError::AsymmetryError(ids[i].clone(), ids[j].clone()));
            }
        }
    }

    // d(x,z) <= d(x,y) + d(y,z); by symmetry x < z suffices, all y.
    let viol = (0..n)
        .into_par_iter()
        .filter_map(|y| {
            let row_y = &nums[y * n..(y + 1) * n];
            let mut first: Option<(usize, usize, usize)> = None;
            for x in 0..n {
                let dxy = row_y[x];
                let row_x = &nums[x * n..(x + 1) * n];
                let lo = x + 1;
                let mut bad = 0u64;
                for (dxz, dyz) in row_x[lo..].iter().zip(&row_y[lo..]) {
                    bad += (*dxz > dxy + *dyz) as u64;
                }
                if bad > 0 {
                    let z = (lo..n).find(|&z| row_x[z] > dxy + row_y[z]).unwrap();
                    if first.map_or(true, |f| (x, y, z) < f) {
                        first = Some((x, y, z));
                    }
                }
            }
            first
        })
        .min();
    if let Some((x, y, z)) = viol {
        return Err(MetricError::TriangleViolation(
            ids[x].clone(),
            ids[y].clone(),
            ids[z].clone(),
        ));
    }
    Ok(())
}

/// A decomposition of a space: disjoint blocks, singletons implicit.
#[derive(Clone, Debug, Default)]
pub struct Decomposition {
    pub blocks: Vec<Vec<usize>>,
}

impl Decomposition {
    pub fn new(blocks: Vec<Vec<usize>>) -> Self {
        Decomposition { blocks }
    }

    pub fn validate(&self, space: &Space) -> Result<(), MetricError> {
        let mut seen = vec![false; space.len()];
        for block in &self.blocks {
            for &p in block {
                if p >= space.len() {
                    return Err(MetricError::UnknownPoint(format!("#{p}")));
                }
                if seen[p] {
                    return Err(MetricError::BadParameters(format!(
                        "point {} in two decomposition blocks",
                        space.id(p)
                    )));
                }
                seen[p] = true;
            }
        }
        Ok(())
    }
}

/// Quotient pseudometric table of a decomposition: exact shortest paths on
/// the complete graph augmented with zero-weight edges inside each block.
#[derive(Clone, Debug)]
pub struct Pseudometric {
    pub n: usize,
    pub denom: i64,
    pub nums: Vec<i64>,
}

impl Pseudometric {
    #[inline]
    pub fn dist_num(&self, i: usize, j: usize) -> i64 {
        self.nums[i * self.n + j]
    }

    pub fn dist(&self, i: usize, j: usize) -> Rat {
        Rat::new(self.dist_num(i, j), self.denom)
    }
}

pub fn quotient_pseudometric(space: &Space, dec: &Decomposition) -> Result<Pseudometric, MetricError> {
    dec.validate(space)?;
    let n = space.len();
    let groups: Vec<Vec<usize>> = dec.blocks.iter().filter(|b| b.len() > 1).cloned().collect();
    let mut nums = vec![0i64; n * n];
    let rows: Vec<Vec<i64>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let d = dense_dijkstra(n, &[(s, 0)], &groups, |a, b| space.dist_num(a, b));
            debug_assert!(d.iter().all(|&x| x != UNREACHED));
            d
        })
        .collect();
    for (s, row) in rows.into_iter().enumerate() {
        nums[s * n..(s + 1) * n].copy_from_slice(&row);
    }
    Ok(Pseudometric {
        n,
        denom: space.denom(),
        nums,
    })
}

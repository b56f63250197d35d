//! Cover ladders: a sequence of colored covers with per-level parameters
//! `(d_k, m_k)` satisfying, exactly,
//!
//! 1. `L(U_k) > d_k` and every block has an inner point at depth `d_k`;
//! 2. `d_{k+1} = 2^{2k+2} * m_k` with `m_k` the mesh of level `k`;
//! 3. for each color some level's block absorbs every basepoint ball up
//!    to the truncation radius;
//! 4. same-color blocks at levels `k < l` are either nested or at least
//!    `d_k / 2` apart;
//!
//! plus the parent table `psi` (minimal same-color superset).
//!
//! The builder works with much stronger internal scales (`2^{4k+6}`
//! growth), enlarges a partition to force a Lebesgue margin, carves a
//! 4-neighborhood of stray lower blocks, then runs an absorption pass
//! that swallows lower blocks coming within half their separation. The
//! published parameters are renormalized to the stated recurrence and
//! re-verified from scratch by [`verify_cover_sequence`].

use super::scale::chain_blocks;
use super::{ColoredCover, CoverBlock, CoverError};
use crate::metric::Space;
use crate::rational::{pow2, rint, Extended, Rat};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug)]
pub struct LadderOptions {
    /// Published level-0 disjointness; at least 4 so the quotient
    /// separation bounds downstream come out at full strength.
    pub d0: Rat,
}

impl Default for LadderOptions {
    fn default() -> Self {
        LadderOptions { d0: rint(4) }
    }
}

/// A ladder of colored covers with parameters and parent table.
#[derive(Clone, Debug)]
pub struct CoverSequence {
    pub levels: Vec<ColoredCover>,
    /// Published disjointness `d_k` per level.
    pub d: Vec<Rat>,
    /// Measured mesh `m_k` per level.
    pub m: Vec<Rat>,
    /// `(level, block) -> (level, block)`: minimal same-color superset.
    pub psi: BTreeMap<(usize, usize), (usize, usize)>,
    /// Number of colors `n + 1`.
    pub colors: usize,
}

impl CoverSequence {
    pub fn block(&self, key: (usize, usize)) -> &CoverBlock {
        &self.levels[key.0].blocks[key.1]
    }

    /// Children of a block under `psi`, in (level, index) order.
    pub fn children(&self, parent: (usize, usize)) -> Vec<(usize, usize)> {
        self.psi
            .iter()
            .filter(|&(_, &p)| p == parent)
            .map(|(&c, _)| c)
            .collect()
    }

    /// Blocks of one color across all levels, in (level, index) order.
    pub fn color_blocks(&self, color: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (k, level) in self.levels.iter().enumerate() {
            for (i, b) in level.blocks.iter().enumerate() {
                if b.color == color {
                    out.push((k, i));
                }
            }
        }
        out
    }
}

pub fn build_cover_sequence(
    space: &Space,
    n: usize,
    levels: usize,
    opts: &LadderOptions,
) -> Result<CoverSequence, CoverError> {
    let colors = n + 1;
    if levels < colors {
        return Err(CoverError::BasepointConditionUnsatisfiable(
            0,
            format!("{levels} levels cannot absorb the basepoint ball in all {colors} colors"),
        ));
    }
    if opts.d0 < rint(4) {
        return Err(CoverError::BadParameters("d0 must be at least 4".into()));
    }
    let npts = space.len();
    let all_points: Vec<usize> = (0..npts).collect();
    let step = space.min_positive_dist().unwrap_or_else(|| rint(1));

    let mut out: Vec<Vec<CoverBlock>> = Vec::new();
    let mut meshes: Vec<Rat> = Vec::new();
    let mut seed_disj: Vec<Rat> = Vec::new();
    let mut done_colors: BTreeSet<usize> = BTreeSet::new();
    let mut tail_mode = false;
    let mut d_hat = opts.d0;

    let mut k = 0usize;
    while k < levels {
        let missing = colors - done_colors.len();
        if missing == 0 {
            break;
        }
        let remaining = levels - k;
        let force_tail = tail_mode || remaining <= missing;

        let partition = if force_tail {
            vec![all_points.clone()]
        } else {
            let p_scale = d_hat * rint(12);
            chain_blocks(space, p_scale, p_scale)
        };

        if partition.len() == 1 {
            // whole-space level: pick the rotation color, or the first
            // missing one if the rotation color already has its block
            tail_mode = true;
            let rot = k % colors;
            let color = if done_colors.contains(&rot) {
                *((0..colors).collect::<BTreeSet<_>>())
                    .difference(&done_colors)
                    .next()
                    .expect("missing > 0")
            } else {
                rot
            };
            out.push(vec![CoverBlock {
                color,
                points: all_points.clone(),
            }]);
            meshes.push(space.diameter());
            seed_disj.push(rint(0));
            done_colors.insert(color);
            k += 1;
            continue;
        }

        // --- structural level at internal scale d_hat ---
        let target_disj = d_hat * rint(2);
        let enlarge = d_hat * rint(4) + step;
        let enlarged: Vec<Vec<usize>> = partition
            .iter()
            .map(|b| neighborhood(space, b, enlarge))
            .collect();

        // coloring of the conflict graph at the seed disjointness
        let adj = block_conflicts(space, &enlarged, target_disj);
        let (used, mut coloring) = color_blocks_bounded(&adj, colors)
            .ok_or_else(|| {
                let (need, _) = super::scale::chromatic_hint(&adj);
                CoverError::ColorBudgetExceeded(k, need, colors)
            })?;
        debug_assert!(used <= colors);

        // rotate the palette so the basepoint's deepest block gets color
        // k mod (n+1)
        let x0 = space.basepoint();
        let deep = (0..enlarged.len())
            .filter(|&i| enlarged[i].binary_search(&x0).is_ok())
            .max_by_key(|&i| depth_of(space, &enlarged[i], x0));
        let deep = deep.ok_or_else(|| {
            CoverError::BasepointConditionUnsatisfiable(k, "basepoint uncovered".into())
        })?;
        let want = k % colors;
        let have = coloring[deep];
        if have != want {
            for c in coloring.iter_mut() {
                if *c == have {
                    *c = want;
                } else if *c == want {
                    *c = have;
                }
            }
        }

        // carve: drop the closed 4-neighborhood of lower same-color
        // blocks that are not contained in the block
        let mut carved: Vec<Vec<usize>> = Vec::with_capacity(enlarged.len());
        for (bi, block) in enlarged.iter().enumerate() {
            let color = coloring[bi];
            let mut keep: Vec<bool> = vec![true; block.len()];
            for lower in out.iter() {
                for w in lower.iter().filter(|w| w.color == color) {
                    if is_subset(&w.points, block) {
                        continue;
                    }
                    for (pos, &x) in block.iter().enumerate() {
                        if keep[pos] {
                            let d = space.dist_to_set_num(x, &w.points).unwrap();
                            if Rat::new(d, space.denom()) <= rint(4) {
                                keep[pos] = false;
                            }
                        }
                    }
                }
            }
            let kept: Vec<usize> = block
                .iter()
                .zip(&keep)
                .filter(|&(_, &k)| k)
                .map(|(&p, _)| p)
                .collect();
            if kept.is_empty() {
                return Err(CoverError::BasepointConditionUnsatisfiable(
                    k,
                    format!("block {bi} carved empty at level {k}"),
                ));
            }
            carved.push(kept);
        }

        // absorption: swallow lower same-color blocks that come within
        // half their (shrunken) separation
        let mut absorbed = carved;
        for (bi, block) in absorbed.iter_mut().enumerate() {
            let color = coloring[bi];
            for (q, lower) in out.iter().enumerate() {
                let d_tilde = if q == 0 {
                    seed_disj[0]
                } else {
                    seed_disj[q] - pow2(q as i32 + 2) * meshes[q - 1]
                };
                if d_tilde <= rint(0) {
                    continue;
                }
                let threshold = d_tilde / rint(2);
                // single pass per level, as in the inductive definition
                let mut grow: BTreeSet<usize> = BTreeSet::new();
                for w in lower.iter().filter(|w| w.color == color) {
                    let d = space.set_dist_num(block, &w.points).unwrap();
                    if Rat::new(d, space.denom()) < threshold {
                        grow.extend(w.points.iter().copied());
                    }
                }
                if !grow.is_empty() {
                    grow.extend(block.iter().copied());
                    *block = grow.into_iter().collect();
                }
            }
        }

        // coverage must survive the carve (deep cores stay)
        {
            let mut covered = vec![false; npts];
            for b in &absorbed {
                for &p in b {
                    covered[p] = true;
                }
            }
            if let Some(p) = covered.iter().position(|&c| !c) {
                return Err(CoverError::BasepointConditionUnsatisfiable(
                    k,
                    format!("carve uncovered point {} at level {k}", space.id(p)),
                ));
            }
        }

        let blocks: Vec<CoverBlock> = absorbed
            .into_iter()
            .zip(&coloring)
            .map(|(points, &color)| CoverBlock { color, points })
            .collect();
        let mesh_k = blocks
            .iter()
            .map(|b| Rat::new(space.subset_diameter_num(&b.points), space.denom()))
            .max()
            .unwrap();
        // whole-space blocks satisfy the basepoint condition for their color
        for b in &blocks {
            if b.points.len() == npts {
                done_colors.insert(b.color);
            }
        }
        out.push(blocks);
        meshes.push(mesh_k);
        seed_disj.push(target_disj);
        d_hat = pow2(4 * k as i32 + 6) * mesh_k;
        k += 1;
    }

    if done_colors.len() < colors {
        return Err(CoverError::BasepointConditionUnsatisfiable(
            out.len().saturating_sub(1),
            "ran out of levels before every color absorbed the basepoint".into(),
        ));
    }

    // published parameters: d_0, then the stated recurrence on measured
    // meshes
    let mut d = vec![opts.d0];
    for k in 0..out.len().saturating_sub(1) {
        d.push(pow2(2 * k as i32 + 2) * meshes[k]);
    }
    let levels_out: Vec<ColoredCover> = out
        .into_iter()
        .enumerate()
        .map(|(k, blocks)| ColoredCover {
            blocks,
            d: d[k],
            r: meshes[k],
        })
        .collect();

    let psi = parent_table(&levels_out);
    Ok(CoverSequence {
        levels: levels_out,
        d,
        m: meshes,
        psi,
        colors,
    })
}

/// Closed `e`-neighborhood of a block, as sorted indices.
fn neighborhood(space: &Space, block: &[usize], e: Rat) -> Vec<usize> {
    let denom = rint(space.denom());
    (0..space.len())
        .filter(|&x| {
            let d = space.dist_to_set_num(x, block).unwrap();
            Rat::new(d, 1) <= e * denom
        })
        .collect()
}

fn depth_of(space: &Space, block: &[usize], x: usize) -> Rat {
    match space.depths_in_block(block) {
        None => rint(i64::MAX / 2),
        Some(depths) => {
            let pos = block.binary_search(&x).expect("x in block");
            Rat::new(depths[pos], space.denom())
        }
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    // both sorted
    let mut it = big.iter();
    'outer: for s in small {
        for b in it.by_ref() {
            if b == s {
                continue 'outer;
            }
            if b > s {
                return false;
            }
        }
        return false;
    }
    true
}

fn block_conflicts(space: &Space, blocks: &[Vec<usize>], d: Rat) -> Vec<Vec<usize>> {
    let m = blocks.len();
    let mut adj = vec![Vec::new(); m];
    for i in 0..m {
        for j in i + 1..m {
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

/// Colors the conflict graph with at most `budget` colors, exactly for
/// small graphs and greedily beyond; None when the budget fails.
fn color_blocks_bounded(adj: &[Vec<usize>], budget: usize) -> Option<(usize, Vec<usize>)> {
    let (used, coloring) = super::scale::chromatic_hint(adj);
    if used <= budget {
        Some((used, coloring))
    } else {
        None
    }
}

/// `psi`: for every block, the minimal same-color superset at a higher
/// level (ties: fewest points, then lowest level, then lowest index).
fn parent_table(levels: &[ColoredCover]) -> BTreeMap<(usize, usize), (usize, usize)> {
    let mut psi = BTreeMap::new();
    for (k, level) in levels.iter().enumerate() {
        for (i, b) in level.blocks.iter().enumerate() {
            let mut best: Option<(usize, usize, usize)> = None; // (size, level, idx)
            for (l, upper) in levels.iter().enumerate().skip(k + 1) {
                for (j, v) in upper.blocks.iter().enumerate() {
                    if v.color != b.color || !is_subset(&b.points, &v.points) {
                        continue;
                    }
                    let cand = (v.points.len(), l, j);
                    if best.map_or(true, |cur| cand < cur) {
                        best = Some(cand);
                    }
                }
            }
            if let Some((_, l, j)) = best {
                psi.insert((k, i), (l, j));
            }
        }
    }
    psi
}

/// One verified condition: pass flag plus the first violation found.
#[derive(Clone, Debug)]
pub struct ConditionCheck {
    pub pass: bool,
    pub detail: String,
}

impl ConditionCheck {
    fn ok(what: &str) -> Self {
        ConditionCheck {
            pass: true,
            detail: what.to_string(),
        }
    }

    fn fail(what: String) -> Self {
        ConditionCheck {
            pass: false,
            detail: what,
        }
    }
}

/// Independent re-check of a ladder: every quantity is recomputed from the
/// block data, nothing is trusted from the builder.
#[derive(Clone, Debug)]
pub struct LadderReport {
    pub levels: usize,
    pub cover_valid: ConditionCheck,
    pub condition1: ConditionCheck,
    pub condition2: ConditionCheck,
    pub condition3: ConditionCheck,
    pub condition4: ConditionCheck,
    pub psi_valid: ConditionCheck,
}

impl LadderReport {
    pub fn all_pass(&self) -> bool {
        self.cover_valid.pass
            && self.condition1.pass
            && self.condition2.pass
            && self.condition3.pass
            && self.condition4.pass
            && self.psi_valid.pass
    }

    pub fn lines(&self) -> Vec<(String, bool, String)> {
        let mk = |name: &str, c: &ConditionCheck| (name.to_string(), c.pass, c.detail.clone());
        vec![
            mk("cover-valid", &self.cover_valid),
            mk("condition-1", &self.condition1),
            mk("condition-2", &self.condition2),
            mk("condition-3", &self.condition3),
            mk("condition-4", &self.condition4),
            mk("psi", &self.psi_valid),
        ]
    }
}

pub fn verify_cover_sequence(space: &Space, seq: &CoverSequence) -> LadderReport {
    let levels = seq.levels.len();

    // covers per level: coverage + same-color d_k-disjointness
    let mut cover_valid = ConditionCheck::ok("all levels cover and split into d_k-disjoint families");
    'cv: for (k, level) in seq.levels.iter().enumerate() {
        let mut covered = vec![false; space.len()];
        for b in &level.blocks {
            if b.points.is_empty() {
                cover_valid = ConditionCheck::fail(format!("level {k}: empty block"));
                break 'cv;
            }
            for &p in &b.points {
                covered[p] = true;
            }
        }
        if let Some(p) = covered.iter().position(|&c| !c) {
            cover_valid =
                ConditionCheck::fail(format!("level {k}: point {} uncovered", space.id(p)));
            break 'cv;
        }
        for (i, a) in level.blocks.iter().enumerate() {
            for (j, b) in level.blocks.iter().enumerate().skip(i + 1) {
                if a.color != b.color {
                    continue;
                }
                let d = Rat::new(
                    space.set_dist_num(&a.points, &b.points).unwrap(),
                    space.denom(),
                );
                if d < seq.d[k] {
                    cover_valid = ConditionCheck::fail(format!(
                        "level {k}: same-color blocks {i},{j} at distance {d} < d_{k} = {}",
                        seq.d[k]
                    ));
                    break 'cv;
                }
            }
        }
    }

    // condition 1: L(U_k) > d_k, and a depth-d_k inner point per block
    let mut condition1 = ConditionCheck::ok("L(U_k) > d_k and every block has a depth-d_k point");
    'c1: for (k, level) in seq.levels.iter().enumerate() {
        match super::lebesgue(space, &level.blocks) {
            Err(_) => {
                condition1 = ConditionCheck::fail(format!("level {k}: empty cover"));
                break 'c1;
            }
            Ok(l) => {
                if !l.gt(seq.d[k]) {
                    condition1 = ConditionCheck::fail(format!(
                        "level {k}: L = {:?} not > d_{k} = {}",
                        l, seq.d[k]
                    ));
                    break 'c1;
                }
            }
        }
        for (i, b) in level.blocks.iter().enumerate() {
            let deep = match space.depths_in_block(&b.points) {
                None => Extended::Infinite,
                Some(depths) => Extended::Finite(Rat::new(
                    depths.into_iter().max().unwrap(),
                    space.denom(),
                )),
            };
            if !deep.ge(seq.d[k]) {
                condition1 = ConditionCheck::fail(format!(
                    "level {k} block {i}: no inner point at depth d_{k} = {}",
                    seq.d[k]
                ));
                break 'c1;
            }
        }
    }

    // condition 2: the exact recurrence on recomputed meshes
    let mut condition2 = ConditionCheck::ok("d_{k+1} = 2^(2k+2) * m_k exactly");
    for k in 0..levels {
        let mesh = super::mesh(space, &seq.levels[k].blocks).unwrap_or(rint(0));
        if mesh != seq.m[k] {
            condition2 = ConditionCheck::fail(format!(
                "level {k}: recorded mesh {} but measured {mesh}",
                seq.m[k]
            ));
            break;
        }
        if k + 1 < levels {
            let want = pow2(2 * k as i32 + 2) * mesh;
            if seq.d[k + 1] != want {
                condition2 = ConditionCheck::fail(format!(
                    "d_{} = {} but 2^(2k+2)*m_{k} = {want}",
                    k + 1,
                    seq.d[k + 1]
                ));
                break;
            }
        }
    }

    // condition 3, finite form: for each color some block contains every
    // basepoint ball up to the truncation radius, i.e. the whole space
    let mut condition3 =
        ConditionCheck::ok("every color absorbs all basepoint balls up to the truncation radius");
    for color in 0..seq.colors {
        let has_full = seq
            .levels
            .iter()
            .flat_map(|l| &l.blocks)
            .any(|b| b.color == color && b.points.len() == space.len());
        if !has_full {
            condition3 = ConditionCheck::fail(format!(
                "color {color}: no block contains the full truncation-radius ball of the basepoint"
            ));
            break;
        }
    }

    // condition 4: k < l, same color, U not inside V => d(U,V) >= d_k/2
    let mut condition4 = ConditionCheck::ok("cross-level same-color separation d_k/2");
    'c4: for k in 0..levels {
        for l in k + 1..levels {
            for (i, u) in seq.levels[k].blocks.iter().enumerate() {
                for (j, v) in seq.levels[l].blocks.iter().enumerate() {
                    if u.color != v.color || is_subset(&u.points, &v.points) {
                        continue;
                    }
                    let dist = Rat::new(
                        space.set_dist_num(&u.points, &v.points).unwrap(),
                        space.denom(),
                    );
                    if dist < seq.d[k] / rint(2) {
                        condition4 = ConditionCheck::fail(format!(
                            "levels {k},{l} color {}: blocks {i},{j} at distance {dist} < d_{k}/2",
                            u.color
                        ));
                        break 'c4;
                    }
                }
            }
        }
    }

    // psi: parent is a same-color superset at a higher level, minimal
    let mut psi_valid = ConditionCheck::ok("psi maps every non-root block to its minimal superset");
    'psi: for (k, level) in seq.levels.iter().enumerate() {
        for (i, b) in level.blocks.iter().enumerate() {
            let expected = {
                let mut best: Option<(usize, usize, usize)> = None;
                for (l, upper) in seq.levels.iter().enumerate().skip(k + 1) {
                    for (j, v) in upper.blocks.iter().enumerate() {
                        if v.color == b.color && is_subset(&b.points, &v.points) {
                            let cand = (v.points.len(), l, j);
                            if best.map_or(true, |cur| cand < cur) {
                                best = Some(cand);
                            }
                        }
                    }
                }
                best.map(|(_, l, j)| (l, j))
            };
            if seq.psi.get(&(k, i)).copied() != expected {
                psi_valid = ConditionCheck::fail(format!(
                    "block ({k},{i}): psi disagrees with the minimal-superset scan"
                ));
                break 'psi;
            }
        }
    }

    LadderReport {
        levels,
        cover_valid,
        condition1,
        condition2,
        condition3,
        condition4,
        psi_valid,
    }
}

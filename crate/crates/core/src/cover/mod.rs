//! Colored covers at a scale, dimension-at-scale estimation with a
//! brute-force oracle, cover ladders, and the Nagata/Higson checkers.

pub mod ladder;
pub mod nagata;
pub mod scale;

use crate::metric::Space;
use crate::rational::{Extended, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("cover is empty")]
    EmptyCover,
    #[error("bad scale: {0}")]
    BadScale(String),
    #[error("space of {0} points exceeds the oracle limit {1}")]
    TooLarge(usize, usize),
    #[error("color budget exceeded at level {0}: needs {1} colors for {2}")]
    ColorBudgetExceeded(usize, usize, usize),
    #[error("basepoint condition unsatisfiable at level {0}: {1}")]
    BasepointConditionUnsatisfiable(usize, String),
    #[error("tuple enumeration exceeds the complexity cap ({0} candidates)")]
    ComplexityCap(usize),
    #[error("bad parameters: {0}")]
    BadParameters(String),
}

/// One block of a colored cover: a point subset carrying a color.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverBlock {
    pub color: usize,
    /// Sorted point indices.
    pub points: Vec<usize>,
}

/// A cover of a space by colored blocks with parameters `(d, r)`:
/// same-color blocks are pairwise `>= d` apart, every block has diameter
/// `<= r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredCover {
    pub blocks: Vec<CoverBlock>,
    pub d: Rat,
    pub r: Rat,
}

/// First invariant violation of a [`ColoredCover`], as data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverViolation {
    Uncovered { point: usize },
    SameColorTooClose { a: usize, b: usize, dist: Rat },
    BlockTooLarge { block: usize, diameter: Rat },
    EmptyBlock { block: usize },
}

impl ColoredCover {
    pub fn colors_used(&self) -> usize {
        self.blocks.iter().map(|b| b.color + 1).max().unwrap_or(0)
    }

    /// Exact invariant check: blocks cover, same-color blocks are
    /// `>= d` apart, diameters `<= r`.
    pub fn validate(&self, space: &Space) -> Result<(), CoverViolation> {
        let mut covered = vec![false; space.len()];
        for (bi, b) in self.blocks.iter().enumerate() {
            if b.points.is_empty() {
                return Err(CoverViolation::EmptyBlock { block: bi });
            }
            for &p in &b.points {
                covered[p] = true;
            }
            let diam = Rat::new(space.subset_diameter_num(&b.points), space.denom());
            if diam > self.r {
                return Err(CoverViolation::BlockTooLarge { block: bi, diameter: diam });
            }
        }
        if let Some(p) = covered.iter().position(|c| !c) {
            return Err(CoverViolation::Uncovered { point: p });
        }
        for (i, a) in self.blocks.iter().enumerate() {
            for b in &self.blocks[i + 1..] {
                if a.color != b.color {
                    continue;
                }
                let d = space.set_dist_num(&a.points, &b.points).unwrap();
                let d = Rat::new(d, space.denom());
                if d < self.d {
                    return Err(CoverViolation::SameColorTooClose {
                        a: a.points[0],
                        b: b.points[0],
                        dist: d,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Mesh of a family: the least upper bound of block diameters.
pub fn mesh(space: &Space, blocks: &[CoverBlock]) -> Result<Rat, CoverError> {
    if blocks.is_empty() {
        return Err(CoverError::EmptyCover);
    }
    Ok(blocks
        .iter()
        .map(|b| Rat::new(space.subset_diameter_num(&b.points), space.denom()))
        .max()
        .unwrap())
}

/// Lebesgue number `L(U) = inf_x sup_U d(x, X \ U)`; `Infinite` when some
/// block is the whole space.
pub fn lebesgue(space: &Space, blocks: &[CoverBlock]) -> Result<Extended, CoverError> {
    if blocks.is_empty() {
        return Err(CoverError::EmptyCover);
    }
    let mut best = vec![Rat::zero(); space.len()];
    for b in blocks {
        match space.depths_in_block(&b.points) {
            None => return Ok(Extended::Infinite),
            Some(depths) => {
                for (&p, &depth) in b.points.iter().zip(&depths) {
                    let depth = Rat::new(depth, space.denom());
                    if depth > best[p] {
                        best[p] = depth;
                    }
                }
            }
        }
    }
    Ok(Extended::Finite(best.into_iter().min().unwrap()))
}

pub use ladder::{
    build_cover_sequence, verify_cover_sequence, CoverSequence, LadderOptions, LadderReport,
};
pub use nagata::{higson_check, nagata_check, nagata_to_cover, HigsonReport, NagataVerdict};
pub use scale::{color_cover_at_scale, dim_at_scale_oracle, Blocker, DimAtScaleResult};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{generate, GeneratorSpec};
    use crate::rational::{rint, Extended};

    fn line(radius: i64) -> Space {
        generate(&GeneratorSpec::Grid { dim: 1, radius }).unwrap()
    }

    fn block(color: usize, pts: &[usize]) -> CoverBlock {
        CoverBlock {
            color,
            points: pts.to_vec(),
        }
    }

    #[test]
    fn mesh_and_lebesgue_on_a_two_block_cover() {
        // {0..4} covered by {0,1,2} and {2,3,4}
        let sp = line(2);
        let blocks = vec![block(0, &[0, 1, 2]), block(1, &[2, 3, 4])];
        assert_eq!(mesh(&sp, &blocks).unwrap(), rint(2));
        assert_eq!(lebesgue(&sp, &blocks).unwrap(), Extended::Finite(rint(1)));
    }

    #[test]
    fn lebesgue_whole_space_is_unbounded() {
        let sp = line(2);
        let blocks = vec![block(0, &[0, 1, 2, 3, 4])];
        assert!(lebesgue(&sp, &blocks).unwrap().is_infinite());
    }

    #[test]
    fn mesh_of_singletons_is_zero() {
        let sp = line(3);
        let blocks: Vec<CoverBlock> = (0..sp.len()).map(|p| block(0, &[p])).collect();
        assert_eq!(mesh(&sp, &blocks).unwrap(), rint(0));
        assert_eq!(
            lebesgue(&sp, &blocks).unwrap(),
            Extended::Finite(rint(1))
        );
    }

    #[test]
    fn empty_cover_errors() {
        let sp = line(1);
        assert!(matches!(mesh(&sp, &[]), Err(CoverError::EmptyCover)));
        assert!(matches!(lebesgue(&sp, &[]), Err(CoverError::EmptyCover)));
    }

    #[test]
    fn validate_catches_each_violation() {
        let sp = line(5); // 11 points
        let all: Vec<usize> = (0..11).collect();
        // valid
        let c = ColoredCover {
            blocks: vec![block(0, &all[..6]), block(1, &all[5..])],
            d: rint(1),
            r: rint(10),
        };
        assert!(c.validate(&sp).is_ok());
        // same color too close
        let c = ColoredCover {
            blocks: vec![block(0, &all[..6]), block(0, &all[6..])],
            d: rint(2),
            r: rint(10),
        };
        assert!(matches!(
            c.validate(&sp),
            Err(CoverViolation::SameColorTooClose { .. })
        ));
        // uncovered point
        let c = ColoredCover {
            blocks: vec![block(0, &all[..6])],
            d: rint(1),
            r: rint(10),
        };
        assert!(matches!(c.validate(&sp), Err(CoverViolation::Uncovered { point: 6 })));
        // diameter bound
        let c = ColoredCover {
            blocks: vec![block(0, &all)],
            d: rint(1),
            r: rint(9),
        };
        assert!(matches!(
            c.validate(&sp),
            Err(CoverViolation::BlockTooLarge { .. })
        ));
    }
}

//! Splitting types: the discrete data of a direct sum of line bundles on
//! the projective line, with the twist-threshold decomposition used to
//! localize where twisted endomorphisms can live.

use crate::hn::HNData;
use thiserror::Error;

/// Ordered list of (twist, multiplicity) blocks with strictly decreasing
/// twists. The flat expansion a_1 ≥ … ≥ a_r lists each twist with its
/// multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplittingType {
    blocks: Vec<(i64, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("a splitting type needs at least one block")]
    EmptyType,
    #[error("block {0} has multiplicity zero")]
    ZeroMultiplicity(usize),
    #[error("twists must strictly decrease; block {0} does not")]
    NonDecreasingTwists(usize),
}

impl SplittingType {
    pub fn new(blocks: Vec<(i64, u32)>) -> Result<Self, SplitError> {
        if blocks.is_empty() {
            return Err(SplitError::EmptyType);
        }
        for (i, &(_, r)) in blocks.iter().enumerate() {
            if r == 0 {
                return Err(SplitError::ZeroMultiplicity(i + 1));
            }
        }
        for i in 1..blocks.len() {
            if blocks[i].0 >= blocks[i - 1].0 {
                return Err(SplitError::NonDecreasingTwists(i + 1));
            }
        }
        Ok(SplittingType { blocks })
    }

    /// Build from a flat twist list in any order (sorted and grouped here).
    pub fn from_twists(twists: &[i64]) -> Result<Self, SplitError> {
        if twists.is_empty() {
            return Err(SplitError::EmptyType);
        }
        let mut sorted = twists.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let mut blocks: Vec<(i64, u32)> = Vec::new();
        for t in sorted {
            match blocks.last_mut() {
                Some((b, r)) if *b == t => *r += 1,
                _ => blocks.push((t, 1)),
            }
        }
        Ok(SplittingType { blocks })
    }

    pub fn blocks(&self) -> &[(i64, u32)] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn rank(&self) -> u32 {
        self.blocks.iter().map(|&(_, r)| r).sum()
    }

    pub fn degree(&self) -> i64 {
        self.blocks
            .iter()
            .map(|&(b, r)| b * i64::from(r))
            .sum()
    }

    /// Flat twist list a_1 ≥ … ≥ a_r.
    pub fn flat_twists(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.rank() as usize);
        for &(b, r) in &self.blocks {
            for _ in 0..r {
                out.push(b);
            }
        }
        out
    }

    /// The filtration profile of the bundle: block i contributes rank r_i
    /// and degree r_i·b_i, so its slope is the twist b_i.
    pub fn hn_profile(&self) -> HNData {
        HNData::new_unchecked(
            self.blocks
                .iter()
                .map(|&(b, r)| (r, b * i64::from(r)))
                .collect(),
        )
    }
}

/// Split the blocks at the twist threshold γ + b_1: the upper part keeps
/// every block with b_i > γ + b_1, the lower part the rest. With γ < 0 the
/// top block always clears its own threshold, so the upper part is never
/// empty here; the lower part is empty exactly when all blocks sit within
/// |γ| of the top twist. Every twisted endomorphism kills the upper part's
/// columns, so Hom(E, E(γ)) = Hom(E₋, E(γ)).
pub fn decompose_pm(
    split: &SplittingType,
    gamma: i64,
) -> (Option<SplittingType>, Option<SplittingType>) {
    assert!(gamma < 0, "twist must be negative");
    let threshold = gamma + split.blocks[0].0;
    let e = split
        .blocks
        .iter()
        .take_while(|&&(b, _)| b > threshold)
        .count();
    let plus = (e > 0).then(|| SplittingType {
        blocks: split.blocks[..e].to_vec(),
    });
    let minus = (e < split.blocks.len()).then(|| SplittingType {
        blocks: split.blocks[e..].to_vec(),
    });
    (plus, minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(blocks: &[(i64, u32)]) -> SplittingType {
        SplittingType::new(blocks.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(SplittingType::new(vec![]), Err(SplitError::EmptyType));
        assert_eq!(
            SplittingType::new(vec![(1, 1), (1, 2)]),
            Err(SplitError::NonDecreasingTwists(2))
        );
        assert_eq!(
            SplittingType::new(vec![(1, 1), (0, 0)]),
            Err(SplitError::ZeroMultiplicity(2))
        );
        let ok = st(&[(2, 1), (0, 3), (-1, 1)]);
        assert_eq!(ok.rank(), 5);
        assert_eq!(ok.degree(), 2 - 1);
        assert_eq!(ok.block_count(), 3);
    }

    #[test]
    fn flat_twists_and_grouping() {
        let s = st(&[(1, 2), (-3, 1)]);
        assert_eq!(s.flat_twists(), vec![1, 1, -3]);
        assert_eq!(SplittingType::from_twists(&[-3, 1, 1]).unwrap(), s);
        assert_eq!(
            SplittingType::from_twists(&[]),
            Err(SplitError::EmptyType)
        );
    }

    #[test]
    fn profile_slopes_are_twists() {
        let s = st(&[(3, 2), (0, 1), (-2, 4)]);
        let data = s.hn_profile();
        assert_eq!(data.rank(), 7);
        assert_eq!(data.degree(), 6 - 8);
        let slopes: Vec<i64> = (0..3)
            .map(|i| {
                let mu = data.slope(i);
                assert!(mu.is_integer());
                crate::rational::floor_i64(mu)
            })
            .collect();
        assert_eq!(slopes, vec![3, 0, -2]);
    }

    #[test]
    fn decompose_examples() {
        let (p, m) = decompose_pm(&st(&[(0, 1), (-3, 1)]), -2);
        assert_eq!(p, Some(st(&[(0, 1)])));
        assert_eq!(m, Some(st(&[(-3, 1)])));

        let (p, m) = decompose_pm(&st(&[(0, 2)]), -1);
        assert_eq!(p, Some(st(&[(0, 2)])));
        assert_eq!(m, None);

        // boundary twist is NOT strictly above the threshold
        let (p, m) = decompose_pm(&st(&[(0, 1), (-1, 1)]), -1);
        assert_eq!(p, Some(st(&[(0, 1)])));
        assert_eq!(m, Some(st(&[(-1, 1)])));
    }

    #[test]
    fn upper_part_never_empty_for_negative_twist() {
        // b_1 > gamma + b_1 holds whenever gamma < 0, so the top block is
        // always in the upper part; scan a window to pin the property.
        for gamma in [-1i64, -2, -3] {
            for b1 in -3..=3i64 {
                for gap in 1..=5i64 {
                    let s = st(&[(b1, 2), (b1 - gap, 1)]);
                    let (p, m) = decompose_pm(&s, gamma);
                    assert!(p.is_some());
                    let (pr, mr) = (
                        p.map_or(0, |x| x.rank()),
                        m.map_or(0, |x| x.rank()),
                    );
                    assert_eq!(pr + mr, s.rank());
                }
            }
        }
    }
}

//! Numeric Harder–Narasimhan profiles and the slope criteria built on them.
//!
//! A profile records the block data (r_1,d_1), …, (r_s,d_s) of a filtration
//! with strictly decreasing slopes mu_i = d_i/r_i. Everything downstream —
//! existence tests, nilpotency bounds, index maps — is a pure function of
//! these integers and the curve's twist weight gamma.

use crate::curve::CurveContext;
use crate::rational::{floor_i64, int, rat, Rational};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HNData {
    blocks: Vec<(u32, i64)>,
    slopes: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum HnError {
    #[error("profile must contain at least one block")]
    EmptyProfile,
    #[error("block {0} has rank zero")]
    ZeroRank(usize),
    #[error("slopes must strictly decrease: block {0} does not dominate its successor")]
    NonDecreasingSlopes(usize),
    #[error("genus-zero profiles require integral slopes; block {0} has a fractional slope")]
    NonIntegralSlopeGenusZero(usize),
}

/// The slope necessary condition fails: `mu_min > mu_max + gamma`, so the
/// only field with this profile is zero and the requested quantity is
/// undefined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("necessary condition fails: mu_min > mu_max + gamma, only the zero field exists")]
pub struct NecessaryConditionFails;

/// Validate raw `(rank, degree)` blocks against a curve context.
///
/// Block indices in errors are 1-based to match the usual notation
/// F_1 ⊂ … ⊂ F_s. Genus-zero contexts additionally require every slope to
/// be an integer, since the profile must then come from a split bundle.
pub fn validate_hn(blocks: &[(u32, i64)], ctx: &CurveContext) -> Result<HNData, HnError> {
    if blocks.is_empty() {
        return Err(HnError::EmptyProfile);
    }
    for (i, &(r, _)) in blocks.iter().enumerate() {
        if r == 0 {
            return Err(HnError::ZeroRank(i + 1));
        }
    }
    let slopes: Vec<Rational> = blocks
        .iter()
        .map(|&(r, d)| rat(d, i64::from(r)))
        .collect();
    for i in 0..slopes.len() - 1 {
        if slopes[i] <= slopes[i + 1] {
            return Err(HnError::NonDecreasingSlopes(i + 1));
        }
    }
    if ctx.genus() == 0 {
        for (i, mu) in slopes.iter().enumerate() {
            if !mu.is_integer() {
                return Err(HnError::NonIntegralSlopeGenusZero(i + 1));
            }
        }
    }
    Ok(HNData {
        blocks: blocks.to_vec(),
        slopes,
    })
}

impl HNData {
    /// Construct from blocks already known to be strictly ordered
    /// (used when converting from a splitting type).
    pub(crate) fn new_unchecked(blocks: Vec<(u32, i64)>) -> HNData {
        let slopes: Vec<Rational> = blocks
            .iter()
            .map(|&(r, d)| rat(d, i64::from(r)))
            .collect();
        debug_assert!(slopes.windows(2).all(|w| w[0] > w[1]));
        HNData { blocks, slopes }
    }

    pub fn blocks(&self) -> &[(u32, i64)] {
        &self.blocks
    }

    /// Number of filtration steps s.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn rank(&self) -> u32 {
        self.blocks.iter().map(|b| b.0).sum()
    }

    pub fn degree(&self) -> i64 {
        self.blocks.iter().map(|b| b.1).sum()
    }

    /// Rank of F_j, the sum of the first `j` block ranks.
    pub fn rank_prefix(&self, j: usize) -> u32 {
        self.blocks[..j].iter().map(|b| b.0).sum()
    }

    /// Degree of F_j.
    pub fn degree_prefix(&self, j: usize) -> i64 {
        self.blocks[..j].iter().map(|b| b.1).sum()
    }

    pub fn slopes(&self) -> &[Rational] {
        &self.slopes
    }

    /// Slope of the i-th block, 0-based.
    pub fn slope(&self, i: usize) -> &Rational {
        &self.slopes[i]
    }

    pub fn mu_plus(&self) -> &Rational {
        &self.slopes[0]
    }

    pub fn mu_minus(&self) -> &Rational {
        self.slopes.last().expect("profile is non-empty")
    }

    /// `(mu_plus, mu_minus, all slopes)` as owned values.
    pub fn slope_profile(&self) -> (Rational, Rational, Vec<Rational>) {
        (
            self.mu_plus().clone(),
            self.mu_minus().clone(),
            self.slopes.clone(),
        )
    }
}

/// True iff `mu_min <= mu_max + gamma` — a nonzero field can only exist on
/// profiles satisfying this; `false` forces every field to vanish.
pub fn necessary_condition(ctx: &CurveContext, data: &HNData) -> bool {
    *data.mu_minus() <= data.mu_plus() + int(ctx.gamma())
}

/// Maximal `e >= 1` with `mu_min <= mu_max + e*gamma`. Every field on every
/// bundle with this profile then satisfies `Phi^(e+1) = 0`.
pub fn nilpotency_bound(ctx: &CurveContext, data: &HNData) -> Result<u32, NecessaryConditionFails> {
    if !necessary_condition(ctx, data) {
        return Err(NecessaryConditionFails);
    }
    // mu_min <= mu_max + e*gamma  <=>  e <= (mu_min - mu_max)/gamma  (gamma < 0)
    let q = (data.mu_minus() - data.mu_plus()) / int(ctx.gamma());
    let e = floor_i64(&q);
    debug_assert!(e >= 1);
    Ok(e as u32)
}

/// The partial index maps `b` and `c`. All indices are 0-based here;
/// undefined positions are `None` rather than sentinel numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMaps {
    b: Vec<Option<usize>>,
    c: Vec<Option<usize>>,
}

impl IndexMaps {
    /// `b(i) = min{k > i : mu_i + gamma >= mu_k}`, defined exactly when
    /// `mu_i + gamma >= mu_min`.
    pub fn b(&self, i: usize) -> Option<usize> {
        self.b[i]
    }

    /// `c(j) = max{k < j : mu_j <= gamma + mu_k}`, defined exactly when
    /// `mu_j <= gamma + mu_max`.
    pub fn c(&self, j: usize) -> Option<usize> {
        self.c[j]
    }
}

pub fn index_maps(ctx: &CurveContext, data: &HNData) -> IndexMaps {
    let gamma = int(ctx.gamma());
    let mu = data.slopes();
    let s = mu.len();
    let b = (0..s)
        .map(|i| {
            let shifted = &mu[i] + &gamma;
            if shifted < *data.mu_minus() {
                return None;
            }
            (i + 1..s).find(|&k| shifted >= mu[k])
        })
        .collect();
    let c = (0..s)
        .map(|j| {
            if j == 0 || mu[j] > &gamma + data.mu_plus() {
                return None;
            }
            (0..j).rev().find(|&k| mu[j] <= &gamma + &mu[k])
        })
        .collect();
    IndexMaps { b, c }
}

/// The pair `(ell1, ell2)`, 0-based:
/// `ell2 = max{i : mu_i + gamma >= mu_min}` and
/// `ell1 = min{j : mu_{ell2} + gamma < mu_j}`.
///
/// Every field maps into the first `ell2 + 1` filtration steps (twisted);
/// `ell1 >= ell2` guarantees 2-nilpotency of every field with this profile.
pub fn ell_indices(
    ctx: &CurveContext,
    data: &HNData,
) -> Result<(usize, usize), NecessaryConditionFails> {
    if !necessary_condition(ctx, data) {
        return Err(NecessaryConditionFails);
    }
    let gamma = int(ctx.gamma());
    let mu = data.slopes();
    let ell2 = (0..mu.len())
        .rev()
        .find(|&i| &mu[i] + &gamma >= *data.mu_minus())
        .expect("index 0 qualifies whenever the necessary condition holds");
    let threshold = &mu[ell2] + &gamma;
    let ell1 = (0..mu.len())
        .find(|&j| threshold < mu[j])
        .expect("index 0 always qualifies since gamma < 0");
    Ok((ell1, ell2))
}

/// Branch data for rank-3 bundles with HN length 2, split off a rank-1 and
/// a rank-2 graded piece `A_1 ⊕ A_2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank3Branch {
    pub delta: Rational,
    pub case: Rank3Case,
}

/// Branch labels. `VanishesOnF2` is the decidable branch (`delta > 0`):
/// the field kills the second filtration step. The remaining labels
/// document the `delta <= 0` sub-cases, which depend on the rank of the
/// image sheaf and are *not* decided numerically; `rank3_branch` reports
/// `KernelContainsF2Candidate` for all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank3Case {
    VanishesOnF2,
    KernelContainsF2Candidate,
    RankOneImage,
    RankTwoImage,
}

impl Rank3Branch {
    pub fn is_branch_a(&self) -> bool {
        matches!(self.case, Rank3Case::VanishesOnF2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("rank-3 branch data requires deg F1 > deg A1 > deg A2 and mu_+(T_D) < 0")]
pub struct OrderViolation;

/// `delta = deg A1 - (deg F1 + mu_+(T_D))`; branch A exactly when positive.
pub fn rank3_branch(
    deg_f1: i64,
    deg_a1: i64,
    deg_a2: i64,
    mu_plus_td: &Rational,
) -> Result<Rank3Branch, OrderViolation> {
    if !(deg_f1 > deg_a1 && deg_a1 > deg_a2) || !(*mu_plus_td < int(0)) {
        return Err(OrderViolation);
    }
    let delta = int(deg_a1) - (int(deg_f1) + mu_plus_td);
    let case = if delta > int(0) {
        Rank3Case::VanishesOnF2
    } else {
        Rank3Case::KernelContainsF2Candidate
    };
    Ok(Rank3Branch { delta, case })
}

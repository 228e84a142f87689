//! Segre invariants: s_k = k·deg E − r·δ_k, where δ_k is the maximal degree
//! of a rank-k subsheaf (invariant under the field — on the projective line
//! the two notions agree, which the oracle here verifies by brute force).
//!
//! The closed formulas are stated on filtration profiles; the subquotient
//! δ-tables they recurse into are supplied by the caller, because away from
//! the projective line they depend on the actual bundle, not the profile.

use crate::field::{entries_generic_rank, iterate, CoHiggsFieldP1, DEFAULT_SEED};
use crate::hn::HNData;
use crate::linalg;
use crate::poly::HomogPoly;
use crate::rational::int;
use crate::split::SplittingType;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegreEntry {
    pub s: i64,
    pub delta: i64,
    /// How the entry was computed (closed form, recursion, oracle…).
    pub provenance: &'static str,
}

/// Values of s_k and δ_k for k = 1..r−1, tied together by
/// s_k = k·degree − rank·δ_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegreTable {
    rank: u32,
    degree: i64,
    values: BTreeMap<u32, SegreEntry>,
}

impl SegreTable {
    pub fn new(rank: u32, degree: i64, values: BTreeMap<u32, SegreEntry>) -> Self {
        let table = SegreTable {
            rank,
            degree,
            values,
        };
        assert!(table.is_consistent(), "s_k and delta_k must be linked");
        table
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn get(&self, k: u32) -> Option<&SegreEntry> {
        self.values.get(&k)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, &SegreEntry)> {
        self.values.iter().map(|(&k, e)| (k, e))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Every entry satisfies the defining relation and the keys are
    /// exactly 1..rank−1.
    pub fn is_consistent(&self) -> bool {
        let keys_ok = self.values.len() == self.rank.saturating_sub(1) as usize
            && self.values.keys().copied().eq(1..self.rank.max(1));
        keys_ok
            && self.values.iter().all(|(&k, e)| {
                e.s == i64::from(k) * self.degree - i64::from(self.rank) * e.delta
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SegreError {
    #[error("operation needs a complete filtration (all block ranks 1)")]
    NotCompleteFiltration,
    #[error("no block straddles rank {0}")]
    NoValidH(u32),
    #[error("subquotient delta table is missing entry (block {block}, t {t})")]
    InconsistentDeltaTable { block: usize, t: u32 },
    #[error("rank {0} is outside the tail recursion range")]
    RangeViolation(u32),
    #[error("inner Segre value makes the twist correction non-integral")]
    NonIntegralDPrime,
}

const SPLIT_FORM: &str = "split-bundle closed form";
const COMPLETE_FORM: &str = "complete filtration: unique maximizer per step";

/// Closed-form table for a split bundle: δ_k is the best possible
/// top-k twist sum, and the invariant does not depend on the field.
pub fn segre_p1(split: &SplittingType) -> SegreTable {
    let a = split.flat_twists();
    let r = split.rank();
    let d = split.degree();
    let mut values = BTreeMap::new();
    let mut prefix = 0i64;
    for k in 1..r {
        prefix += a[(k - 1) as usize];
        values.insert(
            k,
            SegreEntry {
                s: i64::from(k) * d - i64::from(r) * prefix,
                delta: prefix,
                provenance: SPLIT_FORM,
            },
        );
    }
    SegreTable::new(r, d, values)
}

/// Closed-form table for a complete filtration profile (every block has
/// rank one): the k-th filtration step is the unique degree maximizer.
pub fn segre_complete(data: &HNData) -> Result<SegreTable, SegreError> {
    if data.blocks().iter().any(|&(r, _)| r != 1) {
        return Err(SegreError::NotCompleteFiltration);
    }
    let r = data.rank();
    let d = data.degree();
    let mut values = BTreeMap::new();
    for k in 1..r {
        let delta = data.degree_prefix(k as usize);
        values.insert(
            k,
            SegreEntry {
                s: i64::from(k) * d - i64::from(r) * delta,
                delta,
                provenance: COMPLETE_FORM,
            },
        );
    }
    Ok(SegreTable::new(r, d, values))
}

/// Exact Segre values at the filtration breakpoints, keyed by the
/// breakpoint rank ρ = r_1+…+r_j for j = 1..s−1: the j-th filtration step
/// is the unique rank-ρ subsheaf of maximal degree, so
/// s_ρ = ρ·d − r·deg F_j exactly.
pub fn s_at_breakpoints(data: &HNData) -> BTreeMap<u32, i64> {
    let r = i64::from(data.rank());
    let d = data.degree();
    let mut out = BTreeMap::new();
    for j in 1..data.block_count() {
        let rho = data.rank_prefix(j);
        out.insert(rho, i64::from(rho) * d - r * data.degree_prefix(j));
    }
    out
}

/// The unique 1-based block index h whose interior contains rank k, i.e.
/// ρ_{h−1} < k < ρ_h. Breakpoint ranks themselves have no such h.
fn straddling_block(data: &HNData, k: u32) -> Option<usize> {
    if k == 0 {
        return None;
    }
    let mut prev = 0u32;
    for j in 1..=data.block_count() {
        let rho = data.rank_prefix(j);
        if prev < k && k < rho {
            return Some(j);
        }
        prev = rho;
    }
    None
}

/// Like `straddling_block` but admitting breakpoints on the left edge:
/// the unique h with ρ_{h−1} ≤ k < ρ_h for 1 ≤ k < r.
fn covering_block(data: &HNData, k: u32) -> Option<usize> {
    if k == 0 || k >= data.rank() {
        return None;
    }
    let mut prev = 0u32;
    for j in 1..=data.block_count() {
        let rho = data.rank_prefix(j);
        if prev <= k && k < rho {
            return Some(j);
        }
        prev = rho;
    }
    None
}

/// Upper bound for δ_k at an interior rank, exact on split bundles:
/// δ_k ≤ deg F_{h−1} + ⌊(k − ρ_{h−1})·μ_h⌋ where h is the straddling
/// block. The floor is sound because δ_k is an integer.
pub fn delta_intermediate_bound(data: &HNData, k: u32) -> Result<i64, SegreError> {
    let h = straddling_block(data, k).ok_or(SegreError::NoValidH(k))?;
    let (rh, dh) = data.blocks()[h - 1];
    let r_prime = i64::from(k - data.rank_prefix(h - 1));
    let bound = data.degree_prefix(h - 1) + (r_prime * dh).div_euclid(i64::from(rh));
    Ok(bound)
}

/// δ_k by recursion into the subquotients: with h the covering block and
/// target = k − ρ_{h−1},
/// δ_k = deg F_{h−1} + max over compositions (t_h..t_s), 0 ≤ t_j ≤ r_j,
/// Σ t_j = target, of Σ δ_{t_j}(subquotient j). The caller supplies each
/// subquotient table as (block index j, t) → δ_t; t = 0 contributes zero
/// and needs no entry. A breakpoint rank has the empty composition only:
/// δ_k = deg F_{h−1}.
pub fn delta_composition(
    data: &HNData,
    k: u32,
    subquotient_delta: &BTreeMap<(usize, u32), i64>,
) -> Result<i64, SegreError> {
    let h = covering_block(data, k).ok_or(SegreError::NoValidH(k))?;
    let target = k - data.rank_prefix(h - 1);
    let s = data.block_count();
    let base = data.degree_prefix(h - 1);

    // depth-first over t_h..t_s with the running remainder
    fn best(
        data: &HNData,
        table: &BTreeMap<(usize, u32), i64>,
        j: usize,
        remaining: u32,
        s: usize,
    ) -> Result<Option<i64>, SegreError> {
        if j > s {
            return Ok((remaining == 0).then_some(0));
        }
        let (rj, _) = data.blocks()[j - 1];
        let mut out: Option<i64> = None;
        for t in 0..=rj.min(remaining) {
            let here = if t == 0 {
                0
            } else {
                *table
                    .get(&(j, t))
                    .ok_or(SegreError::InconsistentDeltaTable { block: j, t })?
            };
            if let Some(rest) = best(data, table, j + 1, remaining - t, s)? {
                let total = here + rest;
                if out.is_none_or(|b| total > b) {
                    out = Some(total);
                }
            }
        }
        Ok(out)
    }

    let max = best(data, subquotient_delta, h, target, s)?
        .expect("0 ≤ target ≤ r_h + … + r_s, so some composition exists");
    Ok(base + max)
}

/// δ_k for ranks inside the last block: everything above the last
/// filtration step is forced, and the remainder recurses into the final
/// subquotient. tail_delta maps t → δ_t of that subquotient.
pub fn delta_tail(
    data: &HNData,
    k: u32,
    tail_delta: &BTreeMap<u32, i64>,
) -> Result<i64, SegreError> {
    let s = data.block_count();
    let (rs, _) = data.blocks()[s - 1];
    let r = data.rank();
    if !(r - rs < k && k < r) {
        return Err(SegreError::RangeViolation(k));
    }
    let t = k + rs - r;
    let inner = *tail_delta
        .get(&t)
        .ok_or(SegreError::InconsistentDeltaTable { block: s, t })?;
    Ok(data.degree_prefix(s - 1) + inner)
}

/// Upper bound on s_k at an interior rank via a one-block extension of the
/// h-th filtration step: s_k ≤ k·d − r·(deg F_h + d′) with
/// d′ = (r′·d_{h+1} − e_inner)/r_{h+1}, r′ = k − ρ_h, and e_inner the
/// Segre value s_{r′} of the (h+1)-st subquotient, supplied by the caller.
/// Here h may be zero (k inside the first block, deg F_0 = 0).
pub fn s_upper_partial_block(data: &HNData, k: u32, e_inner: i64) -> Result<i64, SegreError> {
    if k == 0 || k >= data.rank() {
        return Err(SegreError::NoValidH(k));
    }
    // find h ≥ 0 with ρ_h < k < ρ_{h+1}
    let mut h = None;
    let mut prev = 0u32;
    for j in 1..=data.block_count() {
        let rho = data.rank_prefix(j);
        if prev < k && k < rho {
            h = Some(j - 1);
            break;
        }
        prev = rho;
    }
    let h = h.ok_or(SegreError::NoValidH(k))?;
    let (r_next, d_next) = data.blocks()[h];
    let r_prime = i64::from(k - data.rank_prefix(h));
    let numerator = r_prime * d_next - e_inner;
    if numerator.rem_euclid(i64::from(r_next)) != 0 {
        return Err(SegreError::NonIntegralDPrime);
    }
    let d_prime = numerator / i64::from(r_next);
    Ok(i64::from(k) * data.degree()
        - i64::from(data.rank()) * (data.degree_prefix(h) + d_prime))
}

/// Default widening margin below the smallest twist for the oracle window.
fn oracle_window(split: &SplittingType, extra: i64) -> (i64, i64) {
    let a = split.flat_twists();
    let lo = a[a.len() - 1] - i64::from(split.rank()) - extra;
    let hi = a[0];
    (lo, hi)
}

/// Independent brute-force δ_k: enumerate candidate rank-k splitting types
/// (c_1 ≥ … ≥ c_k) in a window, by descending total degree, and accept the
/// first whose generic map into the bundle has full rank k (an injection
/// of sheaves witnesses a rank-k subsheaf of that degree). Exactness of
/// each rank call is the engine's contract; three independent coefficient
/// draws guard against an unlucky non-generic sample.
pub fn oracle_delta_p1(split: &SplittingType, k: u32) -> i64 {
    oracle_delta_p1_seeded(split, k, DEFAULT_SEED)
}

pub fn oracle_delta_p1_seeded(split: &SplittingType, k: u32, seed: u64) -> i64 {
    oracle_delta_p1_widened(split, k, 0, seed)
}

/// Same search over a window widened downward by `extra` (sanity checks
/// assert the answer does not move).
pub fn oracle_delta_p1_widened(split: &SplittingType, k: u32, extra: i64, seed: u64) -> i64 {
    assert!(
        1 <= k && k < split.rank(),
        "subsheaf rank must be strictly between 0 and the bundle rank"
    );
    let a = split.flat_twists();
    let (lo, hi) = oracle_window(split, extra);
    let k_usize = k as usize;

    // all non-increasing k-tuples in [lo, hi], highest total degree first,
    // lexicographically largest first among equal degrees
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    let mut stack: Vec<Vec<i64>> = vec![Vec::new()];
    while let Some(partial) = stack.pop() {
        if partial.len() == k_usize {
            candidates.push(partial);
            continue;
        }
        let cap = partial.last().copied().unwrap_or(hi);
        for c in lo..=cap {
            let mut next = partial.clone();
            next.push(c);
            stack.push(next);
        }
    }
    candidates.sort_by(|x, y| {
        let (sx, sy) = (x.iter().sum::<i64>(), y.iter().sum::<i64>());
        sy.cmp(&sx).then_with(|| y.cmp(x))
    });

    let mut state = seed;
    for cand in &candidates {
        if accepts_candidate(&a, cand, &mut state) {
            return cand.iter().sum();
        }
    }
    unreachable!("the all-lo candidate embeds into any bundle in the window")
}

/// A generic element of Hom(⊕O(c_i), E) has rank k iff some draw does.
fn accepts_candidate(a: &[i64], cand: &[i64], state: &mut u64) -> bool {
    let k = cand.len();
    for _ in 0..3 {
        let entries: Vec<Vec<HomogPoly>> = a
            .iter()
            .map(|&ap| {
                cand.iter()
                    .map(|&ci| {
                        let deg = ap - ci;
                        if deg < 0 {
                            return HomogPoly::structural_zero();
                        }
                        let n = usize::try_from(deg).unwrap() + 1;
                        let coeffs = (0..n)
                            .map(|_| {
                                // nonzero small integers keep draws generic
                                let v = linalg::next_in_range(state, 1, 10);
                                int(if v > 5 { 5 - v } else { v })
                            })
                            .collect();
                        HomogPoly::new(deg, coeffs).expect("matching length")
                    })
                    .collect()
            })
            .collect();
        if entries_generic_rank(&entries, splitmix_fork(state)) == k {
            return true;
        }
    }
    false
}

fn splitmix_fork(state: &mut u64) -> u64 {
    linalg::splitmix64(state)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("field is not 2-nilpotent")]
pub struct NotTwoNilpotent;

/// For a 2-nilpotent field: generic kernel and image ranks, plus the
/// witness flag that rank-k invariant subsheaves exist for every k
/// (saturate a rank-k subsheaf of the kernel for k ≤ ker_rank; pull back a
/// rank-(k − ker_rank) subsheaf of the image otherwise — both are carried
/// into themselves because Φ² = 0).
pub fn kernel_image_witness(
    phi: &CoHiggsFieldP1,
) -> Result<(usize, usize, bool), NotTwoNilpotent> {
    if !iterate(phi, 2).is_zero() {
        return Err(NotTwoNilpotent);
    }
    let rank = entries_generic_rank(phi.entries(), DEFAULT_SEED);
    Ok((phi.rank() - rank, rank, true))
}

/// δ-tables of the subquotients of a split bundle, in the shape
/// `delta_composition` consumes: block j (1-based) is O(b_j)^{r_j}, whose
/// rank-t maximal subsheaf degree is t·b_j.
pub fn p1_subquotient_deltas(split: &SplittingType) -> BTreeMap<(usize, u32), i64> {
    let mut out = BTreeMap::new();
    for (j, &(b, r)) in split.blocks().iter().enumerate() {
        for t in 1..=r {
            out.insert((j + 1, t), i64::from(t) * b);
        }
    }
    out
}

/// Tail table for `delta_tail` on a split bundle: the last subquotient is
/// O(b_s)^{r_s}.
pub fn p1_tail_deltas(split: &SplittingType) -> BTreeMap<u32, i64> {
    let &(b, r) = split.blocks().last().expect("non-empty splitting type");
    (1..=r).map(|t| (t, i64::from(t) * b)).collect()
}

//! Twisted endomorphism fields on split bundles over the projective line.
//!
//! A field is an r×r matrix of homogeneous forms: the entry in row p,
//! column q maps the summand O(a_q) into O(a_p)(γ) and is therefore forced
//! to be homogeneous of degree a_p + γ − a_q, or the zero space when that
//! degree is negative. Since γ < 0, nonzero entries need a_p > a_q: every
//! field is strictly block-triangular with respect to distinct twist
//! values, hence nilpotent of index at most the number of blocks.
//!
//! Iteration shifts the target twist: the i-fold composition lands in
//! Hom(E, E(iγ)) and its entries obey the same degree rule with iγ.

use crate::linalg::{self, UniPoly};
use crate::poly::HomogPoly;
use crate::rational::{int, Rational};
use crate::split::SplittingType;
use num::One;
use std::collections::BTreeSet;
use thiserror::Error;

/// Seed used by the unseeded entry points. Any fixed value works; this one
/// is pinned so results are reproducible across builds.
pub const DEFAULT_SEED: u64 = 0x5EED_0F1E_1D00_D1CE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("target twist must be negative, got {0}")]
    TwistNotNegative(i64),
    #[error("entry matrix must have {expected} rows, got {found}")]
    WrongRowCount { expected: usize, found: usize },
    #[error("row {row} must have {expected} entries, got {found}")]
    WrongRowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry ({row},{col}) must have degree {expected}, got {found}")]
    DegreeMismatch {
        row: usize,
        col: usize,
        expected: i64,
        found: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoHiggsFieldP1 {
    split: SplittingType,
    gamma: i64,
    twists: Vec<i64>,
    entries: Vec<Vec<HomogPoly>>,
}

/// The i-fold composition of a field, mapping E into E(iγ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedField {
    split: SplittingType,
    gamma: i64,
    level: u32,
    twists: Vec<i64>,
    entries: Vec<Vec<HomogPoly>>,
}

pub(crate) fn prescribed_degree(twists: &[i64], gamma: i64, level: u32, p: usize, q: usize) -> i64 {
    twists[p] + i64::from(level) * gamma - twists[q]
}

/// Validate and normalize an entry matrix against the degree rule at the
/// given level. Structural zeros are accepted anywhere and stored with
/// their prescribed degree when that degree is non-negative.
pub(crate) fn check_entries(
    twists: &[i64],
    gamma: i64,
    level: u32,
    entries: Vec<Vec<HomogPoly>>,
) -> Result<Vec<Vec<HomogPoly>>, FieldError> {
    let r = twists.len();
    if entries.len() != r {
        return Err(FieldError::WrongRowCount {
            expected: r,
            found: entries.len(),
        });
    }
    let mut out = Vec::with_capacity(r);
    for (p, row) in entries.into_iter().enumerate() {
        if row.len() != r {
            return Err(FieldError::WrongRowLength {
                row: p + 1,
                expected: r,
                found: row.len(),
            });
        }
        let mut out_row = Vec::with_capacity(r);
        for (q, entry) in row.into_iter().enumerate() {
            let expected = prescribed_degree(twists, gamma, level, p, q);
            let normalized = if expected < 0 {
                if !entry.is_zero() {
                    return Err(FieldError::DegreeMismatch {
                        row: p + 1,
                        col: q + 1,
                        expected: -1,
                        found: entry.degree(),
                    });
                }
                HomogPoly::structural_zero()
            } else if entry.is_structural_zero() {
                HomogPoly::zero(expected)
            } else if entry.degree() != expected {
                return Err(FieldError::DegreeMismatch {
                    row: p + 1,
                    col: q + 1,
                    expected,
                    found: entry.degree(),
                });
            } else {
                entry
            };
            out_row.push(normalized);
        }
        out.push(out_row);
    }
    Ok(out)
}

impl CoHiggsFieldP1 {
    pub fn new(
        split: SplittingType,
        gamma: i64,
        entries: Vec<Vec<HomogPoly>>,
    ) -> Result<Self, FieldError> {
        if gamma >= 0 {
            return Err(FieldError::TwistNotNegative(gamma));
        }
        let twists = split.flat_twists();
        let entries = check_entries(&twists, gamma, 1, entries)?;
        Ok(CoHiggsFieldP1 {
            split,
            gamma,
            twists,
            entries,
        })
    }

    pub fn zero(split: SplittingType, gamma: i64) -> Self {
        Self::build(split, gamma, |_, _, degree| HomogPoly::zero(degree))
            .expect("zero matrix always satisfies the degree rule")
    }

    /// Construct entry-by-entry: the closure is called once for each slot
    /// with non-negative prescribed degree and must return a form of that
    /// degree (structural zeros are accepted and normalized).
    pub fn build(
        split: SplittingType,
        gamma: i64,
        mut f: impl FnMut(usize, usize, i64) -> HomogPoly,
    ) -> Result<Self, FieldError> {
        if gamma >= 0 {
            return Err(FieldError::TwistNotNegative(gamma));
        }
        let twists = split.flat_twists();
        let r = twists.len();
        let mut entries = Vec::with_capacity(r);
        for p in 0..r {
            let mut row = Vec::with_capacity(r);
            for q in 0..r {
                let d = prescribed_degree(&twists, gamma, 1, p, q);
                row.push(if d < 0 {
                    HomogPoly::structural_zero()
                } else {
                    f(p, q, d)
                });
            }
            entries.push(row);
        }
        let entries = check_entries(&twists, gamma, 1, entries)?;
        Ok(CoHiggsFieldP1 {
            split,
            gamma,
            twists,
            entries,
        })
    }

    pub fn split(&self) -> &SplittingType {
        &self.split
    }

    pub fn gamma(&self) -> i64 {
        self.gamma
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn entries(&self) -> &[Vec<HomogPoly>] {
        &self.entries
    }

    pub fn entry(&self, p: usize, q: usize) -> &HomogPoly {
        &self.entries[p][q]
    }

    pub fn entry_degree(&self, p: usize, q: usize) -> i64 {
        prescribed_degree(&self.twists, self.gamma, 1, p, q)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(HomogPoly::is_zero)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        CoHiggsFieldP1 {
            split: self.split.clone(),
            gamma: self.gamma,
            twists: self.twists.clone(),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|e| e.scale(k)).collect())
                .collect(),
        }
    }

    /// View as the level-1 shifted field (same entries).
    pub fn as_shifted(&self) -> ShiftedField {
        ShiftedField {
            split: self.split.clone(),
            gamma: self.gamma,
            level: 1,
            twists: self.twists.clone(),
            entries: self.entries.clone(),
        }
    }
}

impl ShiftedField {
    pub fn zero(split: SplittingType, gamma: i64, level: u32) -> Self {
        assert!(gamma < 0, "target twist must be negative");
        assert!(level >= 1, "level counts compositions, so it starts at 1");
        let twists = split.flat_twists();
        let r = twists.len();
        let entries = (0..r)
            .map(|p| {
                (0..r)
                    .map(|q| HomogPoly::zero(prescribed_degree(&twists, gamma, level, p, q)))
                    .collect()
            })
            .collect();
        ShiftedField {
            split,
            gamma,
            level,
            twists,
            entries,
        }
    }

    pub fn split(&self) -> &SplittingType {
        &self.split
    }

    pub fn gamma(&self) -> i64 {
        self.gamma
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn entries(&self) -> &[Vec<HomogPoly>] {
        &self.entries
    }

    pub fn entry(&self, p: usize, q: usize) -> &HomogPoly {
        &self.entries[p][q]
    }

    pub fn entry_degree(&self, p: usize, q: usize) -> i64 {
        prescribed_degree(&self.twists, self.gamma, self.level, p, q)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(HomogPoly::is_zero)
    }
}

/// Machine-integer snapshot of an entry matrix: one coefficient vector per
/// entry, empty meaning zero. `None` if any coefficient is non-integral or
/// too large, in which case products run on the exact path.
fn small_matrix(m: &[Vec<HomogPoly>]) -> Option<Vec<Vec<Vec<i64>>>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    if e.is_zero() {
                        Some(Vec::new())
                    } else {
                        e.small_int_coeffs()
                    }
                })
                .collect()
        })
        .collect()
}

/// Integer convolution product; bails out (`None`) on any overflow so the
/// caller can redo the computation exactly.
fn matrix_product_small(
    twists: &[i64],
    gamma: i64,
    out_level: u32,
    a: &[Vec<Vec<i64>>],
    b: &[Vec<Vec<i64>>],
) -> Option<Vec<Vec<HomogPoly>>> {
    let r = twists.len();
    let mut out = Vec::with_capacity(r);
    let mut buf: Vec<i64> = Vec::new();
    for p in 0..r {
        let mut row = Vec::with_capacity(r);
        for q in 0..r {
            let target = prescribed_degree(twists, gamma, out_level, p, q);
            if target < 0 {
                row.push(HomogPoly::structural_zero());
                continue;
            }
            buf.clear();
            buf.resize(target as usize + 1, 0);
            for k in 0..r {
                let x = &a[p][k];
                let y = &b[k][q];
                if x.is_empty() || y.is_empty() {
                    continue;
                }
                for (i, &xc) in x.iter().enumerate() {
                    if xc == 0 {
                        continue;
                    }
                    for (j, &yc) in y.iter().enumerate() {
                        let slot = &mut buf[i + j];
                        *slot = slot.checked_add(xc.checked_mul(yc)?)?;
                    }
                }
            }
            row.push(HomogPoly::from_small_ints(target, &buf));
        }
        out.push(row);
    }
    Some(out)
}

fn matrix_product(
    twists: &[i64],
    gamma: i64,
    out_level: u32,
    a: &[Vec<HomogPoly>],
    b: &[Vec<HomogPoly>],
) -> Vec<Vec<HomogPoly>> {
    if let (Some(sa), Some(sb)) = (small_matrix(a), small_matrix(b)) {
        if let Some(out) = matrix_product_small(twists, gamma, out_level, &sa, &sb) {
            return out;
        }
    }
    let r = twists.len();
    (0..r)
        .map(|p| {
            (0..r)
                .map(|q| {
                    let target = prescribed_degree(twists, gamma, out_level, p, q);
                    if target < 0 {
                        return HomogPoly::structural_zero();
                    }
                    let mut acc = HomogPoly::zero(target);
                    for k in 0..r {
                        let x = &a[p][k];
                        let y = &b[k][q];
                        if x.is_zero() || y.is_zero() {
                            continue;
                        }
                        acc = acc.add(&x.mul(y));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Composition of shifted fields over the same bundle: the entry matrices
/// multiply and the levels add. Panics if the bundles or twists differ —
/// that is a caller bug, not a data condition.
pub fn compose(outer: &ShiftedField, inner: &ShiftedField) -> ShiftedField {
    assert_eq!(outer.split, inner.split, "composing over different bundles");
    assert_eq!(outer.gamma, inner.gamma, "composing over different twists");
    let level = outer.level + inner.level;
    ShiftedField {
        split: outer.split.clone(),
        gamma: outer.gamma,
        level,
        twists: outer.twists.clone(),
        entries: matrix_product(
            &outer.twists,
            outer.gamma,
            level,
            &outer.entries,
            &inner.entries,
        ),
    }
}

/// Φ^(i): the i-fold composition with twist bookkeeping. Level 1 is the
/// field itself; once an iterate vanishes all later ones are zero, so the
/// loop short-circuits.
pub fn iterate(phi: &CoHiggsFieldP1, i: u32) -> ShiftedField {
    assert!(i >= 1, "iteration level starts at 1");
    let mut acc = phi.as_shifted();
    while acc.level < i {
        if acc.is_zero() {
            return ShiftedField::zero(phi.split.clone(), phi.gamma, i);
        }
        let level = acc.level + 1;
        acc = ShiftedField {
            split: acc.split,
            gamma: acc.gamma,
            level,
            entries: matrix_product(&acc.twists, acc.gamma, level, &phi.entries, &acc.entries),
            twists: acc.twists,
        };
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no vanishing iterate up to level {0}")]
pub struct NotNilpotentWithin(pub u32);

/// Cap that always suffices: strict block-triangularity kills every field
/// by level block-count + 1 ≤ r + 1.
pub fn default_nilpotency_cap(split: &SplittingType) -> u32 {
    split.rank() + 1
}

/// Least i ≤ cap with Φ^(i) = 0.
pub fn nilpotency_index(phi: &CoHiggsFieldP1, cap: u32) -> Result<u32, NotNilpotentWithin> {
    assert!(cap >= 1, "cap must be positive");
    let mut acc = phi.as_shifted();
    loop {
        if acc.is_zero() {
            return Ok(acc.level);
        }
        if acc.level == cap {
            return Err(NotNilpotentWithin(cap));
        }
        let level = acc.level + 1;
        acc = ShiftedField {
            split: acc.split,
            gamma: acc.gamma,
            level,
            entries: matrix_product(&acc.twists, acc.gamma, level, &phi.entries, &acc.entries),
            twists: acc.twists,
        };
    }
}

/// Exact generic rank of a matrix of forms over the function field.
///
/// Strategy: evaluate at a few deterministic points (a specialization can
/// only lower the rank, so hitting the upper bound min(rows, cols) is an
/// exact early exit), then fall back to fraction-free elimination over
/// univariate polynomials. The answer is exact either way; the seed only
/// affects which shortcut fires.
pub(crate) fn entries_generic_rank(entries: &[Vec<HomogPoly>], seed: u64) -> usize {
    let nrows = entries.len();
    let ncols = entries.first().map_or(0, Vec::len);
    let n = nrows.min(ncols);
    if n == 0 || entries.iter().flatten().all(HomogPoly::is_zero) {
        return 0;
    }
    let mut state = seed;
    let one = Rational::one();
    let mut best = 0;
    for _ in 0..3 {
        let t = int(linalg::next_in_range(&mut state, -41, 41));
        let numeric: Vec<Vec<Rational>> = entries
            .iter()
            .map(|row| row.iter().map(|e| e.eval(&t, &one)).collect())
            .collect();
        best = best.max(linalg::rational_rank(numeric));
        if best == n {
            return n;
        }
    }
    let symbolic: Vec<Vec<UniPoly>> = entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| UniPoly::new(e.dehomogenized_ascending()))
                .collect()
        })
        .collect();
    linalg::poly_matrix_rank(symbolic)
}

pub fn generic_rank_seeded(phi: &CoHiggsFieldP1, seed: u64) -> usize {
    entries_generic_rank(&phi.entries, seed)
}

pub fn generic_rank(phi: &CoHiggsFieldP1) -> usize {
    generic_rank_seeded(phi, DEFAULT_SEED)
}

/// Hom-space dimension for fields on the given split bundle:
/// Σ over block pairs i < j of r_i·r_j·max{0, γ+1+b_i−b_j}. Each pair of
/// summands O(b_j) → O(b_i)(γ) contributes the full space of forms of
/// degree γ+b_i−b_j, which has γ+1+b_i−b_j monomials when non-negative.
pub fn delta_dimension(split: &SplittingType, gamma: i64) -> usize {
    assert!(gamma < 0, "target twist must be negative");
    let blocks = split.blocks();
    let mut total: i64 = 0;
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let (bi, ri) = blocks[i];
            let (bj, rj) = blocks[j];
            let monomials = gamma + 1 + bi - bj;
            if monomials > 0 {
                total += i64::from(ri) * i64::from(rj) * monomials;
            }
        }
    }
    usize::try_from(total).expect("dimension fits usize")
}

/// Monomial basis of Hom(E, E(γ)): one field per (row, column, monomial)
/// triple with non-negative prescribed degree, ordered row-major and then
/// by descending power of the first variable. Length = `delta_dimension`.
pub fn hom_basis(split: &SplittingType, gamma: i64) -> Vec<CoHiggsFieldP1> {
    assert!(gamma < 0, "target twist must be negative");
    let twists = split.flat_twists();
    let r = twists.len();
    let mut basis = Vec::new();
    for p in 0..r {
        for q in 0..r {
            let d = prescribed_degree(&twists, gamma, 1, p, q);
            if d < 0 {
                continue;
            }
            for idx in 0..=usize::try_from(d).expect("degree fits usize") {
                let field = CoHiggsFieldP1::build(split.clone(), gamma, |pp, qq, degree| {
                    if (pp, qq) == (p, q) {
                        HomogPoly::monomial(degree, idx)
                    } else {
                        HomogPoly::zero(degree)
                    }
                })
                .expect("monomial respects the degree rule");
                basis.push(field);
            }
        }
    }
    basis
}

/// True iff the coordinate subbundle spanned by the chosen summands
/// (0-based indices into the flat twist list) is carried into itself: no
/// entry may map a chosen column into an unchosen row.
pub fn invariant_subbundle_check(phi: &CoHiggsFieldP1, summands: &[usize]) -> bool {
    let r = phi.rank();
    let chosen: BTreeSet<usize> = summands.iter().copied().collect();
    assert!(
        !chosen.is_empty() && chosen.len() < r,
        "subset must be non-empty and proper"
    );
    assert!(
        chosen.iter().all(|&i| i < r),
        "summand index out of range"
    );
    for p in (0..r).filter(|p| !chosen.contains(p)) {
        for &q in &chosen {
            if !phi.entry(p, q).is_zero() {
                return false;
            }
        }
    }
    true
}

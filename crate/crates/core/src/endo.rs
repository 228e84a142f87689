//! Endomorphism algebras of split bundles and their commutants with a
//! twisted field: End(E, Φ) = {f : f∘Φ = Φ∘f with the twist carried along}.
//! The commutation condition is a finite exact linear system over the
//! coefficient space of End(E); a pair (E, Φ) is *simple* when only scalars
//! commute.
//!
//! Everything here works at a fixed negative twist because
//! `CoHiggsFieldP1` enforces it at construction; the commutation algebra
//! itself would make sense for any twist.

use crate::classify::two_nilpotent_guarantee;
use crate::curve::CurveContext;
use crate::field::{check_entries, prescribed_degree, CoHiggsFieldP1, FieldError};
use crate::hn::{necessary_condition, HNData, NecessaryConditionFails};
use crate::linalg;
use crate::poly::HomogPoly;
use crate::rational::Rational;
use crate::split::SplittingType;
use num::{One, Zero};
use std::collections::BTreeMap;

/// Untwisted endomorphism of a split bundle: entry (p,q) is homogeneous of
/// degree a_p − a_q (zero space when negative).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endomorphism {
    split: SplittingType,
    twists: Vec<i64>,
    entries: Vec<Vec<HomogPoly>>,
}

/// Coarse shape of a basis endomorphism, for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndoKind {
    /// A rational multiple of the identity.
    Scalar,
    /// Supported strictly below the twist diagonal: f_pq = 0 whenever
    /// a_p = a_q (in particular the whole diagonal vanishes).
    StrictlyTriangular,
    /// Anything else, e.g. a single diagonal idempotent.
    Mixed,
}

impl Endomorphism {
    pub fn new(
        split: SplittingType,
        entries: Vec<Vec<HomogPoly>>,
    ) -> Result<Self, FieldError> {
        let twists = split.flat_twists();
        let entries = check_entries(&twists, 0, 1, entries)?;
        Ok(Endomorphism {
            split,
            twists,
            entries,
        })
    }

    pub fn identity(split: SplittingType) -> Self {
        let twists = split.flat_twists();
        let r = twists.len();
        let entries = (0..r)
            .map(|p| {
                (0..r)
                    .map(|q| {
                        if p == q {
                            HomogPoly::constant(Rational::one())
                        } else {
                            HomogPoly::zero(twists[p] - twists[q])
                        }
                    })
                    .collect()
            })
            .collect();
        Endomorphism {
            split,
            twists,
            entries,
        }
    }

    pub fn split(&self) -> &SplittingType {
        &self.split
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

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(HomogPoly::is_zero)
    }

    pub fn kind(&self) -> EndoKind {
        let r = self.rank();
        let diag_constant = self.entries[0][0].coeffs().first().cloned();
        let mut scalar = true;
        let mut strict = true;
        for p in 0..r {
            for q in 0..r {
                let e = &self.entries[p][q];
                if self.twists[p] == self.twists[q] {
                    if !e.is_zero() {
                        strict = false;
                    }
                    let expected = if p == q {
                        diag_constant.clone()
                    } else {
                        Some(Rational::zero())
                    };
                    if e.coeffs().first().cloned().or(Some(Rational::zero())) != expected {
                        scalar = false;
                    }
                } else if !e.is_zero() {
                    scalar = false;
                }
            }
        }
        if scalar {
            EndoKind::Scalar
        } else if strict {
            EndoKind::StrictlyTriangular
        } else {
            EndoKind::Mixed
        }
    }
}

/// A subspace of End(E) presented by a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndoSpace {
    pub dimension: usize,
    pub basis: Vec<Endomorphism>,
    pub contains_identity: bool,
}

/// dim End(E) = Σ_{p,q} max{0, a_p − a_q + 1}.
pub fn end_dim(split: &SplittingType) -> usize {
    let a = split.flat_twists();
    let mut total = 0i64;
    for &ap in &a {
        for &aq in &a {
            total += (ap - aq + 1).max(0);
        }
    }
    usize::try_from(total).expect("dimension fits usize")
}

/// Column layout of the End(E) coefficient space: unknowns ordered
/// row-major over entries, then by descending first-variable power.
struct EndoLayout {
    twists: Vec<i64>,
    /// offsets[p][q] = first column of entry (p,q), or None when the slot
    /// is structurally zero
    offsets: Vec<Vec<Option<usize>>>,
    columns: usize,
}

impl EndoLayout {
    fn new(split: &SplittingType) -> Self {
        let twists = split.flat_twists();
        let r = twists.len();
        let mut offsets = vec![vec![None; r]; r];
        let mut col = 0usize;
        for p in 0..r {
            for q in 0..r {
                let d = twists[p] - twists[q];
                if d >= 0 {
                    offsets[p][q] = Some(col);
                    col += usize::try_from(d).unwrap() + 1;
                }
            }
        }
        EndoLayout {
            twists,
            offsets,
            columns: col,
        }
    }

    fn vector_to_endo(&self, split: &SplittingType, v: &[Rational]) -> Endomorphism {
        let r = self.twists.len();
        let entries = (0..r)
            .map(|p| {
                (0..r)
                    .map(|q| match self.offsets[p][q] {
                        None => HomogPoly::structural_zero(),
                        Some(base) => {
                            let d = self.twists[p] - self.twists[q];
                            let n = usize::try_from(d).unwrap() + 1;
                            HomogPoly::new(d, v[base..base + n].to_vec())
                                .expect("layout length matches degree")
                        }
                    })
                    .collect()
            })
            .collect();
        Endomorphism {
            split: split.clone(),
            twists: self.twists.clone(),
            entries,
        }
    }
}

/// Sparse rows of the commutation system f·Φ − Φ·f = 0 over the End(E)
/// coefficient columns: one row per monomial coefficient of each entry of
/// the commutator.
fn commutation_rows(phi: &CoHiggsFieldP1, layout: &EndoLayout) -> Vec<Vec<(usize, Rational)>> {
    let r = phi.rank();
    let gamma = phi.gamma();
    let twists = &layout.twists;
    let mut rows: Vec<BTreeMap<usize, Rational>> = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let target = prescribed_degree(twists, gamma, 1, i, j);
            if target < 0 {
                continue;
            }
            let nrows = usize::try_from(target).unwrap() + 1;
            let mut slot_rows: Vec<BTreeMap<usize, Rational>> =
                vec![BTreeMap::new(); nrows];
            // + f_ik · phi_kj
            for k in 0..r {
                let Some(base) = layout.offsets[i][k] else {
                    continue;
                };
                let p_entry = phi.entry(k, j);
                if p_entry.is_zero() {
                    continue;
                }
                for (u, cu) in p_entry.coeffs().iter().enumerate() {
                    if cu.is_zero() {
                        continue;
                    }
                    let f_len = usize::try_from(twists[i] - twists[k]).unwrap() + 1;
                    for v in 0..f_len {
                        *slot_rows[u + v].entry(base + v).or_default() += cu;
                    }
                }
            }
            // − phi_ik · f_kj
            for k in 0..r {
                let Some(base) = layout.offsets[k][j] else {
                    continue;
                };
                let p_entry = phi.entry(i, k);
                if p_entry.is_zero() {
                    continue;
                }
                for (u, cu) in p_entry.coeffs().iter().enumerate() {
                    if cu.is_zero() {
                        continue;
                    }
                    let f_len = usize::try_from(twists[k] - twists[j]).unwrap() + 1;
                    for v in 0..f_len {
                        *slot_rows[u + v].entry(base + v).or_default() -= cu;
                    }
                }
            }
            rows.extend(slot_rows);
        }
    }
    rows.into_iter()
        .map(|m| {
            m.into_iter()
                .filter(|(_, v)| !v.is_zero())
                .collect::<Vec<_>>()
        })
        .filter(|row| !row.is_empty())
        .collect()
}

/// Dimension of the commutant, without materializing a basis.
pub fn commutant_dim(phi: &CoHiggsFieldP1) -> usize {
    let layout = EndoLayout::new(phi.split());
    let rows = commutation_rows(phi, &layout);
    layout.columns - linalg::sparse_rank(rows, layout.columns)
}

/// Verify f∘Φ = Φ∘f by direct polynomial arithmetic.
fn commutes(f: &Endomorphism, phi: &CoHiggsFieldP1) -> bool {
    let r = phi.rank();
    for i in 0..r {
        for j in 0..r {
            let mut acc = HomogPoly::structural_zero();
            for k in 0..r {
                acc = acc.add(&f.entry(i, k).mul(phi.entry(k, j)));
                let neg = phi.entry(i, k).mul(f.entry(k, j)).scale(&-Rational::one());
                acc = acc.add(&neg);
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Full commutant End(E, Φ): dimension, an explicit basis, and the
/// (substitution-checked) fact that the identity commutes.
pub fn commutant(phi: &CoHiggsFieldP1) -> EndoSpace {
    let split = phi.split().clone();
    let layout = EndoLayout::new(&split);
    let sparse = commutation_rows(phi, &layout);
    let dense: Vec<Vec<Rational>> = sparse
        .iter()
        .map(|row| {
            let mut v = vec![Rational::zero(); layout.columns];
            for (c, val) in row {
                v[*c] = val.clone();
            }
            v
        })
        .collect();
    let basis: Vec<Endomorphism> = linalg::nullspace(dense, layout.columns)
        .iter()
        .map(|v| layout.vector_to_endo(&split, v))
        .collect();
    let contains_identity = commutes(&Endomorphism::identity(split), phi);
    debug_assert!(basis.iter().all(|f| commutes(f, phi)));
    EndoSpace {
        dimension: basis.len(),
        basis,
        contains_identity,
    }
}

/// Simplicity of the pair: only scalars commute.
pub fn is_simple_pair(phi: &CoHiggsFieldP1) -> bool {
    commutant_dim(phi) == 1
}

/// Numeric certificate that *every* pair (E, Φ ≠ 0) with this profile is
/// non-simple. True when g ≥ 2 (a twisted hom between the outer subquotients
/// survives for Euler-characteristic reasons), or when the slope gap
/// μ_min < μ_max + g − 1 provides that hom and every field is 2-nilpotent
/// so the induced map actually commutes. Profiles that cannot carry a
/// nonzero field at all are rejected.
pub fn nonsimplicity_certificate(
    ctx: &CurveContext,
    data: &HNData,
) -> Result<bool, NecessaryConditionFails> {
    assert!(data.block_count() >= 2, "certificate needs s >= 2");
    if !necessary_condition(ctx, data) {
        return Err(NecessaryConditionFails);
    }
    let g = ctx.genus();
    if g >= 2 {
        return Ok(true);
    }
    let gap = data.mu_plus() + crate::rational::int(i64::from(g) - 1);
    Ok(*data.mu_minus() < gap && two_nilpotent_guarantee(ctx, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hn::validate_hn;
    use crate::rational::{int, rat};

    fn st(blocks: &[(i64, u32)]) -> SplittingType {
        SplittingType::new(blocks.to_vec()).unwrap()
    }

    #[test]
    fn end_dim_examples() {
        assert_eq!(end_dim(&st(&[(7, 1)])), 1);
        assert_eq!(end_dim(&st(&[(1, 1), (0, 1)])), 4);
        assert_eq!(end_dim(&st(&[(0, 1), (-3, 1)])), 6);
        assert_eq!(end_dim(&st(&[(0, 3)])), 9);
    }

    #[test]
    fn commutant_of_zero_is_everything() {
        for split in [st(&[(1, 1), (0, 1)]), st(&[(0, 1), (-3, 1)]), st(&[(2, 2)])] {
            let zero = CoHiggsFieldP1::zero(split.clone(), -2);
            let space = commutant(&zero);
            assert_eq!(space.dimension, end_dim(&split));
            assert_eq!(space.basis.len(), space.dimension);
            assert!(space.contains_identity);
            assert_eq!(commutant_dim(&zero), space.dimension);
        }
        // zero on a line bundle: the scalars, and nothing else
        let line = CoHiggsFieldP1::zero(st(&[(4, 1)]), -1);
        assert!(is_simple_pair(&line));
        assert!(!is_simple_pair(&CoHiggsFieldP1::zero(st(&[(1, 1), (0, 1)]), -1)));
    }

    fn single_entry_field(split: SplittingType, gamma: i64, poly: HomogPoly) -> CoHiggsFieldP1 {
        CoHiggsFieldP1::build(split, gamma, |p, q, d| {
            if (p, q) == (0, 1) {
                poly.clone()
            } else {
                HomogPoly::zero(d)
            }
        })
        .unwrap()
    }

    #[test]
    fn worked_instance_two_blocks() {
        // a = (0,-3), γ = -2: any nonzero entry imposes exactly the single
        // constraint "the two diagonal scalars agree", leaving dimension 5
        let split = st(&[(0, 1), (-3, 1)]);
        for entry in [
            HomogPoly::monomial(1, 0),                      // x
            HomogPoly::monomial(1, 1),                      // y
            HomogPoly::new(1, vec![int(1), int(2)]).unwrap(), // x + 2y
        ] {
            let phi = single_entry_field(split.clone(), -2, entry);
            let space = commutant(&phi);
            assert_eq!(space.dimension, 5);
            assert!(space.contains_identity);
            assert!(!is_simple_pair(&phi));
        }

        // basis shape: the scalar direction plus the four strictly
        // triangular off-diagonal directions
        let phi = single_entry_field(split, -2, HomogPoly::monomial(1, 0));
        let kinds: Vec<EndoKind> = commutant(&phi).basis.iter().map(Endomorphism::kind).collect();
        assert_eq!(
            kinds.iter().filter(|k| **k == EndoKind::Scalar).count(),
            1
        );
        assert_eq!(
            kinds
                .iter()
                .filter(|k| **k == EndoKind::StrictlyTriangular)
                .count(),
            4
        );
    }

    #[test]
    fn worked_instance_three_blocks() {
        // a = (1,0,-1), γ = -1, nonzero constants on the superdiagonal:
        // diagonal scalars collapse to one and the (0,1)/(1,2) strips pair
        // up, leaving 10 − 4 = 6 dimensions
        let phi = CoHiggsFieldP1::build(st(&[(1, 1), (0, 1), (-1, 1)]), -1, |p, q, d| {
            match (p, q) {
                (0, 1) => HomogPoly::constant(int(2)),
                (1, 2) => HomogPoly::constant(int(3)),
                _ => HomogPoly::zero(d),
            }
        })
        .unwrap();
        assert_eq!(end_dim(phi.split()), 10);
        let space = commutant(&phi);
        assert_eq!(space.dimension, 6);
        assert!(space.dimension >= 2);
        assert!(space.contains_identity);
        for f in &space.basis {
            assert!(commutes(f, &phi));
        }
    }

    #[test]
    fn basis_kinds_on_free_space() {
        let zero = CoHiggsFieldP1::zero(st(&[(1, 1), (0, 1)]), -1);
        let kinds: Vec<EndoKind> =
            commutant(&zero).basis.iter().map(Endomorphism::kind).collect();
        // unit vectors: e_(0,0) and e_(1,1) are neither scalar nor strictly
        // triangular; the two monomials at (0,1) are strictly triangular
        assert_eq!(kinds.iter().filter(|k| **k == EndoKind::Mixed).count(), 2);
        assert_eq!(
            kinds
                .iter()
                .filter(|k| **k == EndoKind::StrictlyTriangular)
                .count(),
            2
        );
        assert_eq!(Endomorphism::identity(st(&[(1, 1), (0, 1)])).kind(), EndoKind::Scalar);
    }

    #[test]
    fn scaling_leaves_dimension_alone() {
        let phi = CoHiggsFieldP1::build(st(&[(2, 1), (0, 2)]), -1, |p, q, d| {
            if p == 0 && q > 0 {
                HomogPoly::monomial(d, q - 1)
            } else {
                HomogPoly::zero(d)
            }
        })
        .unwrap();
        let base = commutant_dim(&phi);
        for k in [int(2), rat(-1, 3), int(7)] {
            assert_eq!(commutant_dim(&phi.scale(&k)), base);
        }
    }

    #[test]
    fn conjugation_invariance() {
        // E = O(0)² ⊕ O(-2), Φ with entries (0,2) = x, (1,2) = y;
        // conjugating by I + e_(0,1) (a constant automorphism mixing the
        // equal-twist summands) replaces row 0 by row0 − row1
        let split = st(&[(0, 2), (-2, 1)]);
        let phi = CoHiggsFieldP1::build(split.clone(), -1, |p, q, d| match (p, q) {
            (0, 2) => HomogPoly::monomial(d, 0),
            (1, 2) => HomogPoly::monomial(d, 1),
            _ => HomogPoly::zero(d),
        })
        .unwrap();
        let conj = CoHiggsFieldP1::build(split, -1, |p, q, d| match (p, q) {
            (0, 2) => HomogPoly::new(1, vec![int(1), int(-1)]).unwrap(), // x - y
            (1, 2) => HomogPoly::monomial(d, 1),
            _ => HomogPoly::zero(d),
        })
        .unwrap();
        assert_eq!(commutant_dim(&phi), commutant_dim(&conj));
    }

    #[test]
    fn certificate_examples() {
        let g2 = CurveContext::new(2, 0).unwrap();
        let data = validate_hn(&[(1, 0), (1, -2)], &g2).unwrap();
        assert_eq!(nonsimplicity_certificate(&g2, &data), Ok(true));

        let p1 = CurveContext::new(0, 4).unwrap(); // gamma = -2
        let data = validate_hn(&[(1, 0), (1, -3)], &p1).unwrap();
        assert_eq!(nonsimplicity_certificate(&p1, &data), Ok(true));

        let p1_narrow = CurveContext::new(0, 3).unwrap(); // gamma = -1
        let boundary = validate_hn(&[(1, 0), (1, -1)], &p1_narrow).unwrap();
        assert_eq!(nonsimplicity_certificate(&p1_narrow, &boundary), Ok(false));

        // profile that carries no nonzero field at all
        let none = validate_hn(&[(1, 0), (1, -1)], &g2).unwrap();
        assert_eq!(
            nonsimplicity_certificate(&g2, &none),
            Err(NecessaryConditionFails)
        );
    }

    #[test]
    fn certificate_is_honest_on_p1() {
        // wherever the certificate fires for genus 0, every nonzero basis
        // field really does have commutant dimension ≥ 2
        let p1 = CurveContext::new(0, 4).unwrap(); // gamma = -2
        for (b1, b2) in [(0i64, -3i64), (1, -2), (2, -2), (0, -4)] {
            let split = st(&[(b1, 1), (b2, 2)]);
            let data = validate_hn(
                &split
                    .blocks()
                    .iter()
                    .map(|&(b, r)| (r, b * i64::from(r)))
                    .collect::<Vec<_>>(),
                &p1,
            )
            .unwrap();
            let Ok(true) = nonsimplicity_certificate(&p1, &data) else {
                continue;
            };
            for phi in crate::field::hom_basis(&split, p1.gamma()) {
                assert!(
                    commutant_dim(&phi) >= 2,
                    "certificate lied on {split:?} for a basis field"
                );
            }
        }
    }
}

//! Exact linear algebra over the rationals and over univariate polynomial
//! entries, plus the deterministic small-integer stream used wherever the
//! engine needs "generic" values. Nothing here is probabilistic in its
//! results: evaluation shortcuts are always backed by an exact fallback.

use crate::rational::Rational;
use num::{One, Zero};

/// splitmix64 step: the standard 64-bit finalizer-based generator. Small,
/// seedable, stable across platforms — exactly what deterministic test
/// streams need.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Uniform draw from the inclusive range [lo, hi].
pub fn next_in_range(state: &mut u64, lo: i64, hi: i64) -> i64 {
    debug_assert!(lo <= hi);
    let span = (hi - lo) as u64 + 1;
    lo + (splitmix64(state) % span) as i64
}

/// Rank of a dense rational matrix by Gaussian elimination (exact).
pub fn rational_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let Some(p) = (rank..nrows).find(|&i| !rows[i][col].is_zero()) else {
            col += 1;
            continue;
        };
        rows.swap(rank, p);
        let (pivot_row, rest) = {
            let (a, b) = rows.split_at_mut(rank + 1);
            (&a[rank], b)
        };
        let pivot = pivot_row[col].clone();
        for row in rest.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot;
            for j in col..ncols {
                let delta = &pivot_row[j] * &factor;
                row[j] -= delta;
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Rank of a sparse rational matrix given as rows of (column, value) pairs,
/// columns strictly increasing within each row. Eliminates with a
/// smallest-row-first pivot choice to limit fill-in; exact throughout.
pub fn sparse_rank(rows: Vec<Vec<(usize, Rational)>>, ncols: usize) -> usize {
    // pivot_for_col[c] = index into `reduced` of the row pivoting column c
    let mut pivot_for_col: Vec<Option<usize>> = vec![None; ncols];
    let mut reduced: Vec<Vec<(usize, Rational)>> = Vec::new();
    let mut queue: Vec<Vec<(usize, Rational)>> = rows;
    // shortest rows first: single-entry rows eliminate a column outright
    queue.sort_by_key(Vec::len);
    for mut row in queue {
        loop {
            row.retain(|(_, v)| !v.is_zero());
            let Some(&(lead, ref lead_val)) = row.first() else {
                break;
            };
            match pivot_for_col[lead] {
                None => {
                    let inv = lead_val.clone();
                    for (_, v) in &mut row {
                        *v = &*v / &inv;
                    }
                    pivot_for_col[lead] = Some(reduced.len());
                    reduced.push(row);
                    break;
                }
                Some(pi) => {
                    let coef = lead_val.clone();
                    row = sparse_axpy(&row, &coef, &reduced[pi]);
                }
            }
        }
    }
    reduced.len()
}

/// row - coef * pivot, merging sorted sparse representations.
fn sparse_axpy(
    row: &[(usize, Rational)],
    coef: &Rational,
    pivot: &[(usize, Rational)],
) -> Vec<(usize, Rational)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        match (row.get(i), pivot.get(j)) {
            (Some((ci, vi)), Some((cj, vj))) if ci == cj => {
                let v = vi - &(coef * vj);
                if !v.is_zero() {
                    out.push((*ci, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ci, vi)), Some((cj, _))) if ci < cj => {
                out.push((*ci, vi.clone()));
                i += 1;
            }
            (Some(_), Some((cj, vj))) => {
                let v = -(coef * vj);
                if !v.is_zero() {
                    out.push((*cj, v));
                }
                j += 1;
            }
            (Some((ci, vi)), None) => {
                out.push((*ci, vi.clone()));
                i += 1;
            }
            (None, Some((cj, vj))) => {
                let v = -(coef * vj);
                if !v.is_zero() {
                    out.push((*cj, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Basis of the solution space of A·x = 0 for a dense rational matrix,
/// via reduced row echelon form. Basis vectors are produced one per free
/// column, in ascending column order, with the free coordinate set to 1.
pub fn nullspace(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let nrows = rows.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].clone();
        for v in &mut rows[r] {
            *v = &*v / &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..ncols {
                    let delta = &rows[r][j] * &f;
                    rows[i][j] -= delta;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
        if r == nrows {
            break;
        }
    }
    let mut basis = Vec::new();
    let pivot_set: std::collections::BTreeSet<usize> = pivot_cols.iter().copied().collect();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (row_idx, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -rows[row_idx][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Dense univariate polynomial with exact rational coefficients, ascending
/// powers, trailing zeros trimmed. Only what the rank routines need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly {
            coeffs: vec![Rational::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        UniPoly::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
            out.push(a - b);
        }
        UniPoly::new(out)
    }

    /// Exact quotient; panics if the division leaves a remainder (the
    /// fraction-free elimination below guarantees it never does).
    pub fn div_exact(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Self::zero();
        }
        let mut rem = self.coeffs.clone();
        let dn = divisor.coeffs.len();
        assert!(rem.len() >= dn, "exact division with short dividend");
        let lead = divisor.coeffs.last().expect("nonzero divisor");
        let mut quot = vec![Rational::zero(); rem.len() - dn + 1];
        for qi in (0..quot.len()).rev() {
            let c = &rem[qi + dn - 1] / lead;
            if c.is_zero() {
                continue;
            }
            for (k, d) in divisor.coeffs.iter().enumerate() {
                let delta = d * &c;
                rem[qi + k] -= delta;
            }
            quot[qi] = c;
        }
        assert!(
            rem.iter().all(Zero::is_zero),
            "inexact polynomial division in fraction-free elimination"
        );
        UniPoly::new(quot)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// Max-norm of the coefficient list (used only to pick small pivots).
    fn complexity(&self) -> usize {
        self.coeffs.len()
    }
}

/// Exact rank of a matrix of univariate polynomials over the rational
/// function field, by Bareiss fraction-free elimination with full pivoting.
pub fn poly_matrix_rank(mut m: Vec<Vec<UniPoly>>) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = UniPoly::one();
    let mut k = 0;
    loop {
        if k >= nrows || k >= ncols {
            return k;
        }
        // full pivot search, preferring low-degree entries
        let mut best: Option<(usize, usize)> = None;
        for i in k..nrows {
            for j in k..ncols {
                if m[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| m[i][j].complexity() < m[bi][bj].complexity()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else {
            return k;
        };
        m.swap(k, pi);
        for row in &mut m {
            row.swap(k, pj);
        }
        let pivot = m[k][k].clone();
        for i in k + 1..nrows {
            for j in k + 1..ncols {
                let t = pivot.mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.div_exact(&prev);
            }
            m[i][k] = UniPoly::zero();
        }
        prev = pivot;
        k += 1;
    }
}

//! Homogeneous forms in two variables with exact rational coefficients.
//!
//! A degree-d form is stored as d+1 coefficients in descending powers of the
//! first variable: `coeffs[i]` multiplies x^(d-i) y^i. Degree −1 is reserved
//! for *structural* zeros — matrix entries whose prescribed degree is
//! negative and therefore hold the zero space rather than a zero form.

use crate::rational::{format_rational, int, Rational};
use num::Zero;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    degree: i64,
    coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("degree {degree} needs {expected} coefficients, got {found}")]
    LengthMismatch {
        degree: i64,
        expected: usize,
        found: usize,
    },
}

impl HomogPoly {
    /// A form of the given degree. Negative degrees must come with no
    /// coefficients and normalize to the structural zero.
    pub fn new(degree: i64, coeffs: Vec<Rational>) -> Result<Self, PolyError> {
        let expected = usize::try_from(degree + 1).unwrap_or(0);
        if coeffs.len() != expected {
            return Err(PolyError::LengthMismatch {
                degree,
                expected,
                found: coeffs.len(),
            });
        }
        if degree < 0 {
            return Ok(Self::structural_zero());
        }
        Ok(HomogPoly { degree, coeffs })
    }

    /// Zero form of the given degree; negative degrees give the structural zero.
    pub fn zero(degree: i64) -> Self {
        if degree < 0 {
            return Self::structural_zero();
        }
        let n = usize::try_from(degree + 1).expect("degree fits usize");
        HomogPoly {
            degree,
            coeffs: vec![Rational::zero(); n],
        }
    }

    pub fn structural_zero() -> Self {
        HomogPoly {
            degree: -1,
            coeffs: Vec::new(),
        }
    }

    /// x^(degree-idx) y^idx with coefficient one.
    pub fn monomial(degree: i64, idx: usize) -> Self {
        let mut p = Self::zero(degree);
        assert!(
            degree >= 0 && idx <= usize::try_from(degree).unwrap(),
            "monomial index out of range"
        );
        p.coeffs[idx] = int(1);
        p
    }

    pub fn constant(value: Rational) -> Self {
        HomogPoly {
            degree: 0,
            coeffs: vec![value],
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_structural_zero(&self) -> bool {
        self.degree < 0
    }

    /// True for the structural zero and for all-zero coefficient vectors.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Sum of two forms. Structural zeros act as identities; otherwise the
    /// degrees must agree (mismatches are caller bugs, not data errors).
    pub fn add(&self, other: &Self) -> Self {
        if self.is_structural_zero() {
            return other.clone();
        }
        if other.is_structural_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of unequal degree");
        HomogPoly {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Product of two forms; structural zero absorbs.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_structural_zero() || other.is_structural_zero() {
            return Self::structural_zero();
        }
        let degree = self.degree + other.degree;
        let mut out = Self::zero(degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if self.is_structural_zero() {
            return Self::structural_zero();
        }
        HomogPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Exact evaluation at a point. Horner form in y over descending x
    /// powers: ((c_0 x + c_1 y) x + c_2 y^2) … — equivalently accumulate
    /// acc = acc*x + c_i*y^i.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut ypow = int(1);
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = acc * x;
            if !c.is_zero() {
                acc += c * &ypow;
            }
            if i + 1 < self.coeffs.len() {
                ypow *= y;
            }
        }
        acc
    }

    /// Coefficients read as a univariate polynomial in t = x/y after
    /// clearing y^degree: ascending powers of t.
    pub fn dehomogenized_ascending(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.coeffs.to_vec();
        v.reverse();
        v
    }

    /// Coefficient vector as machine integers, if every coefficient is an
    /// integer that fits comfortably (headroom left for convolution sums).
    /// Fuel for the fast path in matrix products; `None` means "use exact
    /// arithmetic".
    pub(crate) fn small_int_coeffs(&self) -> Option<Vec<i64>> {
        const LIMIT: i64 = 1 << 40;
        self.coeffs
            .iter()
            .map(|c| {
                if !c.is_integer() {
                    return None;
                }
                let v = i64::try_from(c.numer()).ok()?;
                (v.abs() < LIMIT).then_some(v)
            })
            .collect()
    }

    /// Build from machine-integer coefficients (descending first-variable
    /// powers), for fast-path results.
    pub(crate) fn from_small_ints(degree: i64, coeffs: &[i64]) -> Self {
        debug_assert_eq!(coeffs.len(), usize::try_from(degree + 1).unwrap_or(0));
        if degree < 0 {
            return Self::structural_zero();
        }
        HomogPoly {
            degree,
            coeffs: coeffs.iter().map(|&v| int(v)).collect(),
        }
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let d = usize::try_from(self.degree).unwrap();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let xe = d - i;
            let ye = i;
            let is_constant_term = xe == 0 && ye == 0;
            if *c != int(1) || is_constant_term {
                write!(f, "{}", format_rational(c))?;
                if !is_constant_term {
                    write!(f, "*")?;
                }
            }
            match (xe, ye) {
                (0, 0) => {}
                (1, 0) => write!(f, "x")?,
                (e, 0) => write!(f, "x^{e}")?,
                (0, 1) => write!(f, "y")?,
                (0, e) => write!(f, "y^{e}")?,
                (1, 1) => write!(f, "x*y")?,
                (1, e) => write!(f, "x*y^{e}")?,
                (e, 1) => write!(f, "x^{e}*y")?,
                (a, b) => write!(f, "x^{a}*y^{b}")?,
            }
        }
        Ok(())
    }
}

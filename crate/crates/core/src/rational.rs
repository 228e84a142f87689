//! Exact rational scalars.
//!
//! Slopes, polynomial coefficients and linear-algebra entries are all
//! arbitrary-precision rationals kept in lowest terms with a positive
//! denominator. `num::BigRational` already guarantees that canonical form
//! and compares values exactly, so we re-export it under the name the rest
//! of the crate uses.

use num::bigint::BigInt;
use num::BigRational;

pub type Rational = BigRational;

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Floor of an exact rational as an `i64`.
///
/// Inputs in this crate come from slopes of small profiles, so the floor
/// always fits; the conversion is checked anyway.
pub fn floor_i64(q: &Rational) -> i64 {
    let f = q.floor();
    let (num, _) = f.into();
    i64::try_from(&num).expect("rational floor out of i64 range")
}

/// Render in the `p/q` form used by the reporting layer (`p` when q = 1).
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Parse `p` or `p/q` (lowest terms not required; the result is reduced).
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let a = rat(2, -4);
        let b = rat(-1, 2);
        assert_eq!(a, b);
        assert_eq!(a.numer(), b.numer());
        assert!(a.denom() > &BigInt::from(0));
        assert_eq!(format_rational(&a), "-1/2");
        assert_eq!(format_rational(&int(7)), "7");
    }

    #[test]
    fn exact_comparison_without_division() {
        // 1/3 < 34/100 even though both round to 0.33
        assert!(rat(1, 3) < rat(34, 100));
        assert!(rat(-7, 2) < rat(-10, 3));
    }

    #[test]
    fn floor_values() {
        assert_eq!(floor_i64(&rat(7, 2)), 3);
        assert_eq!(floor_i64(&rat(-7, 2)), -4);
        assert_eq!(floor_i64(&int(-3)), -3);
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["3/4", "-3/4", "5", "0", "-12/8"] {
            let q = parse_rational(s).unwrap();
            let back = parse_rational(&format_rational(&q)).unwrap();
            assert_eq!(q, back);
        }
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }
}

//! The base curve with marked points.
//!
//! All structure theory here lives on a smooth projective curve of genus
//! `g` carrying `m` distinct marked points. The only quantity the numeric
//! layer ever needs is the twist weight `gamma = 2 - 2g - m`, the degree of
//! the logarithmic tangent sheaf. Every statement in this crate assumes
//! `gamma < 0`; contexts violating that are unrepresentable.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CurveContext {
    genus: u32,
    marked_points: u32,
    gamma: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("gamma = 2 - 2g - m = {0} is non-negative; this theory requires gamma < 0")]
    GammaNonNegative(i64),
}

impl CurveContext {
    pub fn new(genus: u32, marked_points: u32) -> Result<Self, CurveError> {
        let gamma = 2 - 2 * i64::from(genus) - i64::from(marked_points);
        if gamma >= 0 {
            return Err(CurveError::GammaNonNegative(gamma));
        }
        Ok(CurveContext {
            genus,
            marked_points,
            gamma,
        })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn marked_points(&self) -> u32 {
        self.marked_points
    }

    /// Degree of the logarithmic tangent sheaf; always negative.
    pub fn gamma(&self) -> i64 {
        self.gamma
    }
}

/// Euler characteristic of a bundle of the given rank and degree:
/// `chi = d + r(1 - g)`.
pub fn euler_char(rank: u32, degree: i64, genus: u32) -> i64 {
    degree + i64::from(rank) * (1 - i64::from(genus))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert_eq!(CurveContext::new(2, 0).unwrap().gamma(), -2);
        assert_eq!(CurveContext::new(1, 1).unwrap().gamma(), -1);
        assert_eq!(CurveContext::new(0, 3).unwrap().gamma(), -1);
        assert_eq!(CurveContext::new(0, 7).unwrap().gamma(), -5);
    }

    #[test]
    fn rejects_nonnegative_gamma() {
        // g=1, m=0 gives gamma = 0; g=0, m<=2 gives gamma > 0
        assert_eq!(
            CurveContext::new(1, 0),
            Err(CurveError::GammaNonNegative(0))
        );
        assert_eq!(
            CurveContext::new(0, 0),
            Err(CurveError::GammaNonNegative(2))
        );
        assert_eq!(
            CurveContext::new(0, 2),
            Err(CurveError::GammaNonNegative(0))
        );
    }

    #[test]
    fn euler_characteristic() {
        assert_eq!(euler_char(2, 3, 0), 5);
        assert_eq!(euler_char(3, -3, 1), -3);
        assert_eq!(euler_char(1, 0, 2), -1);
        // additivity in degree and rank
        assert_eq!(
            euler_char(5, 4, 3),
            euler_char(2, 1, 3) + euler_char(3, 3, 3)
        );
    }
}

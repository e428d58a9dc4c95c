//! Exact nonnegative rationals.
//!
//! Thresholds in this crate ("appears at least `tau * S` times", "agree on
//! at least `(1 - eps) * w` positions", "at most `alpha * W` flips") are
//! compared in integer arithmetic so that verdicts never depend on float
//! rounding.

use core::cmp::Ordering;
use core::fmt;

/// A nonnegative rational `num / den` with `den > 0`. Not kept in lowest
/// terms; comparisons cross-multiply in `u128`.
#[derive(Clone, Copy, Debug)]
pub struct Frac {
    num: u64,
    den: u64,
}

/// Error for a zero denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroDenominator;

impl fmt::Display for ZeroDenominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fraction denominator must be nonzero")
    }
}

impl core::error::Error for ZeroDenominator {}

impl Frac {
    pub const ZERO: Frac = Frac { num: 0, den: 1 };
    pub const ONE: Frac = Frac { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Frac, ZeroDenominator> {
        if den == 0 {
            return Err(ZeroDenominator);
        }
        Ok(Frac { num, den })
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// `self / 2` exactly.
    pub fn halved(self) -> Frac {
        if self.num.is_multiple_of(2) {
            Frac { num: self.num / 2, den: self.den }
        } else {
            Frac { num: self.num, den: self.den.saturating_mul(2) }
        }
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `floor(self * n)`.
    pub fn mul_floor(self, n: u64) -> u64 {
        ((self.num as u128 * n as u128) / self.den as u128) as u64
    }

    /// `ceil((1 - self) * n)`; saturates at 0 when `self > 1`.
    pub fn complement_mul_ceil(self, n: u64) -> u64 {
        let rest = self.den.saturating_sub(self.num) as u128;
        (rest * n as u128).div_ceil(self.den as u128) as u64
    }

    /// `value <= self * n`, exactly.
    pub fn ge_scaled(self, value: u64, n: u64) -> bool {
        value as u128 * self.den as u128 <= self.num as u128 * n as u128
    }

    /// `value >= self * n`, exactly.
    pub fn le_scaled(self, value: u64, n: u64) -> bool {
        value as u128 * self.den as u128 >= self.num as u128 * n as u128
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }
}

impl Eq for Frac {}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_denominator() {
        assert_eq!(Frac::new(1, 0), Err(ZeroDenominator));
    }

    #[test]
    fn threshold_comparisons_are_exact() {
        let tau = Frac::new(1, 16).unwrap();
        // count >= tau * S with S = 48: threshold is 3.
        assert!(tau.le_scaled(3, 48));
        assert!(!tau.le_scaled(2, 48));
        // value <= alpha * n
        let alpha = Frac::new(2, 10).unwrap();
        assert!(alpha.ge_scaled(2, 10));
        assert!(!alpha.ge_scaled(3, 10));
    }

    #[test]
    fn complement_ceil_matches_hand_values() {
        // ceil((1 - 1/4) * 4) = 3
        assert_eq!(Frac::new(1, 4).unwrap().complement_mul_ceil(4), 3);
        // eps tight enough that the threshold degenerates to w itself
        assert_eq!(Frac::new(1, 100).unwrap().complement_mul_ceil(5), 5);
        assert_eq!(Frac::ONE.complement_mul_ceil(7), 0);
    }

    #[test]
    fn ordering_cross_multiplies() {
        let a = Frac::new(1, 3).unwrap();
        let b = Frac::new(2, 6).unwrap();
        let c = Frac::new(1, 2).unwrap();
        assert_eq!(a, b);
        assert!(a < c);
        assert_eq!(c.halved(), Frac::new(1, 4).unwrap());
        assert_eq!(Frac::new(3, 4).unwrap().halved(), Frac::new(3, 8).unwrap());
    }

    #[test]
    fn mul_floor_handles_budgets() {
        let alpha = Frac::new(1, 10).unwrap();
        assert_eq!(alpha.mul_floor(10), 1);
        assert_eq!(alpha.mul_floor(9), 0);
        assert_eq!(Frac::new(2, 10).unwrap().mul_floor(10), 2);
    }
}

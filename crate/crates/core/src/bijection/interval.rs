use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A real interval with independently open or closed ends.
///
/// Infinite endpoints are allowed. A closed infinite end admits the infinity
/// itself, which is how the extended real line `[-inf, inf]` is spelled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    lo: T,
    hi: T,
    open_lo: bool,
    open_hi: bool,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T, open_lo: bool, open_hi: bool) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || !(lo < hi) {
            return Err(Error::Param(format!("interval needs lo < hi, got lo={lo}, hi={hi}")));
        }
        Ok(Self { lo, hi, open_lo, open_hi })
    }

    pub fn closed(lo: T, hi: T) -> Result<Self> {
        Self::new(lo, hi, false, false)
    }

    pub fn open(lo: T, hi: T) -> Result<Self> {
        Self::new(lo, hi, true, true)
    }

    /// The finite reals, `(-inf, inf)`.
    pub fn real_line() -> Self {
        Self { lo: T::neg_infinity(), hi: T::infinity(), open_lo: true, open_hi: true }
    }

    /// The extended reals, `[-inf, inf]`.
    pub fn extended_real_line() -> Self {
        Self { lo: T::neg_infinity(), hi: T::infinity(), open_lo: false, open_hi: false }
    }

    /// `(0, inf)`
    pub fn positive() -> Self {
        Self { lo: T::zero(), hi: T::infinity(), open_lo: true, open_hi: true }
    }

    /// `(-inf, 0)`
    pub fn negative() -> Self {
        Self { lo: T::neg_infinity(), hi: T::zero(), open_lo: true, open_hi: true }
    }

    /// `[-1, 1]`
    pub fn symmetric_unit() -> Self {
        Self { lo: -T::one(), hi: T::one(), open_lo: false, open_hi: false }
    }

    /// `[0, 1]`
    pub fn unit() -> Self {
        Self { lo: T::zero(), hi: T::one(), open_lo: false, open_hi: false }
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn open_lo(&self) -> bool {
        self.open_lo
    }

    pub fn open_hi(&self) -> bool {
        self.open_hi
    }

    pub fn contains(&self, x: T) -> bool {
        if x.is_nan() {
            return false;
        }
        let above = if self.open_lo { x > self.lo } else { x >= self.lo };
        let below = if self.open_hi { x < self.hi } else { x <= self.hi };
        above && below
    }

    /// Strict interior membership, ignoring the end flags.
    pub fn contains_interior(&self, x: T) -> bool {
        x > self.lo && x < self.hi
    }

    /// Whether every point of `other` lies in `self`.
    pub fn contains_interval(&self, other: &Interval<T>) -> bool {
        let lo_ok = other.lo > self.lo || (other.lo == self.lo && (!self.open_lo || other.open_lo));
        let hi_ok = other.hi < self.hi || (other.hi == self.hi && (!self.open_hi || other.open_hi));
        lo_ok && hi_ok
    }

    pub fn intersect(&self, other: &Interval<T>) -> Option<Interval<T>> {
        let (lo, open_lo) = if self.lo > other.lo {
            (self.lo, self.open_lo)
        } else if other.lo > self.lo {
            (other.lo, other.open_lo)
        } else {
            (self.lo, self.open_lo || other.open_lo)
        };
        let (hi, open_hi) = if self.hi < other.hi {
            (self.hi, self.open_hi)
        } else if other.hi < self.hi {
            (other.hi, other.open_hi)
        } else {
            (self.hi, self.open_hi || other.open_hi)
        };
        Interval::new(lo, hi, open_lo, open_hi).ok()
    }

    /// `Err(Error::Domain)` unless `x` is a member.
    pub fn check(&self, x: T, context: &str) -> Result<T> {
        if self.contains(x) {
            Ok(x)
        } else {
            Err(Error::Domain { context: context.to_string(), value: x.as_f64(), interval: self.to_string() })
        }
    }
}

impl<T: Scalar> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.open_lo { '(' } else { '[' };
        let r = if self.open_hi { ')' } else { ']' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_follows_flags() {
        let half_open = Interval::new(0.0, 1.0, true, false).unwrap();
        assert!(!half_open.contains(0.0));
        assert!(half_open.contains(1.0));
        assert!(half_open.contains(0.5));
        assert!(!half_open.contains(f64::NAN));
        assert!(!Interval::<f64>::real_line().contains(f64::INFINITY));
        assert!(Interval::<f64>::extended_real_line().contains(f64::INFINITY));
    }

    #[test]
    fn rejects_empty() {
        assert!(Interval::closed(1.0, 1.0).is_err());
        assert!(Interval::closed(2.0, 1.0).is_err());
        assert!(Interval::closed(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn containment_and_intersection() {
        let real = Interval::<f64>::real_line();
        let unit = Interval::<f64>::symmetric_unit();
        assert!(real.contains_interval(&unit));
        assert!(!unit.contains_interval(&real));
        let pos = Interval::<f64>::positive();
        assert!(!pos.contains_interval(&unit));
        let cut = unit.intersect(&pos).unwrap();
        assert_eq!(cut, Interval::new(0.0, 1.0, true, false).unwrap());
        assert_eq!(cut.to_string(), "(0, 1]");
        assert!(Interval::closed(0.0, 1.0).unwrap().intersect(&Interval::closed(2.0, 3.0).unwrap()).is_none());
    }
}

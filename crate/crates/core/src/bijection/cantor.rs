//! The Cantor function (devil's staircase) and its leftmost-preimage inverse.
//!
//! `C(x)` is evaluated from the ternary expansion of `x`: digits are read
//! until the first `1`, each earlier digit `d` contributes bit `d / 2`, and a
//! terminal `1` bit is appended when a `1` digit is seen. Digits come from
//! repeated `y -> 3y`, `digit = floor(3y)`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::Interval;

/// Largest accepted digit depth. Beyond this every bit is below the
/// subnormal range of `f64`.
pub const MAX_DEPTH: u32 = 1100;

pub const DEFAULT_DEPTH: u32 = 48;

fn check_depth(depth: u32) -> Result<()> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::Param(format!("cantor depth must be in 1..={MAX_DEPTH}, got {depth}")));
    }
    Ok(())
}

/// `C(x)` from the first `depth` ternary digits of `x`.
pub fn cantor_value<T: Scalar>(x: T, depth: u32) -> Result<T> {
    check_depth(depth)?;
    Interval::unit().check(x, "cantor_value")?;
    if x == T::one() {
        return Ok(T::one());
    }
    let three = T::lit(3.0);
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let mut y = x;
    let mut bit = half;
    let mut acc = T::zero();
    for _ in 0..depth {
        if y == T::zero() {
            break;
        }
        let t = y * three;
        let d = t.floor();
        if d == T::one() {
            return Ok(acc + bit);
        }
        // 3y can round up to exactly 3; the tail is then 0.222... = 1.
        let d = d.min(two);
        if d == two {
            acc = acc + bit;
        }
        y = t - d;
        bit = bit * half;
    }
    Ok(acc)
}

/// `C(num / den)` with the ternary digits taken exactly from the fraction.
///
/// Used for inputs such as `1/3` and `1/4` that have no exact binary
/// representation.
pub fn cantor_value_ratio<T: Scalar>(num: u64, den: u64, depth: u32) -> Result<T> {
    check_depth(depth)?;
    if den == 0 || num > den {
        return Err(Error::Domain {
            context: "cantor_value".into(),
            value: num as f64 / den as f64,
            interval: "[0, 1]".into(),
        });
    }
    if num == den {
        return Ok(T::one());
    }
    let den = den as u128;
    let mut rem = num as u128;
    let half = T::lit(0.5);
    let mut bit = half;
    let mut acc = T::zero();
    for _ in 0..depth {
        if rem == 0 {
            break;
        }
        let t = rem * 3;
        let d = t / den;
        rem = t % den;
        match d {
            1 => return Ok(acc + bit),
            2 => acc = acc + bit,
            _ => {}
        }
        bit = bit * half;
    }
    Ok(acc)
}

/// Leftmost `x` with `C(x) = y`, from the first `depth` binary digits of `y`.
///
/// A dyadic `y` is the level of a removed middle-third gap; the left edge of
/// that gap is returned, so `inverse(0.5) = 1/3`.
pub fn cantor_generalized_inverse<T: Scalar>(y: T, depth: u32) -> Result<T> {
    check_depth(depth)?;
    Interval::unit().check(y, "cantor_generalized_inverse")?;
    if y == T::zero() || y == T::one() {
        return Ok(y);
    }
    let two = T::lit(2.0);
    let third = T::one() / T::lit(3.0);
    let mut r = y;
    let mut scale = third;
    let mut x = T::zero();
    for _ in 0..depth {
        let t = r * two;
        let b = t.floor();
        r = t - b;
        if r == T::zero() {
            // Binary expansion ends ...01 = ...00111..., ternary ...00222... = ...01.
            // The edge itself is rarely representable; step onto the first
            // float inside the gap so that C(result) = y.
            let mut edge = x + scale;
            for _ in 0..8 {
                if cantor_value(edge, depth)? >= y {
                    break;
                }
                edge = edge + (edge * T::epsilon()).max(T::min_positive_value());
            }
            return Ok(edge);
        }
        if b == T::one() {
            x = x + two * scale;
        }
        scale = scale * third;
    }
    Ok(x)
}

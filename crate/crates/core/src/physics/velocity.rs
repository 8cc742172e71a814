use crate::arithmetic::nn_add;
use crate::bijection::{BijectionSpec, Interval};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Result of composing two velocities (units of c).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Composition<T> {
    pub value: T,
    /// `|value| > 1`. The value is kept so the violation can be inspected.
    pub superluminal: bool,
}

/// `b1 (+) b2` under `f`, flagging results faster than light.
pub fn velocity_compose<T: Scalar>(b1: T, b2: T, f: &BijectionSpec<T>) -> Result<Composition<T>> {
    let unit = Interval::symmetric_unit();
    unit.check(b1, "velocity b1")?;
    unit.check(b2, "velocity b2")?;
    let value = nn_add(b1, b2, f)?;
    Ok(Composition { value, superluminal: value.abs() > T::one() })
}

/// Relativistic composition `(b1 + b2) / (1 + b1 b2)`.
pub fn einstein_compose<T: Scalar>(b1: T, b2: T) -> Result<T> {
    let unit = Interval::symmetric_unit();
    unit.check(b1, "velocity b1")?;
    unit.check(b2, "velocity b2")?;
    let denom = T::one() + b1 * b2;
    if denom == T::zero() {
        return Err(Error::SingularInput { b1: b1.as_f64(), b2: b2.as_f64() });
    }
    Ok((b1 + b2) / denom)
}

/// Average speed over two equal-distance legs, `2 v1 v2 / (v1 + v2)`.
pub fn harmonic_average_speed<T: Scalar>(v1: T, v2: T) -> Result<T> {
    let pos = Interval::positive();
    pos.check(v1, "speed v1")?;
    pos.check(v2, "speed v2")?;
    Ok(T::lit(2.0) * v1 * v2 / (v1 + v2))
}

//! Arithmetic pulled back through a bijection: `a (+) b = f^-1(f(a) + f(b))`.

use crate::bijection::BijectionSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tolerance on the sum of user-supplied weights.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// The induced operations bound to one bijection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedArithmetic<T> {
    f: BijectionSpec<T>,
}

impl<T: Scalar> InducedArithmetic<T> {
    pub fn new(f: BijectionSpec<T>) -> Self {
        Self { f }
    }

    pub fn bijection(&self) -> &BijectionSpec<T> {
        &self.f
    }

    pub fn add(&self, a: T, b: T) -> Result<T> {
        nn_add(a, b, &self.f)
    }

    pub fn sub(&self, a: T, b: T) -> Result<T> {
        nn_sub(a, b, &self.f)
    }

    pub fn mul(&self, a: T, b: T) -> Result<T> {
        nn_mul(a, b, &self.f)
    }

    pub fn div(&self, a: T, b: T) -> Result<T> {
        nn_div(a, b, &self.f)
    }

    pub fn neutral_elements(&self) -> Result<(T, T)> {
        neutral_elements(&self.f)
    }
}

fn pull_back<T: Scalar>(op: &'static str, a: T, b: T, image: T, f: &BijectionSpec<T>) -> Result<T> {
    if !f.codomain().contains(image) {
        return Err(Error::Closure {
            op,
            a: a.as_f64(),
            b: b.as_f64(),
            image: image.as_f64(),
            codomain: f.codomain().to_string(),
        });
    }
    f.inverse(image)
}

pub fn nn_add<T: Scalar>(a: T, b: T, f: &BijectionSpec<T>) -> Result<T> {
    let s = f.forward(a)? + f.forward(b)?;
    pull_back("add", a, b, s, f)
}

pub fn nn_sub<T: Scalar>(a: T, b: T, f: &BijectionSpec<T>) -> Result<T> {
    let s = f.forward(a)? - f.forward(b)?;
    pull_back("sub", a, b, s, f)
}

pub fn nn_mul<T: Scalar>(a: T, b: T, f: &BijectionSpec<T>) -> Result<T> {
    let p = f.forward(a)? * f.forward(b)?;
    pull_back("mul", a, b, p, f)
}

pub fn nn_div<T: Scalar>(a: T, b: T, f: &BijectionSpec<T>) -> Result<T> {
    let fa = f.forward(a)?;
    let fb = f.forward(b)?;
    if fb == T::zero() {
        return Err(Error::DivisionByNeutral { b: b.as_f64() });
    }
    pull_back("div", a, b, fa / fb, f)
}

/// `f^-1(0)`, the additive neutral.
pub fn additive_neutral<T: Scalar>(f: &BijectionSpec<T>) -> Result<T> {
    f.inverse(T::zero())
}

/// `f^-1(1)`, the multiplicative neutral.
pub fn multiplicative_neutral<T: Scalar>(f: &BijectionSpec<T>) -> Result<T> {
    f.inverse(T::one())
}

/// `(f^-1(0), f^-1(1))`.
pub fn neutral_elements<T: Scalar>(f: &BijectionSpec<T>) -> Result<(T, T)> {
    Ok((additive_neutral(f)?, multiplicative_neutral(f)?))
}

/// Kolmogorov-Nagumo mean `f^-1(sum w_i f(v_i))`. Uniform weights when
/// `weights` is `None`.
pub fn quasi_arithmetic_mean<T: Scalar>(f: &BijectionSpec<T>, values: &[T], weights: Option<&[T]>) -> Result<T> {
    if values.is_empty() {
        return Err(Error::Weight("no values to average".into()));
    }
    let uniform;
    let weights = match weights {
        Some(w) => {
            if w.len() != values.len() {
                return Err(Error::Weight(format!("{} weights for {} values", w.len(), values.len())));
            }
            if let Some(bad) = w.iter().find(|w| !(**w >= T::zero()) || !w.is_finite()) {
                return Err(Error::Weight(format!("weight {bad} is negative or not finite")));
            }
            let sum = w.iter().fold(T::zero(), |acc, &x| acc + x);
            if (sum - T::one()).abs() > T::lit(WEIGHT_SUM_TOL) {
                return Err(Error::Weight(format!("weights sum to {sum}, not 1")));
            }
            w
        }
        None => {
            let n = T::from_usize(values.len()).unwrap_or_else(T::nan);
            uniform = vec![T::one() / n; values.len()];
            &uniform[..]
        }
    };
    let mut acc = T::zero();
    for (&v, &w) in values.iter().zip(weights) {
        acc = acc + w * f.forward(v)?;
    }
    f.inverse(acc)
}

/// `|f(x + y) - (f(x) + f(y))|`.
pub fn cauchy_residual<T: Scalar>(f: &BijectionSpec<T>, x: T, y: T) -> Result<T> {
    let fx = f.forward(x)?;
    let fy = f.forward(y)?;
    let fxy = f.forward(x + y)?;
    Ok((fxy - (fx + fy)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> BijectionSpec<f64> {
        text.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        let v = nn_add(0.9, 0.9, &spec("arctanh")).unwrap();
        assert!((v - 1.8 / 1.81).abs() < 1e-15);
        let v = nn_add(0.9, 0.9, &spec("power:n=3")).unwrap();
        assert!((v - 1.458f64.cbrt()).abs() < 1e-15);
        assert!((v - 1.133).abs() < 1e-3);
        for f in BijectionSpec::<f64>::catalog() {
            let Ok(zero) = additive_neutral(&f) else { continue };
            let x = if f.domain().contains(0.3) { 0.3 } else { 0.0 };
            if !f.domain().contains(x) || !f.domain().contains(zero) {
                continue;
            }
            let back = nn_add(x, zero, &f).unwrap();
            assert!((back - x).abs() < 1e-10, "{f}: {back}");
        }
    }

    #[test]
    fn sub_examples() {
        let f = spec("arctanh");
        assert_eq!(nn_sub(0.4, 0.4, &f).unwrap(), additive_neutral(&f).unwrap());
        assert!((nn_sub(1.8 / 1.81, 0.9, &f).unwrap() - 0.9).abs() < 1e-9);
        assert_eq!(nn_sub(5.0, 3.0, &spec("identity")).unwrap(), 2.0);
    }

    #[test]
    fn mul_div_examples() {
        assert_eq!(nn_mul(2.0, 3.0, &spec("identity")).unwrap(), 6.0);
        assert!((nn_mul(2.0, 3.0, &spec("exp")).unwrap() - 5.0).abs() < 1e-14);
        assert_eq!(nn_mul(-1.0, -1.0, &spec("power:n=3")).unwrap(), 1.0);
        assert_eq!(nn_div(6.0, 3.0, &spec("identity")).unwrap(), 2.0);
        assert!((nn_div(5.0, 2.0, &spec("exp")).unwrap() - 3.0).abs() < 1e-14);
        let f = spec("arctanh");
        assert!((nn_div(0.5, 0.5, &f).unwrap() - multiplicative_neutral(&f).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn closure_and_division_errors() {
        // tanh(0.9) + tanh(0.9) > 1 leaves the codomain of tanh.
        let err = nn_add(0.9, 0.9, &spec("tanh")).unwrap_err();
        match err {
            Error::Closure { op, a, b, image, .. } => {
                assert_eq!((op, a, b), ("add", 0.9, 0.9));
                assert!((image - 2.0 * 0.9f64.tanh()).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(nn_sub(0.0, 1.0, &spec("exp")), Err(Error::Closure { .. })));
        assert!(matches!(nn_div(1.0, 0.0, &spec("identity")), Err(Error::DivisionByNeutral { .. })));
    }

    #[test]
    fn neutral_examples() {
        assert_eq!(neutral_elements(&spec("identity")).unwrap(), (0.0, 1.0));
        let (z, o) = neutral_elements(&spec("arctanh")).unwrap();
        assert_eq!(z, 0.0);
        assert!((o - 1f64.tanh()).abs() < 1e-15);
        assert!(matches!(neutral_elements(&spec("exp")), Err(Error::Domain { .. })));
        assert!(multiplicative_neutral(&spec("exp")).is_ok());
    }

    #[test]
    fn mean_examples() {
        assert_eq!(quasi_arithmetic_mean(&spec("identity"), &[30.0, 60.0], None).unwrap(), 45.0);
        let h = quasi_arithmetic_mean(&spec("reciprocal"), &[30.0, 60.0], None).unwrap();
        assert!((h - 40.0).abs() < 1e-12);
        assert_eq!(quasi_arithmetic_mean(&spec("power:n=3"), &[1.0, 1.0], None).unwrap(), 1.0);
        let w = quasi_arithmetic_mean(&spec("identity"), &[1.0, 3.0], Some(&[0.25, 0.75])).unwrap();
        assert_eq!(w, 2.5);
    }

    #[test]
    fn mean_errors() {
        let id = spec("identity");
        assert!(matches!(quasi_arithmetic_mean(&id, &[], None), Err(Error::Weight(_))));
        assert!(matches!(quasi_arithmetic_mean(&id, &[1.0], Some(&[0.5, 0.5])), Err(Error::Weight(_))));
        assert!(matches!(quasi_arithmetic_mean(&id, &[1.0, 2.0], Some(&[0.5, 0.6])), Err(Error::Weight(_))));
        assert!(matches!(quasi_arithmetic_mean(&id, &[1.0, 2.0], Some(&[1.5, -0.5])), Err(Error::Weight(_))));
        assert!(matches!(quasi_arithmetic_mean(&spec("log"), &[1.0, -2.0], None), Err(Error::Domain { .. })));
    }

    #[test]
    fn cauchy_examples() {
        assert_eq!(cauchy_residual(&spec("linear:a=5,b=0"), 1.0, 2.0).unwrap(), 0.0);
        let r = cauchy_residual(&spec("tanh"), 1.0, 1.0).unwrap();
        assert!((r - (2f64.tanh() - 2.0 * 1f64.tanh()).abs()).abs() < 1e-15);
        assert!((r - 0.5592).abs() < 1e-4);
        assert_eq!(cauchy_residual(&spec("exp"), 0.0, 0.0).unwrap(), 1.0);
        assert_eq!(cauchy_residual(&spec("linear:a=1,b=2"), 1.0, 2.0).unwrap(), 2.0);
        assert!(matches!(cauchy_residual(&spec("arctanh"), 0.6, 0.6), Err(Error::Domain { .. })));
    }

    #[test]
    fn induced_struct_delegates() {
        let ar = InducedArithmetic::new(spec("exp"));
        assert!((ar.mul(2.0, 3.0).unwrap() - 5.0).abs() < 1e-14);
        assert_eq!(ar.bijection().name(), "exp");
    }
}

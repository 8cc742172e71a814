//! Catalog of monotone bijections used to pull back real arithmetic.

mod cantor;
mod interval;
mod parse;

use std::fmt;
use std::str::FromStr;

pub use cantor::{
    cantor_generalized_inverse, cantor_value, cantor_value_ratio, DEFAULT_DEPTH as DEFAULT_CANTOR_DEPTH,
    MAX_DEPTH as MAX_CANTOR_DEPTH,
};
pub use interval::Interval;
pub use parse::parse_bijection_spec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Density parameter used by `sinh_cosmo` when none is given.
pub const DEFAULT_OMEGA_LAMBDA: f64 = 0.7;

/// Registered names, in catalog order.
pub const CATALOG_NAMES: [&str; 10] =
    ["identity", "linear", "arctanh", "tanh", "power", "exp", "log", "sinh_cosmo", "cantor", "reciprocal"];

/// How preimages are chosen when the forward map is not injective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GeneralizedInverseConvention {
    /// The infimum of the preimage set.
    #[default]
    LeftmostPreimage,
}

/// The catalog entries and their parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BijectionKind<T> {
    Identity,
    /// `a * x + b` with `a > 0`.
    Linear {
        a: T,
        b: T,
    },
    Arctanh,
    Tanh,
    /// `x^n` for odd positive `n`.
    Power {
        n: u32,
    },
    Exp,
    Log,
    /// `sinh(k t)` with `k = (3/2) sqrt(omega_lambda)`.
    SinhCosmo {
        omega_lambda: T,
    },
    /// Cantor function evaluated to `depth` ternary digits.
    Cantor {
        depth: u32,
    },
    /// `-1 / x` on `(0, inf)`. Its quasi-arithmetic mean is the harmonic mean.
    Reciprocal,
}

/// A validated catalog bijection with its domain and codomain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BijectionSpec<T> {
    kind: BijectionKind<T>,
    domain: Interval<T>,
    codomain: Interval<T>,
}

impl<T: Scalar> BijectionSpec<T> {
    pub fn new(kind: BijectionKind<T>) -> Result<Self> {
        use BijectionKind::*;
        let real = Interval::real_line();
        let (domain, codomain) = match kind {
            Identity => (real, real),
            Linear { a, b } => {
                if !(a.is_finite() && b.is_finite()) {
                    return Err(Error::Param("linear needs finite a and b".into()));
                }
                if a <= T::zero() {
                    return Err(Error::Param(format!("linear needs a > 0 to stay increasing, got a={a}")));
                }
                (real, real)
            }
            Arctanh => (Interval::symmetric_unit(), Interval::extended_real_line()),
            Tanh => (real, Interval::symmetric_unit()),
            Power { n } => {
                if n == 0 || n % 2 == 0 || n > i32::MAX as u32 {
                    return Err(Error::Param(format!(
                        "power needs an odd positive integer n, got n={n}; only odd n keep x^n injective and real on [-1, 1]"
                    )));
                }
                (real, real)
            }
            Exp => (real, Interval::positive()),
            Log => (Interval::positive(), real),
            SinhCosmo { omega_lambda } => {
                if !(omega_lambda > T::zero() && omega_lambda < T::one()) {
                    return Err(Error::Param(format!("sinh_cosmo needs 0 < omega_lambda < 1, got {omega_lambda}")));
                }
                (real, real)
            }
            Cantor { depth } => {
                if depth == 0 || depth > MAX_CANTOR_DEPTH {
                    return Err(Error::Param(format!("cantor depth must be in 1..={MAX_CANTOR_DEPTH}, got {depth}")));
                }
                (Interval::unit(), Interval::unit())
            }
            Reciprocal => (Interval::positive(), Interval::negative()),
        };
        Ok(Self { kind, domain, codomain })
    }

    pub fn identity() -> Self {
        Self::new(BijectionKind::Identity).expect("identity is valid")
    }

    pub fn arctanh() -> Self {
        Self::new(BijectionKind::Arctanh).expect("arctanh is valid")
    }

    pub fn power(n: u32) -> Result<Self> {
        Self::new(BijectionKind::Power { n })
    }

    pub fn linear(a: T, b: T) -> Result<Self> {
        Self::new(BijectionKind::Linear { a, b })
    }

    pub fn cantor(depth: u32) -> Result<Self> {
        Self::new(BijectionKind::Cantor { depth })
    }

    pub fn sinh_cosmo(omega_lambda: T) -> Result<Self> {
        Self::new(BijectionKind::SinhCosmo { omega_lambda })
    }

    pub fn kind(&self) -> BijectionKind<T> {
        self.kind
    }

    pub fn domain(&self) -> Interval<T> {
        self.domain
    }

    pub fn codomain(&self) -> Interval<T> {
        self.codomain
    }

    pub fn name(&self) -> &'static str {
        use BijectionKind::*;
        match self.kind {
            Identity => "identity",
            Linear { .. } => "linear",
            Arctanh => "arctanh",
            Tanh => "tanh",
            Power { .. } => "power",
            Exp => "exp",
            Log => "log",
            SinhCosmo { .. } => "sinh_cosmo",
            Cantor { .. } => "cantor",
            Reciprocal => "reciprocal",
        }
    }

    /// Parameters in canonical order, defaults included.
    pub fn params(&self) -> Vec<(&'static str, T)> {
        use BijectionKind::*;
        let int = |v: u32| T::from_u32(v).unwrap_or_else(T::nan);
        match self.kind {
            Linear { a, b } => vec![("a", a), ("b", b)],
            Power { n } => vec![("n", int(n))],
            SinhCosmo { omega_lambda } => vec![("omega_lambda", omega_lambda)],
            Cantor { depth } => vec![("depth", int(depth))],
            _ => Vec::new(),
        }
    }

    /// Rate `k` of `sinh_cosmo`, `None` for other entries.
    pub fn cosmo_rate(&self) -> Option<T> {
        match self.kind {
            BijectionKind::SinhCosmo { omega_lambda } => Some(cosmo_rate(omega_lambda)),
            _ => None,
        }
    }

    /// Every entry except `cantor` is strictly increasing.
    pub fn is_strictly_increasing(&self) -> bool {
        !matches!(self.kind, BijectionKind::Cantor { .. })
    }

    pub fn inverse_convention(&self) -> GeneralizedInverseConvention {
        GeneralizedInverseConvention::LeftmostPreimage
    }

    pub fn forward(&self, x: T) -> Result<T> {
        self.domain.check(x, self.name())?;
        Ok(self.forward_unchecked(x))
    }

    /// Inverse, or the leftmost preimage for `cantor`.
    pub fn inverse(&self, r: T) -> Result<T> {
        self.codomain.check(r, self.name())?;
        Ok(self.inverse_unchecked(r))
    }

    fn forward_unchecked(&self, x: T) -> T {
        use BijectionKind::*;
        match self.kind {
            Identity => x,
            Linear { a, b } => a * x + b,
            Arctanh => x.atanh(),
            Tanh => x.tanh(),
            Power { n } => x.powi(n as i32),
            Exp => x.exp(),
            Log => x.ln(),
            SinhCosmo { omega_lambda } => (cosmo_rate(omega_lambda) * x).sinh(),
            Cantor { depth } => cantor_value(x, depth).unwrap_or_else(|_| T::nan()),
            Reciprocal => -x.recip(),
        }
    }

    fn inverse_unchecked(&self, r: T) -> T {
        use BijectionKind::*;
        match self.kind {
            Identity => r,
            Linear { a, b } => (r - b) / a,
            Arctanh => r.tanh(),
            Tanh => r.atanh(),
            Power { n: 1 } => r,
            Power { n: 3 } => r.cbrt(),
            Power { n } => {
                let root = r.abs().powf(T::one() / T::from_u32(n).unwrap_or_else(T::nan));
                if r < T::zero() {
                    -root
                } else {
                    root
                }
            }
            Exp => r.ln(),
            Log => r.exp(),
            SinhCosmo { omega_lambda } => r.asinh() / cosmo_rate(omega_lambda),
            Cantor { depth } => cantor_generalized_inverse(r, depth).unwrap_or_else(|_| T::nan()),
            Reciprocal => -r.recip(),
        }
    }

    /// One representative of each catalog entry, as used by catalog-wide audits.
    pub fn catalog() -> Vec<Self> {
        use BijectionKind::*;
        [
            Identity,
            Linear { a: T::lit(3.0), b: T::zero() },
            Linear { a: T::one(), b: T::lit(2.0) },
            Arctanh,
            Tanh,
            Power { n: 3 },
            Exp,
            Log,
            SinhCosmo { omega_lambda: T::lit(DEFAULT_OMEGA_LAMBDA) },
            Cantor { depth: DEFAULT_CANTOR_DEPTH },
            Reciprocal,
        ]
        .into_iter()
        .map(|k| Self::new(k).expect("catalog entries are valid"))
        .collect()
    }
}

/// `(3/2) sqrt(omega_lambda)`.
pub fn cosmo_rate<T: Scalar>(omega_lambda: T) -> T {
    T::lit(1.5) * omega_lambda.sqrt()
}

/// `max |inverse(forward(x)) - x|` over `grid`.
pub fn roundtrip_residual<T: Scalar>(spec: &BijectionSpec<T>, grid: &[T]) -> Result<T> {
    grid.iter().try_fold(T::zero(), |worst, &x| {
        let back = spec.inverse(spec.forward(x)?)?;
        Ok(worst.max((back - x).abs()))
    })
}

impl<T: Scalar> fmt::Display for BijectionSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        for (i, (key, value)) in self.params().into_iter().enumerate() {
            let sep = if i == 0 { ':' } else { ',' };
            write!(f, "{sep}{key}={value}")?;
        }
        Ok(())
    }
}

impl<T: Scalar> FromStr for BijectionSpec<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_bijection_spec(s)
    }
}

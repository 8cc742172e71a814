use crate::bijection::{cosmo_rate, BijectionSpec, DEFAULT_OMEGA_LAMBDA};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Flat matter + Lambda cosmology in `H0 = 1` units.
#[derive(Debug, Clone, PartialEq)]
pub struct CosmologyParams<T> {
    omega_lambda: T,
    t_grid: Vec<T>,
}

impl<T: Scalar> CosmologyParams<T> {
    pub fn new(omega_lambda: T, t_grid: Vec<T>) -> Result<Self> {
        check_omega(omega_lambda)?;
        if t_grid.is_empty() {
            return Err(Error::Param("empty time grid".into()));
        }
        if !t_grid.iter().all(|t| *t > T::zero() && t.is_finite()) {
            return Err(Error::Param("time grid must be strictly positive".into()));
        }
        if t_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Param("time grid must be strictly increasing".into()));
        }
        Ok(Self { omega_lambda, t_grid })
    }

    /// `n` evenly spaced times on `[t0, t1]` with the default density.
    pub fn uniform(t0: T, t1: T, n: usize) -> Result<Self> {
        Self::uniform_with(T::lit(DEFAULT_OMEGA_LAMBDA), t0, t1, n)
    }

    pub fn uniform_with(omega_lambda: T, t0: T, t1: T, n: usize) -> Result<Self> {
        let grid = match n {
            0 => Vec::new(),
            1 => vec![t0],
            _ => {
                let step = (t1 - t0) / T::from_usize(n - 1).unwrap_or_else(T::nan);
                (0..n).map(|i| t0 + step * T::from_usize(i).unwrap_or_else(T::nan)).collect()
            }
        };
        Self::new(omega_lambda, grid)
    }

    pub fn omega_lambda(&self) -> T {
        self.omega_lambda
    }

    pub fn t_grid(&self) -> &[T] {
        &self.t_grid
    }
}

fn check_omega<T: Scalar>(omega_lambda: T) -> Result<()> {
    if omega_lambda > T::zero() && omega_lambda < T::one() {
        Ok(())
    } else {
        Err(Error::Domain { context: "omega_lambda".into(), value: omega_lambda.as_f64(), interval: "(0, 1)".into() })
    }
}

/// `a(t) = ((1 - OL) / OL)^(1/3) sinh^(2/3)((3/2) sqrt(OL) t)`.
pub fn lcdm_scale_factor<T: Scalar>(t: T, omega_lambda: T) -> Result<T> {
    check_omega(omega_lambda)?;
    if !(t > T::zero() && t.is_finite()) {
        return Err(Error::Domain { context: "cosmic time".into(), value: t.as_f64(), interval: "(0, inf)".into() });
    }
    let third = T::one() / T::lit(3.0);
    let amplitude = ((T::one() - omega_lambda) / omega_lambda).powf(third);
    Ok(amplitude * (cosmo_rate(omega_lambda) * t).sinh().powf(T::lit(2.0) * third))
}

/// Constancy defect `max_t |r(t)/r(t0) - 1|` of
/// `r(t) = a(t) / f(t)^(2/3)`. Zero means `a` is a fixed multiple of
/// `f^(2/3)` on the grid.
pub fn cosmo_bijection_ratio<T: Scalar>(params: &CosmologyParams<T>, f: &BijectionSpec<T>) -> Result<T> {
    let two_thirds = T::lit(2.0) / T::lit(3.0);
    let mut ratios = Vec::with_capacity(params.t_grid.len());
    for &t in &params.t_grid {
        let ft = f.forward(t)?;
        if !(ft > T::zero()) {
            return Err(Error::Domain {
                context: format!("{f} at t={t}"),
                value: ft.as_f64(),
                interval: "(0, inf)".into(),
            });
        }
        ratios.push(lcdm_scale_factor(t, params.omega_lambda)? / ft.powf(two_thirds));
    }
    let r0 = ratios[0];
    Ok(ratios.iter().fold(T::zero(), |worst, &r| worst.max((r / r0 - T::one()).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_time_asymptote() {
        let ol: f64 = 0.7;
        let expected = (2.25 * (1.0 - ol)).cbrt();
        let t: f64 = 1e-6;
        let a = lcdm_scale_factor(t, ol).unwrap();
        assert!((a / t.powf(2.0 / 3.0) - expected).abs() < 1e-9);
    }

    #[test]
    fn monotone_in_time() {
        let a: Vec<f64> = (1..200).map(|i| lcdm_scale_factor(i as f64 * 0.02, 0.7).unwrap()).collect();
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert!(lcdm_scale_factor(2.0, 0.7).unwrap() > lcdm_scale_factor(1.0, 0.7).unwrap());
    }

    #[test]
    fn matched_bijection_has_no_defect() {
        let p = CosmologyParams::uniform(0.1, 3.0, 50).unwrap();
        let f = BijectionSpec::sinh_cosmo(0.7).unwrap();
        assert!(cosmo_bijection_ratio(&p, &f).unwrap() < 1e-9);
        let single = CosmologyParams::new(0.7, vec![1.3]).unwrap();
        assert_eq!(cosmo_bijection_ratio(&single, &f).unwrap(), 0.0);
        let wrong = BijectionSpec::sinh_cosmo(0.5).unwrap();
        assert!(cosmo_bijection_ratio(&p, &wrong).unwrap() > 0.01);
    }

    #[test]
    fn validation() {
        assert!(lcdm_scale_factor(0.0, 0.7).is_err());
        assert!(lcdm_scale_factor(1.0, 1.0).is_err());
        assert!(CosmologyParams::new(0.7, vec![1.0, 0.5]).is_err());
        assert!(CosmologyParams::new(0.7, vec![-1.0]).is_err());
        assert!(CosmologyParams::<f64>::new(0.0, vec![1.0]).is_err());
        let p = CosmologyParams::uniform(0.1, 3.0, 50).unwrap();
        assert!(cosmo_bijection_ratio(&p, &"tanh".parse().unwrap()).is_ok());
        assert!(cosmo_bijection_ratio(&p, &"reciprocal".parse().unwrap()).is_err());
    }
}

use rand::Rng;

use crate::bijection::BijectionSpec;
use crate::error::{EntropyStage, Error, Result};
use crate::scalar::Scalar;

/// Probabilities must sum to one within this.
pub const DISTRIBUTION_SUM_TOL: f64 = 1e-12;
/// Looser tolerance for user input, which is renormalized afterwards.
pub const INPUT_SUM_TOL: f64 = 1e-9;

/// A finite probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution<T> {
    p: Vec<T>,
}

impl<T: Scalar> ProbabilityDistribution<T> {
    pub fn new(p: Vec<T>) -> Result<Self> {
        Self::validate(&p, T::lit(DISTRIBUTION_SUM_TOL))?;
        Ok(Self { p })
    }

    /// Accepts a sum within [`INPUT_SUM_TOL`] of one and divides it out.
    pub fn normalized(p: Vec<T>) -> Result<Self> {
        let sum = Self::validate(&p, T::lit(INPUT_SUM_TOL))?;
        Ok(Self { p: p.into_iter().map(|v| v / sum).collect() })
    }

    /// Parses comma-separated probabilities, e.g. `0.5,0.5`.
    pub fn parse(text: &str) -> Result<Self> {
        let p = text
            .split(',')
            .map(|s| {
                let s = s.trim();
                s.parse::<f64>()
                    .ok()
                    .and_then(T::from_f64)
                    .ok_or_else(|| Error::Distribution(format!("'{s}' is not a probability")))
            })
            .collect::<Result<Vec<T>>>()?;
        Self::normalized(p)
    }

    /// Uniform random point of the simplex, `size` outcomes.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, size: usize) -> Self {
        // Normalized exponentials are Dirichlet(1, ..., 1).
        let draws: Vec<f64> = (0..size.max(1)).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let sum: f64 = draws.iter().sum();
        Self { p: draws.into_iter().map(|d| T::lit(d / sum)).collect() }
    }

    fn validate(p: &[T], tol: T) -> Result<T> {
        if p.is_empty() {
            return Err(Error::Distribution("empty distribution".into()));
        }
        if let Some(bad) = p.iter().find(|v| !(**v >= T::zero()) || !v.is_finite()) {
            return Err(Error::Distribution(format!("probability {bad} is negative or not finite")));
        }
        let sum = p.iter().fold(T::zero(), |a, &v| a + v);
        if (sum - T::one()).abs() > tol {
            return Err(Error::Distribution(format!("probabilities sum to {sum}, not 1")));
        }
        Ok(sum)
    }

    pub fn probabilities(&self) -> &[T] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// `-sum p_i ln p_i` with `0 ln 0 = 0`.
    pub fn shannon_entropy(&self) -> T {
        -self.p.iter().filter(|&&v| v > T::zero()).fold(T::zero(), |a, &v| a + v * v.ln())
    }
}

/// `f^-1(-sum p_i f(ln p_i))`, zero probabilities omitted.
pub fn nn_entropy<T: Scalar>(dist: &ProbabilityDistribution<T>, f: &BijectionSpec<T>) -> Result<T> {
    let mut acc = T::zero();
    for &p in dist.probabilities().iter().filter(|&&p| p > T::zero()) {
        let l = p.ln();
        let fl = f.forward(l).map_err(|_| Error::EntropyDomain {
            stage: EntropyStage::Inner,
            argument: l.as_f64(),
            interval: f.domain().to_string(),
        })?;
        acc = acc + p * fl;
    }
    let argument = -acc;
    if !f.codomain().contains(argument) {
        return Err(Error::EntropyDomain {
            stage: EntropyStage::Outer,
            argument: argument.as_f64(),
            interval: f.codomain().to_string(),
        });
    }
    f.inverse(argument)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyVerdict<T> {
    pub defined: bool,
    pub entropy: Option<T>,
    /// Outer argument `-sum p_i f(ln p_i)`, or the offending `ln p_i` when
    /// the inner evaluation failed.
    pub argument: T,
    /// Where evaluation failed, if it did.
    pub stage: Option<EntropyStage>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyDomainReport<T> {
    pub verdicts: Vec<EntropyVerdict<T>>,
    pub defined: usize,
    pub undefined: usize,
}

/// Evaluates the generalized entropy on every distribution.
pub fn entropy_domain_check<T: Scalar>(
    f: &BijectionSpec<T>,
    dists: &[ProbabilityDistribution<T>],
) -> EntropyDomainReport<T> {
    let verdicts: Vec<EntropyVerdict<T>> = dists
        .iter()
        .map(|d| match nn_entropy(d, f) {
            Ok(s) => {
                let arg = d
                    .probabilities()
                    .iter()
                    .filter(|&&p| p > T::zero())
                    .fold(T::zero(), |a, &p| a - p * f.forward(p.ln()).unwrap_or_else(|_| T::nan()));
                EntropyVerdict { defined: true, entropy: Some(s), argument: arg, stage: None }
            }
            Err(Error::EntropyDomain { stage, argument, .. }) => {
                EntropyVerdict { defined: false, entropy: None, argument: T::lit(argument), stage: Some(stage) }
            }
            Err(_) => {
                EntropyVerdict { defined: false, entropy: None, argument: T::nan(), stage: Some(EntropyStage::Outer) }
            }
        })
        .collect();
    let defined = verdicts.iter().filter(|v| v.defined).count();
    EntropyDomainReport { undefined: verdicts.len() - defined, defined, verdicts }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn spec(text: &str) -> BijectionSpec<f64> {
        text.parse().unwrap()
    }

    fn dist(p: &[f64]) -> ProbabilityDistribution<f64> {
        ProbabilityDistribution::new(p.to_vec()).unwrap()
    }

    #[test]
    fn shannon_reduction() {
        let s = nn_entropy(&dist(&[0.5, 0.5]), &spec("identity")).unwrap();
        assert!((s - 2f64.ln()).abs() < 1e-15);
        assert_eq!(nn_entropy(&dist(&[1.0, 0.0]), &spec("identity")).unwrap(), 0.0);
    }

    #[test]
    fn exp_entropy_is_undefined() {
        match nn_entropy(&dist(&[0.5, 0.5]), &spec("exp")) {
            Err(Error::EntropyDomain { stage: EntropyStage::Outer, argument, .. }) => {
                assert!((argument + 0.5).abs() < 1e-15)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn domain_check_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let dists: Vec<_> = (0..100).map(|i| ProbabilityDistribution::random(&mut rng, 2 + i % 7)).collect();
        let id = entropy_domain_check(&spec("identity"), &dists);
        assert_eq!((id.defined, id.undefined), (100, 0));
        let ex = entropy_domain_check(&spec("exp"), &dists);
        assert_eq!((ex.defined, ex.undefined), (0, 100));
        let degenerate = entropy_domain_check(&spec("exp"), &[dist(&[1.0, 0.0])]);
        assert!(!degenerate.verdicts[0].defined);
        assert_eq!(degenerate.verdicts[0].argument, -1.0);
    }

    #[test]
    fn inner_failure_reports_log_probability() {
        // arctanh needs ln p in [-1, 1], so p = 0.1 fails at the inner stage.
        let r = entropy_domain_check(&spec("arctanh"), &[dist(&[0.1, 0.9])]);
        assert_eq!(r.verdicts[0].stage, Some(EntropyStage::Inner));
        assert!((r.verdicts[0].argument - 0.1f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn distribution_validation() {
        assert!(ProbabilityDistribution::<f64>::new(vec![]).is_err());
        assert!(ProbabilityDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityDistribution::new(vec![1.5, -0.5]).is_err());
        assert!(ProbabilityDistribution::new(vec![f64::NAN, 1.0]).is_err());
        let p = ProbabilityDistribution::<f64>::parse("0.2, 0.3,0.5").unwrap();
        assert_eq!(p.len(), 3);
        assert!(ProbabilityDistribution::<f64>::parse("0.5,0.4").is_err());
        assert!(ProbabilityDistribution::<f64>::parse("0.5,x").is_err());
        let p = ProbabilityDistribution::<f64>::normalized(vec![0.5, 0.5 + 1e-10]).unwrap();
        assert!((p.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_distributions_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for size in 1..10 {
            let d = ProbabilityDistribution::<f64>::random(&mut rng, size);
            assert!(ProbabilityDistribution::new(d.probabilities().to_vec()).is_ok());
        }
    }
}

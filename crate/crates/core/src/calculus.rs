//! Non-Newtonian derivative by a step sweep in the pulled-back chart.
//!
//! For `A: X -> Y` and bijections `f_X`, `f_Y` the derivative at `x` is
//! `f_Y^-1(lim q(h))` with
//!
//! ```text
//! q(h) = [f_Y(A(f_X^-1(f_X(x) + h))) - f_Y(A(x))] / h
//! ```
//!
//! The sweep runs `h = h_max, h_max/ratio, ...` down to `h_min`, switching to
//! the central form `[F(u+h) - F(u-h)] / 2h` when both sides of every step
//! stay inside the domains. Steps whose cancellation error would exceed a
//! tenth of the convergence tolerance are dropped from the tail of the sweep.

use std::fmt;
use std::str::FromStr;

use crate::bijection::BijectionSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const CONVERGENCE_TOL: f64 = 1e-6;
pub const DIVERGENCE_FACTOR: f64 = 10.0;

/// Cancellation error model: a quotient at step `h` carries roughly
/// `NOISE_FACTOR * eps * |F| / h` of rounding noise.
const NOISE_FACTOR: f64 = 16.0;
const MIN_STEPS: usize = 3;

/// Step sweep for the limit `h -> 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPlan<T> {
    pub h_max: T,
    pub h_min: T,
    pub ratio: T,
    pub richardson: bool,
    /// Cauchy tolerance on successive estimates.
    pub tolerance: T,
}

impl<T: Scalar> Default for StepPlan<T> {
    fn default() -> Self {
        Self {
            h_max: T::lit(1e-2),
            h_min: T::lit(1e-10),
            ratio: T::lit(10.0),
            richardson: true,
            tolerance: T::lit(CONVERGENCE_TOL),
        }
    }
}

impl<T: Scalar> StepPlan<T> {
    pub fn new(h_max: T, h_min: T, ratio: T, richardson: bool) -> Result<Self> {
        let plan = Self { h_max, h_min, ratio, richardson, ..Self::default() };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h_min > T::zero() && self.h_min < self.h_max && self.h_max.is_finite()) {
            return Err(Error::Param(format!(
                "step plan needs 0 < h_min < h_max, got {} and {}",
                self.h_min, self.h_max
            )));
        }
        if !(self.ratio > T::one() && self.ratio.is_finite()) {
            return Err(Error::Param(format!("step ratio must exceed 1, got {}", self.ratio)));
        }
        if !(self.tolerance > T::zero()) {
            return Err(Error::Param("tolerance must be positive".into()));
        }
        Ok(())
    }

    /// `h_max, h_max/ratio, ...` while `h >= h_min`.
    pub fn steps(&self) -> Vec<T> {
        let floor = self.h_min * (T::one() - T::lit(1e-9));
        let mut out = Vec::new();
        let mut h = self.h_max;
        while h >= floor && out.len() < 4096 {
            out.push(h);
            h = h / self.ratio;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convergence {
    Converged,
    Diverged,
    Oscillatory,
    UndefinedDomain,
}

impl fmt::Display for Convergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convergence::Converged => "converged",
            Convergence::Diverged => "diverged",
            Convergence::Oscillatory => "oscillatory",
            Convergence::UndefinedDomain => "undefined_domain",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Differencing {
    Forward,
    Central,
}

/// Difference quotients along a sweep. `None` marks a failed evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientTrace<T> {
    pub steps: Vec<(T, Option<T>)>,
    /// Leading error order eliminated by Richardson extrapolation; `None`
    /// classifies the raw quotients.
    pub order: Option<u32>,
}

impl<T: Scalar> QuotientTrace<T> {
    pub fn raw(steps: Vec<(T, Option<T>)>) -> Self {
        Self { steps, order: None }
    }

    fn quotients(&self) -> Option<Vec<T>> {
        self.steps.iter().map(|&(_, q)| q.filter(|q| q.is_finite())).collect()
    }

    /// Richardson estimates `(r^p q(h/r) - q(h)) / (r^p - 1)` for consecutive
    /// steps, or the raw quotients when no order is set.
    pub fn extrapolated(&self) -> Option<Vec<T>> {
        let q = self.quotients()?;
        let Some(p) = self.order else { return Some(q) };
        if q.len() < 2 {
            return Some(q);
        }
        Some(
            self.steps
                .windows(2)
                .zip(q.windows(2))
                .map(|(h, q)| {
                    let gain = (h[0].0 / h[1].0).powi(p as i32);
                    (gain * q[1] - q[0]) / (gain - T::one())
                })
                .collect(),
        )
    }

    pub fn classify(&self, tolerance: T) -> Convergence {
        if self.steps.is_empty() {
            return Convergence::UndefinedDomain;
        }
        let (Some(q), Some(est)) = (self.quotients(), self.extrapolated()) else {
            return Convergence::UndefinedDomain;
        };
        let tail = &est[est.len().saturating_sub(3)..];
        let cauchy =
            tail.len() >= 2 && tail.windows(2).all(|w| (w[1] - w[0]).abs() <= tolerance * T::one().max(w[1].abs()));
        if cauchy {
            return Convergence::Converged;
        }
        if growth(&self.steps, &q).is_some_and(|g| g >= T::lit(DIVERGENCE_FACTOR))
            && q[q.len() - 1].abs() >= T::lit(DIVERGENCE_FACTOR) * q[0].abs()
            && q[q.len() - 1].abs() > tolerance
        {
            return Convergence::Diverged;
        }
        Convergence::Oscillatory
    }

    /// Final extrapolated estimate.
    pub fn limit(&self) -> Option<T> {
        self.extrapolated().and_then(|e| e.last().copied())
    }
}

/// Growth of `|q|` across the sweep along the least-squares trend of
/// `ln|q|` against `ln h`. Self-similar maps wobble around a power law, so
/// the trend rather than every single step has to be monotone.
fn growth<T: Scalar>(steps: &[(T, Option<T>)], q: &[T]) -> Option<T> {
    if q.len() < 2 {
        return None;
    }
    let floor = T::min_positive_value();
    let pts: Vec<(T, T)> = steps.iter().zip(q).map(|(&(h, _), &v)| (h.ln(), v.abs().max(floor).ln())).collect();
    let n = T::from_usize(pts.len())?;
    let mx = pts.iter().fold(T::zero(), |a, p| a + p.0) / n;
    let my = pts.iter().fold(T::zero(), |a, p| a + p.1) / n;
    let sxx = pts.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.0 - mx));
    let sxy = pts.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.1 - my));
    if sxx == T::zero() {
        return None;
    }
    let slope = sxy / sxx;
    let span = pts[pts.len() - 1].0 - pts[0].0;
    Some((slope * span).exp())
}

/// Classify a trace with the default tolerance and divergence factor.
pub fn convergence_classify<T: Scalar>(trace: &QuotientTrace<T>) -> Convergence {
    trace.classify(T::lit(CONVERGENCE_TOL))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeEstimate<T> {
    /// `f_Y^-1(limit)`, present iff converged.
    pub value: Option<T>,
    /// Limit of the chart quotients before pulling back through `f_Y^-1`.
    pub limit: Option<T>,
    pub classification: Convergence,
    pub quotient_trace: Vec<(T, Option<T>)>,
    pub differencing: Differencing,
    /// First step whose evaluation left a domain.
    pub failed_at: Option<T>,
}

/// Chart evaluation `F(v) = f_Y(A(f_X^-1(v)))`, `None` when any stage leaves
/// its interval.
fn chart_eval<T: Scalar, A: Fn(T) -> T>(a: &A, v: T, f_x: &BijectionSpec<T>, f_y: &BijectionSpec<T>) -> Option<T> {
    let xv = f_x.inverse(v).ok()?;
    if !f_x.domain().contains(xv) {
        return None;
    }
    let fy = f_y.forward(a(xv)).ok()?;
    fy.is_finite().then_some(fy)
}

/// Non-Newtonian derivative of `a` at `x` for the pair `(f_x, f_y)`.
pub fn nn_derivative<T: Scalar, A: Fn(T) -> T>(
    a: A,
    x: T,
    f_x: &BijectionSpec<T>,
    f_y: &BijectionSpec<T>,
    plan: &StepPlan<T>,
) -> Result<DerivativeEstimate<T>> {
    plan.validate()?;
    let u = f_x.forward(x)?;
    let base = f_y.forward(a(x))?;
    let hs = plan.steps();
    let plus: Vec<Option<T>> = hs.iter().map(|&h| chart_eval(&a, u + h, f_x, f_y)).collect();
    let minus: Vec<Option<T>> = hs.iter().map(|&h| chart_eval(&a, u - h, f_x, f_y)).collect();
    let differencing =
        if plus.iter().chain(&minus).all(Option::is_some) { Differencing::Central } else { Differencing::Forward };

    let eps = T::epsilon();
    let budget = plan.tolerance / T::lit(10.0);
    let mut steps = Vec::with_capacity(hs.len());
    let mut failed_at = None;
    for (i, &h) in hs.iter().enumerate() {
        let q = match differencing {
            Differencing::Central => {
                let (p, m) = (plus[i].unwrap_or_else(T::nan), minus[i].unwrap_or_else(T::nan));
                let noise = T::lit(NOISE_FACTOR) * eps * (p.abs() + m.abs()) / h;
                if steps.len() >= MIN_STEPS && noise > budget {
                    break;
                }
                // Divide by the realized chart step so representation error in
                // u +- h cancels.
                Some((p - m) / ((u + h) - (u - h)))
            }
            Differencing::Forward => match plus[i] {
                Some(p) => {
                    let noise = T::lit(NOISE_FACTOR) * eps * (p.abs() + base.abs()) / h;
                    if steps.len() >= MIN_STEPS && noise > budget {
                        break;
                    }
                    Some((p - base) / ((u + h) - u))
                }
                None => {
                    failed_at.get_or_insert(h);
                    None
                }
            },
        };
        steps.push((h, q));
    }

    let trace = QuotientTrace {
        order: plan.richardson.then_some(match differencing {
            Differencing::Forward => 1,
            Differencing::Central => 2,
        }),
        steps,
    };
    let mut classification = trace.classify(plan.tolerance);
    let limit = trace.limit();
    let mut value = None;
    if classification == Convergence::Converged {
        match limit.map(|l| f_y.inverse(l)) {
            Some(Ok(v)) => value = Some(v),
            _ => classification = Convergence::UndefinedDomain,
        }
    }
    Ok(DerivativeEstimate { value, limit, classification, quotient_trace: trace.steps, differencing, failed_at })
}

/// Per-point outcome of [`identity_derivative_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityPoint<T> {
    pub x: T,
    pub estimate: DerivativeEstimate<T>,
    /// Classification of the classical slope `[f_X(x') - f_X(x)] / (x' - x)`
    /// along the chart points `x'`.
    pub slope: Convergence,
    /// `|estimate - 1|` for converged points.
    pub deviation: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityDerivativeReport<T> {
    pub points: Vec<IdentityPoint<T>>,
    /// Largest deviation over converged points.
    pub max_deviation: Option<T>,
    pub converged: usize,
}

impl<T: Scalar> IdentityDerivativeReport<T> {
    /// Every point converged with `|estimate - 1| < tol`.
    pub fn passes(&self, tol: T) -> bool {
        !self.points.is_empty() && self.converged == self.points.len() && self.max_deviation.is_some_and(|d| d < tol)
    }
}

/// Checks the claim `Df_X/Dx = 1` on a grid.
///
/// The chart quotient `[f_X(f_X^-1(f_X(x) + h)) - f_X(x)] / h` is identically
/// one whenever `f_X^-1` is a right inverse, so two extra conditions decide
/// whether the chart actually describes a neighbourhood of `x`:
///
/// * `f_X^-1(f_X(x)) = x`. Otherwise `x` sits on a flat piece of `f_X` and
///   the quotient is `0/0` there (`undefined_domain`).
/// * the classical slope of `f_X` along the chart points stays bounded.
///   A slope that blows up (`diverged`) means `f_X` is not differentiable at
///   `x`, which the claim presupposes.
pub fn identity_derivative_check<T: Scalar>(
    f_x: &BijectionSpec<T>,
    grid: &[T],
    plan: &StepPlan<T>,
) -> Result<IdentityDerivativeReport<T>> {
    let identity = BijectionSpec::identity();
    let chart = |t: T| f_x.forward(t).unwrap_or_else(|_| T::nan());
    let mut points = Vec::with_capacity(grid.len());
    for &x in grid {
        let mut estimate = nn_derivative(chart, x, f_x, &identity, plan)?;
        let u = f_x.forward(x)?;
        let representative = f_x.inverse(u)?;
        let tol = T::lit(1e-9) * T::one().max(x.abs());
        let slope_trace = QuotientTrace::raw(
            estimate
                .quotient_trace
                .iter()
                .map(|&(h, _)| {
                    let q = f_x.inverse(u + h).ok().and_then(|xh| {
                        let dx = xh - x;
                        let df = f_x.forward(xh).ok()? - u;
                        (dx != T::zero()).then(|| df / dx)
                    });
                    (h, q)
                })
                .collect(),
        );
        let slope = slope_trace.classify(plan.tolerance);
        if (representative - x).abs() > tol || slope == Convergence::UndefinedDomain {
            estimate.classification = Convergence::UndefinedDomain;
        } else if slope == Convergence::Diverged {
            estimate.classification = Convergence::Diverged;
        }
        if estimate.classification != Convergence::Converged {
            estimate.value = None;
        }
        let deviation = estimate.value.map(|v| (v - T::one()).abs());
        points.push(IdentityPoint { x, estimate, slope, deviation });
    }
    let converged = points.iter().filter(|p| p.estimate.classification == Convergence::Converged).count();
    let max_deviation = points.iter().filter_map(|p| p.deviation).reduce(T::max);
    Ok(IdentityDerivativeReport { points, max_deviation, converged })
}

/// The closed registry of functions `A` available to the derivative.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec<T> {
    Identity,
    Square,
    Cube,
    /// `c0 + c1 x + c2 x^2 + ...`
    Poly(Vec<T>),
}

impl<T: Scalar> FunctionSpec<T> {
    pub fn eval(&self, x: T) -> T {
        match self {
            FunctionSpec::Identity => x,
            FunctionSpec::Square => x * x,
            FunctionSpec::Cube => x * x * x,
            FunctionSpec::Poly(c) => c.iter().rev().fold(T::zero(), |acc, &ci| acc * x + ci),
        }
    }
}

impl<T: Scalar> FromStr for FunctionSpec<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "identity" => return Ok(FunctionSpec::Identity),
            "square" => return Ok(FunctionSpec::Square),
            "cube" => return Ok(FunctionSpec::Cube),
            _ => {}
        }
        let Some(body) = s.strip_prefix("poly:") else {
            return Err(Error::Parse {
                position: 0,
                message: format!("unknown function '{s}', expected identity | square | cube | poly:c0,c1,..."),
            });
        };
        let coeffs = body
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .and_then(T::from_f64)
                    .ok_or_else(|| Error::Param(format!("bad polynomial coefficient '{c}'")))
            })
            .collect::<Result<Vec<T>>>()?;
        Ok(FunctionSpec::Poly(coeffs))
    }
}

impl<T: Scalar> fmt::Display for FunctionSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Identity => f.write_str("identity"),
            FunctionSpec::Square => f.write_str("square"),
            FunctionSpec::Cube => f.write_str("cube"),
            FunctionSpec::Poly(c) => {
                f.write_str("poly:")?;
                for (i, ci) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{ci}")?;
                }
                Ok(())
            }
        }
    }
}

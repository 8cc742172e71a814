//! Arithmetic and calculus induced by a bijection `f`, where
//! `a (+) b = f^-1(f(a) + f(b))` and likewise for the other operations,
//! together with probes that show where such structures break down.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`). The aliases at the
//! crate root fix the scalar to `f64`; the `*32` aliases fix it to `f32`.
//!
//! ```
//! use nncalc::{velocity_compose, Bijection};
//!
//! let cubic: Bijection = "power:n=3".parse().unwrap();
//! let v = velocity_compose(0.9, 0.9, &cubic).unwrap();
//! assert!(v.superluminal);
//! assert!((v.value - 1.1339).abs() < 1e-4);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arithmetic;
pub mod audit;
pub mod bell;
pub mod bijection;
pub mod calculus;
pub mod error;
pub mod physics;
pub mod scalar;

pub use arithmetic::{
    cauchy_residual, neutral_elements, nn_add, nn_div, nn_mul, nn_sub, quasi_arithmetic_mean, InducedArithmetic,
};
pub use audit::{run_battery, AuditFinding, AuditReport, Verdict};
pub use bell::{
    brute_force_classical_bound, chsh, measurement_independence_audit, nn_expectation, ChshSettings, Outcome,
};
pub use bijection::{
    cantor_generalized_inverse, cantor_value, parse_bijection_spec, roundtrip_residual, BijectionKind, BijectionSpec,
    Interval,
};
pub use calculus::{
    convergence_classify, identity_derivative_check, nn_derivative, Convergence, FunctionSpec, StepPlan,
};
pub use error::{EntropyStage, Error, Result};
pub use physics::{
    cosmo_bijection_ratio, einstein_compose, entropy_domain_check, harmonic_average_speed, lcdm_scale_factor,
    nn_entropy, velocity_compose, CosmologyParams, ProbabilityDistribution,
};
pub use scalar::Scalar;

pub type Bijection = BijectionSpec<f64>;
pub type Arithmetic = InducedArithmetic<f64>;
pub type Distribution = ProbabilityDistribution<f64>;
pub type Model = bell::HiddenVariableModel<f64>;
pub type Plan = StepPlan<f64>;
pub type AuditConfig = audit::AuditConfig<f64>;

pub type Bijection32 = BijectionSpec<f32>;
pub type Arithmetic32 = InducedArithmetic<f32>;
pub type Distribution32 = ProbabilityDistribution<f32>;
pub type Model32 = bell::HiddenVariableModel<f32>;
pub type Plan32 = StepPlan<f32>;
pub type AuditConfig32 = audit::AuditConfig<f32>;

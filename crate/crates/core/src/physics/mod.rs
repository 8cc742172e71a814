//! Physical readings of the induced arithmetic: velocity composition,
//! generalized entropy, average speed and the LCDM reparametrization.

mod cosmology;
mod entropy;
mod velocity;

pub use cosmology::{cosmo_bijection_ratio, lcdm_scale_factor, CosmologyParams};
pub use entropy::{
    entropy_domain_check, nn_entropy, EntropyDomainReport, EntropyVerdict, ProbabilityDistribution,
    DISTRIBUTION_SUM_TOL, INPUT_SUM_TOL,
};
pub use velocity::{einstein_compose, harmonic_average_speed, velocity_compose, Composition};

//! Cesàro means and the transforms around them, limit bands, and the
//! Dixmier-trace averages built from them.

pub mod dixmier;
pub mod limit;
pub mod sampled;

pub use dixmier::{
    dixmier_estimate, dixmier_grid, log_average_estimate, prop_equivalence_triple, weighted_mean_curve,
    DixmierConfig, TripleReport,
};
pub use limit::{limit_estimate, LimitConfig, LimitEstimate, Model};
pub use sampled::{apply_transform, Domain, SampledFunction, Transform};

//! Decreasing rearrangements, distribution functions, partial integrals,
//! truncated traces and submajorization.

pub mod ops;
pub mod spectrum;
pub mod step;
pub mod tail;
pub mod values;

pub use ops::{
    decreasing_rearrangement, distribution_function, mu_from_distribution, pointwise_product,
    submajorization_leq, DistributionCurve, Submajorization,
};
pub use spectrum::{Count, Spectrum, SpectrumTail};
pub use step::{ContinuousTail, StepFunction};
pub use tail::Oscillation;
pub use values::{Growth, SingularValues};

//! Singular traces on singular-value data.
//!
//! The crate works with the singular values `μ_t` of a positive compact
//! operator, either as a sequence (a finite head plus an analytic tail) or as a
//! step function in the log domain.  On top of that it computes Marcinkiewicz
//! norms, `Z_p` seminorms, Dixmier-trace averages, zeta-function residues and
//! heat-trace asymptotics, each with an explicit error bound or limit band.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod heat;
pub mod means;
pub mod numeric;
pub mod rearrange;
pub mod scalar;
pub mod spaces;
pub mod zeta;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Spectrum64 = rearrange::Spectrum<f64>;
pub type StepFunction64 = rearrange::StepFunction<f64>;
pub type SingularValues64 = rearrange::SingularValues<f64>;
pub type LimitEstimate64 = means::LimitEstimate<f64>;
pub type Psi64 = spaces::PsiFunction<f64>;
pub type SampledFunction64 = means::SampledFunction<f64>;
pub type BetaFunction64 = heat::BetaFunction<f64>;

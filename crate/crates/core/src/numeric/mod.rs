//! Numerical building blocks: compensated sums, special functions,
//! quadrature, least squares and Euler–Maclaurin tails.

pub mod em;
pub mod lsq;
pub mod quad;
pub mod special;
pub mod sum;

pub use em::{em_sum, HeatPowerTerm, PowerTerm, SmoothTerm, Summed, Upper};
pub use lsq::least_squares;
pub use quad::{cumulative_trapezoid, gauss_legendre};
pub use special::{gamma, gamma_q, ln_gamma};
pub use sum::{sum, CompensatedSum};

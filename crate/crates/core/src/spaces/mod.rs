//! Normalizing functions, Marcinkiewicz norms, quasinorms and the `Z_p` seminorms.

pub mod diagnostics;
pub mod norms;
pub mod psi;
pub mod seminorm;

pub use diagnostics::{default_psi_diagnostics, psi_diagnostics, PsiDiagnostics, SupPoint};
pub use norms::{
    fundamental_function, fundamental_function_convexified, log_average_norm, marcinkiewicz_norm,
    marcinkiewicz_norm_from, quasinorm_f, small_ideal_constant, weighted_mean, weighted_mean_ln, Supremum,
};
pub use psi::{PsiFunction, PsiKind};
pub use seminorm::{z1_seminorm, zp_seminorm, SeminormReport, Z1Config, ZpReport};

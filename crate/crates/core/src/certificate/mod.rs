//! Exact verification of the rate proofs: each claimed rate is a weighted
//! sum of interpolation inequalities plus a sum of squares.

pub mod expr;
pub mod field;
pub mod interp;
pub mod poly;
pub mod proofs;
pub mod spot;

pub use expr::{Assignment, LinComb, ScalarSymbol, SymbolicExpr, VectorSymbol};
pub use field::Field;
pub use interp::{interp_convex, interp_smooth, Point};
pub use poly::{Poly, RatFunc};
pub use proofs::{
    alpha_large, alpha_small, build_certificate, certificate_shape, default_grid, verify, verify_distance,
    verify_funcvalue, verify_identity_all_steps, verify_residual, Certificate, CertificateReport,
    IdentityReport, Mutation, Regime, Theorem,
};
pub use spot::{numeric_spot_check, SpotConfig, SpotStats};

//! Affine rank-minimization systems whose optimum is the bi-polynomial rank,
//! and a small-scale minimum-rank oracle.

mod minrank;
mod polysolve;
mod system;
mod z2k;

pub use minrank::{minrank_interval, quadratic_form, sample_grid, MinrankInterval, DEFAULT_BUDGET};
pub use polysolve::{rational_common_zero, Feasibility};
pub(crate) use system::half_degree;
pub use system::{
    build_affine_system, build_psd_pair_system, build_sym_system, ConstraintSystem, Equation, SystemKind, Term,
};
pub use z2k::{build_z2k, iota, is_partial_matching, projection_sandwich, z2k_alpha, ProjectionSandwich};

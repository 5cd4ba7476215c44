//! Clow combinatorics, the characteristic-coefficient program and constructive
//! bi-polynomial decompositions of determinant expansions.

mod affine;
mod bidec;
pub mod bounds;
pub mod clow;
mod decompose;
mod mv;

pub use affine::{det_of_polynomials, AffineMatrixPoly};
pub use bidec::BiDecomposition;
pub use bounds::{dc_bound_from_brank, generic_brank_floor, sqrt_bound};
pub use clow::{clow_sum, clow_sum_bruteforce, enumerate_clow_sequences, Clow, ClowFamily, ClowFilter, ClowSequence};
pub use decompose::{decompose_from_dc, decompose_p, decompose_q, p_target};
pub use mv::{mv_coefficients, ClowProgram, ForwardPass, MvCoefficients, Node};

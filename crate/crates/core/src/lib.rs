//! Exact and numeric tools for bi-polynomial rank, determinantal complexity
//! lower bounds, and their certificates.

pub mod abpdec;
pub mod certify;
pub mod error;
pub mod exactla;
pub mod permhess;
pub mod polyring;
pub mod rankmin;
pub mod rational;

pub use error::{Error, Result};

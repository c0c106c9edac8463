//! Exact and numeric checks for trigonometric vee-systems.
//!
//! A configuration of covectors with multiplicities determines the
//! prepotential
//!
//! ```text
//! F = y^3/3 + sum c_a a(x)^2 y + lambda sum c_a f(a(x)),   f''' = cot
//! ```
//!
//! and this crate decides exactly when `F` solves the WDVV equations,
//! solves for `lambda^2`, verifies solutions numerically, and relates the
//! configuration to a Calogero-Moser-Sutherland operator with a factorized
//! eigenfunction.

pub mod catalog;
pub mod cms;
pub mod config;
pub mod error;
pub mod exactnum;
pub mod numwdvv;
pub mod polycon;
pub mod veecheck;

pub use error::{Error, Result};
pub use exactnum::{RatMatrix, Rational};

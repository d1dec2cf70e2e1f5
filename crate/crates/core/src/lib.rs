//! Hadamard-convolution duality for classes of analytic functions on the unit disk.
//!
//! The crate is layered bottom-up:
//!
//! - [`series`]: truncated Taylor series with geometric tail bounds, Hadamard
//!   convolution, dilation `P_x`, and Cauchy-estimate tails.
//! - [`contour`]: argument-principle zero counting and min-modulus sweeps that
//!   turn "`f(z) != 0` on a disk" into a [`Certificate`].
//! - [`family`]: compact parameterized classes (pencils, rational kernels, fixed
//!   members), complete hulls, border elements and dilation decompositions.
//! - [`duality`]: decision procedures for duals, transposes, perps and dual
//!   hulls, functional images, and theorem verifiers.

pub mod config;
pub mod contour;
pub mod duality;
pub mod error;
pub mod family;
pub mod series;

pub use num_complex::Complex64;

pub use config::Config;
pub use contour::{Certificate, CertificateParams, ContourConfig, Status};
pub use error::{Error, Result};
pub use family::{Domain, FamilySpec, Generator, Member, MemberTag, ParamGrid};
pub use series::{EvalResult, Evaluable, Tail, TruncSeries};

/// Shorthand used throughout the crate.
pub type C = Complex64;

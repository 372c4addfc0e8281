//! Reproducible test instances.
//!
//! [`AffineInstance`] has a closed-form solution computed by a direct linear
//! solve. [`SaddleInstance`] encodes an ℓ1-regularised bilinear game with box
//! constraints; it has no closed form, so its ground truth comes from agreement
//! between independent methods.

mod affine;
mod io;
mod saddle;

pub use affine::{make_affine_instance, solve_affine_direct, AffineInstance};
pub use io::Instance;
pub use saddle::{make_saddle_instance, SaddleInstance};

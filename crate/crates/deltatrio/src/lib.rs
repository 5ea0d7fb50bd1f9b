//! Bound states of three charged particles on a line with delta interactions.
//!
//! Two identical particles of mass `m` and charge `-e` interact with a third
//! particle of mass `M` and charge `+Ze` through delta potentials. After the
//! center of mass is removed, the relative motion is governed by a 2-D
//! Schrödinger operator with three attractive/repulsive delta lines through
//! the origin. Its discrete spectrum below the two-body threshold `-1/2` is
//! detected through a family of half-line integral operators (the "effective
//! skeletons"): `E = -k²` is an eigenvalue exactly when some sector skeleton
//! `S(k)` has a nontrivial kernel.
//!
//! The crate discretizes the skeletons by Nyström quadrature on `(0, ∞)`,
//! scans `k` for zero crossings of eigenvalue branches, and computes the
//! critical-charge upper-bound curve `Z_c^ub(M/m)` from the sign of the
//! fully symmetric sector's kernel at the threshold.
//!
//! Modules follow the pipeline:
//!
//! - [`geometry`]: physical parameters → reduced geometry (angles, couplings)
//! - [`kernels`]: pointwise Fourier-side kernels and their parity blocks
//! - [`quadrature`]: half-line quadrature grids and adaptive integration
//! - [`operators`]: Nyström assembly, symmetric eigensolver, HS norms
//! - [`sectors`]: the four effective skeletons and the bound-state solver
//! - [`critical`]: threshold-kernel sign condition and the critical curve
//! - [`verify`]: executable checks binding the numerics to known values,
//!   including an independent 2-D finite-difference oracle

pub mod critical;
pub mod dd;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod linalg;
pub mod operators;
pub mod quadrature;
pub mod sectors;
pub mod verify;

pub use error::{Error, Result};

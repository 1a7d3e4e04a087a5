//! Numerical toolkit for the semilinear heat equation
//! `u_t = Δu + u^p + f(x)`, `u(0, ·) = φ`, posed on a discretized metric
//! measure space whose Laplacian is given implicitly through a heat kernel.
//!
//! The crate is organized bottom-up:
//!
//! - [`space`]: finite metric measure spaces (lattices, imported point clouds).
//! - [`profiles`]: bound profiles `Φ` and the structural conditions on them.
//! - [`kernel`]: heat kernels (Gauss–Weierstrass, Cauchy–Poisson, profile
//!   kernels) and numerical axiom checks.
//! - [`semigroup`]: the operator `K_t`, time integrals, Duhamel sums.
//! - [`solver`]: monotone Picard iteration for the integral equation,
//!   local existence horizons and non-existence witnesses.
//! - [`analysis`]: regime classification, Harnack-type inequalities,
//!   weighted integral bounds, small-data certificates and Hölder fits.

pub mod analysis;
pub mod error;
pub mod kernel;
pub mod numeric;
pub mod profiles;
pub mod semigroup;
pub mod solver;
pub mod space;

pub use error::{Error, Result};
pub use kernel::HeatKernel;
pub use profiles::Profile;
pub use semigroup::{Semigroup, TimeGrid, Trajectory};
pub use space::{GridFunction, MetricMeasureGrid};

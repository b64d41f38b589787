//! Asymptotic theory and finite-size experiments for adversarially trained
//! random-features regression.
//!
//! The crate has four layers:
//!
//! - [`special`]: scalar building blocks (Stieltjes transform, effective
//!   noise, the scalarized `F`/`G` functions and their root equations).
//! - [`theory`]: the five-variable convex-concave saddle problem whose
//!   solution parameterizes the limiting adversarial risk, plus sweeps.
//! - [`simulation`]: finite-size data generation, feature maps, the `J`
//!   kernel, closed-form worst-case perturbations, and robust-ERM training.
//! - [`evaluation`]: adversarial/standard risk measurement by three
//!   independent routes (analytic Gaussian-equivalent formula, Monte Carlo
//!   with the closed-form adversary, Monte Carlo with a PGD oracle).

pub mod error;
pub mod linalg;
pub mod rng;
pub mod special;

pub use error::{CoreError, Result};

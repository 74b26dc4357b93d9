//! Copulas of discrete joints: step cdfs, checkerboard and interpolating
//! copulas, grid divergences, and the FGM family.

pub mod cdf;
pub mod dilog;
pub mod fgm;
pub mod grid;
pub mod quadrature;
pub mod sampler;

pub use cdf::{generalized_inverse, StepCdf};
pub use dilog::dilog;
pub use fgm::{fgm_divergence_quadrature, fgm_fit_bernoulli, fgm_pearson_closed_form, FgmCopula};
pub use grid::{checkerboard, grid_divergence, minimality_check, random_refinement, GridCopula};
pub use quadrature::GaussLegendre;
pub use sampler::{interpolating_sample, interpolating_sample_range, ks_uniform, InterpolatingSampler, RandomizationScheme};

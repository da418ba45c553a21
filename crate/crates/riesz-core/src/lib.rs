//! Numerical engine for typed Riesz means of general Dirichlet series:
//! direct summation with smooth cutoff weights, Perron-type contour
//! representations of those means, the Poisson-smoothed kernels tying
//! the two together on the boundary line, and the experiment drivers
//! that measure boundary convergence.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod frequency;
pub mod kernels;
pub mod perron;
pub mod quadrature;
pub mod series;
pub mod special;
pub mod util;

pub use error::{Error, Result};
pub use experiments::ExperimentConfig;
pub use frequency::{Frequency, FrequencyKind, DEFAULT_MAX_TERMS};
pub use kernels::{KernelParams, SmoothedKernelGrid};
pub use perron::{
    boundary_integral, boundary_integral_with_grid, cone_laplace, convolution_residual,
    perron_boundary, perron_line,
};
pub use quadrature::{Integral, QuadratureSpec, RealLineIntegral};
pub use series::{AnalyticTarget, ConvergenceReport, DirichletSeries, Reference};

//! Contours, trapezoidal quadrature, the Cauchy transform and slice-regularity residuals.

mod contour;
mod quadrature;
mod regularity;
mod transform;

pub use contour::{build_contour, Circle, Contour, ContourPolicy, DEFAULT_RADIUS_FRAC};
pub use quadrature::{
    integrate, Node, QuadValue, QuadratureOptions, QuadratureResult, DEFAULT_INITIAL_NODES,
    DEFAULT_MAX_NODES, DEFAULT_QUADRATURE_TOL,
};
pub use regularity::{slice_regularity_residual, DEFAULT_FD_STEP, DEFAULT_REGULARITY_TOL};
pub use transform::{
    cauchy_derivative, cauchy_differentiate, cauchy_transform, cauchy_transform_report, contour_for,
};

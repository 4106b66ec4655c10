//! Special functions: complex log-gamma, Fox H-functions by Mellin–Barnes
//! contour integration, adaptive quadrature and Gauss–Laguerre rules.

pub mod bivariate;
pub mod contour;
pub mod foxh;
pub mod gamma;
pub mod laguerre;
pub mod quadrature;

pub use bivariate::{fox_h_bivariate, fox_h_bivariate_scaled, BivariateFoxHSpec, BivariateValue, JointTuple};
pub use contour::{ContourConfig, Crossing};
pub use foxh::{fox_h, fox_h_scaled, FoxHSpec, FoxHValue, HTuple};
pub use gamma::{gamma, ln_gamma, log_gamma_complex};
pub use laguerre::{gauss_laguerre, QuadratureRule};
pub use quadrature::{integrate, integrate_with_breaks, Integral, QuadSettings, QuadValue, Tracked};

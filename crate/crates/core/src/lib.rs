//! Physical-layer secrecy metrics of α-F fading channels with pointing errors.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: complex log-gamma, univariate and bivariate Fox H-functions
//!   evaluated by Mellin–Barnes contour integration, adaptive Gauss–Kronrod
//!   quadrature and Gauss–Laguerre rules.
//! - [`channel`]: α-F with pointing errors SNR statistics.
//! - [`secrecy`]: SPSC, average secrecy capacity, secrecy outage lower bound
//!   and their high-SNR asymptotics.
//! - [`mc`]: Monte Carlo sampling and estimators used to validate the above.
//!
//! The numerical core is generic over the scalar type through [`Real`]
//! (`f32` or `f64`); the `*64` aliases below fix it to `f64`. The Monte
//! Carlo module works in `f64` only.
//!
//! ```
//! use secrecy_lab::{ChannelParams64, Evaluator64, SecrecyOptions64, SecrecyScenario64};
//!
//! # fn main() -> Result<(), secrecy_lab::Error> {
//! let d = ChannelParams64::new(2.0, 1.0, 1.5, 1.2, 10.0)?; // alpha, mu, m, z, gamma_bar
//! let e = ChannelParams64::new(2.0, 1.0, 3.0, 0.7, 1.0)?;
//! let s = SecrecyScenario64::new(d, e, 0.5)?;
//! let ev = Evaluator64::new(&s, &SecrecyOptions64::default())?;
//! let (spsc, sop) = (ev.spsc()?.value, ev.sop_lower()?.value);
//! assert!(spsc > 0.5 && sop < 1.0);
//! # Ok(())
//! # }
//! ```

// `!(x > 0)` also rejects NaN, which is what the parameter guards want.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Quadrature nodes and series coefficients are kept as published.
#![allow(clippy::excessive_precision)]

pub mod channel;
pub mod error;
pub mod mc;
mod real;
pub mod secrecy;
pub mod specfun;

pub use error::{Error, Result};
pub use real::Real;

pub type FoxHSpec64 = specfun::FoxHSpec<f64>;
pub type BivariateFoxHSpec64 = specfun::BivariateFoxHSpec<f64>;
pub type ContourConfig64 = specfun::ContourConfig<f64>;
pub type QuadratureRule64 = specfun::QuadratureRule<f64>;
pub type ChannelParams64 = channel::ChannelParams<f64>;
pub type Channel64 = channel::Channel<f64>;
pub type DerivedConstants64 = channel::DerivedConstants<f64>;
pub type PathLoss64 = channel::PathLoss<f64>;
pub type SecrecyScenario64 = secrecy::SecrecyScenario<f64>;
pub type SecrecyOptions64 = secrecy::SecrecyOptions<f64>;
pub type Evaluator64 = secrecy::Evaluator<f64>;
pub type MetricResult64 = secrecy::MetricResult<f64>;

//! Numerical analysis of the scalar Caputo fractional differential equation
//! with a single constant delay,
//!
//! ```text
//!   D^alpha x(t) = a x(t) + b x(t - tau) + f(x(t), x(t - tau)),   0 < alpha < 1,
//!   x(t) = phi(t),  t in [-tau, 0],
//! ```
//!
//! built around the delayed Mittag-Leffler kernels
//! `E_{alpha,beta}^{a,b,tau}(t) = L^{-1}[ s^{alpha-beta} / (s^alpha - a - b e^{-s tau}) ](t)`
//! for `beta = 1` and `beta = alpha`.
//!
//! The crate provides:
//!
//! - [`problem`]: problem parameters, history functions, trajectories,
//!   coefficient classification;
//! - [`charfn`]: the characteristic function `Q(s) = s^alpha - a - b e^{-s tau}`,
//!   root counting by the argument principle, root location, and the algebraic
//!   `a <= b < -a` stability certificate;
//! - [`mlf`]: kernel evaluation by inverse-Laplace quadrature, the classical
//!   two-parameter Mittag-Leffler function, decay profiles and L1 norms;
//! - [`solver`]: a fractional Adams-Bashforth-Moulton scheme and a Picard
//!   iteration of the variation-of-constants map, each usable as the other's
//!   oracle;
//! - [`stability`]: Lipschitz modulus estimation and the asymptotic-stability
//!   certification pipeline.
//!
//! The crate is `no_std` (with `alloc`); all floating-point math goes through
//! `libm`. Everything is plain `f64` and all types are immutable after
//! construction and safe to share across threads.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod charfn;
pub mod error;
pub mod mlf;
pub mod problem;
pub mod quad;
pub mod solver;
pub mod special;
pub mod stability;

pub use error::Error;
pub use problem::{
    validate_params, CoeffClass, HistoryFunction, Nonlinearity, ProblemParams, Scheme, Trajectory,
};

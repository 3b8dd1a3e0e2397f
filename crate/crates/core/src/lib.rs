//! Numerical laboratory for the Wick-ordered stochastic complex
//! Ginzburg–Landau equation on the two-dimensional torus.
//!
//! The crate is organised bottom-up:
//!
//! * [`polyalg`] – generalized Laguerre / Hermite algebra (float and exact),
//!   the Laguerre sum formula and a small two-variable polynomial type.
//! * [`spectral`] – truncated Fourier fields, frequency projectors,
//!   dealiased products, Littlewood–Paley blocks and Besov/Sobolev norms.
//! * [`noise`] – the truncated stochastic convolution as a bank of complex
//!   Ornstein–Uhlenbeck modes, Wick monomials and Monte Carlo harnesses.
//! * [`solver`] – exponential integrators for the `u` and `v` forms of the
//!   truncated dynamics and a Picard realisation of the mild formulation.
//! * [`energy`] – the `A_{p,η}` quadratic form, its positivity window and the
//!   runtime `L^p` energy monitor.
//! * [`gibbs`] – the truncated Gibbs measure, tempered SMC sampling and the
//!   statistical invariance test.
//! * [`cli`] – configuration, manifests and the `scgl` subcommands.

pub mod energy;
pub mod error;
pub mod gibbs;
pub mod noise;
pub mod polyalg;
pub mod rng;
pub mod solver;
pub mod spectral;
pub mod stats;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};
pub use num_complex::Complex64;

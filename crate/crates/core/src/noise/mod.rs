//! The truncated stochastic convolution `Ψ_N`: each Fourier mode is an
//! independent complex Ornstein–Uhlenbeck process with stationary variance
//! `χ_N(n)² γ / (a₁(|n|² + 1))`. Complex Gaussians are circular with
//! `E|g|² = 1`.

mod mc;
mod params;
mod state;
mod wick;

pub use mc::{mc_exp_re, mc_orthogonality, wick_cauchy_distance, wick_cauchy_trend, CauchyReport, ComplexStat, OrthoSpec};
pub use params::PhysicsParams;
pub use state::{covariance_kernel, mode_variance, ou_transition, sample_stationary, sigma_const, NoiseState};
pub use wick::{wick_grid, wick_monomial, wick_monomial_full, wick_scalar, wick_tensor, wick_tensor_from, WickTensor};

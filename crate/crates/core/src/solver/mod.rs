//! Time integration of the truncated renormalized dynamics.
//!
//! Both formulations use exponential integrators: the diagonal linear part
//! `(a₁ + i a₂)(Δ - 1)` is applied exactly, the nonlinearity explicitly, and
//! the forcing enters through exact Ornstein–Uhlenbeck increments of `Ψ_N`.
//! With `c₁ = c₂ = 0` the `u`-form reproduces `Ψ_N` without discretization
//! error.

mod config;
mod etd;
mod path;
mod picard;
mod run;

pub use config::{Formulation, Placement, Scheme, SimConfig};
pub use etd::{phi_functions, step_u, step_v, wick_sigma, Stepper};
pub use path::{coupled_paths, noise_path, NoisePath};
pub use picard::{contraction_horizon, picard_solve, PicardOptions, PicardSolution};
pub use run::{convergence_in_n, initial_v0, integrate, record, simulate, x_distance, ConvergenceReport, SimOutput, Trajectory, TrajectoryRecord};

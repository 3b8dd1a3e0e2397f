//! The `A_{p,η}` quadratic form, its positivity window, the global
//! well-posedness classifier and the runtime `L^p` energy monitor.
//!
//! The window is derived from the 2×2 matrix of `A_{p,η}` (determinant
//! and trace), so it does not depend on how the ratio `r` is oriented.
//! Reports carry both `|a₁/a₂|` and `|a₂/a₁|` and the closed-form
//! bound next to the matrix-derived endpoint.

mod monitor;
mod window;

pub use monitor::{identity_residuals, lp_growth_bound, monitor_energy, EnergyLedger, GrowthReport};
pub use window::{
    default_eta, form_matrix, gwp_admissible, matrix_bound, min_eigenvalue, positivity_window, quadratic_form, stated_bound,
    Admissibility, Window,
};

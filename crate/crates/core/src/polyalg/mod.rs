//! Generalized Laguerre and Hermite polynomial algebra.
//!
//! Floating-point evaluation uses forward three-term recursion, which is
//! stable for the low degrees (≤ 10) used by the Wick calculus. An exact
//! rational mode backs the identity checks so that algebraic failures are
//! never confused with round-off.

mod bipoly;
mod exact;
mod hermite;
mod laguerre;

pub use bipoly::{expand_bipoly, BiPoly};
pub use exact::RatPoly;
pub use hermite::{
    eval_hermite, hermite_poly_symbolic, verify_hermite_identities, HermiteCheck, HermiteSpec,
};
pub use laguerre::{
    eval_laguerre, eval_laguerre_exact, laguerre, laguerre_poly, laguerre_scaled, laguerre_sum_coeffs,
    laguerre_sum_lhs, scaling_residual_exact, sum_formula_max_error, verify_three_point, verify_three_point_exact, LaguerreSpec,
};

/// `n!` as a float; exact for the small arguments used here.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Binomial coefficient as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

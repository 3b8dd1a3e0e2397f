//! Fourier-side infrastructure on `(ℝ/2πℤ)²`.
//!
//! Convention: `f(x) = Σ f̂(n) e^{in·x}` with `f̂(n) = (2π)^{-2} ∫ f e^{-in·x} dx`,
//! so `‖f‖²_{L²} = (2π)² Σ |f̂(n)|²`. Physical grids are `M × M` with nodes
//! `2π(i₁, i₂)/M`; `L^∞` norms are grid maxima.

mod besov;
mod cutoff;
mod fft;
mod field;
mod product;
mod snapshot;

pub use besov::{besov_norm, holder_norm, j_max, lp_block, lp_blocks, lp_multiplier, lp_norm, phi0, sobolev_norm, BesovProfile};
pub use cutoff::{project, smoothstep, CutoffKind, CutoffSpec};
pub use fft::Grid;
pub use field::SpectralField;
pub use product::{dealias_floor, dealiased_product, pointwise};
pub use snapshot::{read_snapshot, write_snapshot, SNAPSHOT_MAGIC, SNAPSHOT_VERSION};

use crate::noise::PhysicsParams;
use num_complex::Complex64;

/// Area of the torus, `(2π)²`.
pub const TORUS_AREA: f64 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;

/// Symbol of `1 - Δ` at `n`.
pub fn lambda(n1: i64, n2: i64) -> f64 {
    (n1 * n1 + n2 * n2) as f64 + 1.0
}

/// `S(t) f` with `S(t) = e^{t(a₁ + i a₂)(Δ - 1)}`.
pub fn semigroup_apply(f: &SpectralField, t: f64, params: &PhysicsParams) -> SpectralField {
    let a = Complex64::new(params.a1, params.a2);
    f.apply_multiplier(|n1, n2| (-a * (t * lambda(n1, n2))).exp())
}

use super::NoiseState;
use crate::polyalg::{factorial, laguerre_scaled};
use crate::spectral::{dealias_floor, Grid, SpectralField};
use num_complex::Complex64;

/// `:z^k z̄^ℓ:` at variance `σ`, using the reduced exponents:
/// `(-1)^ℓ ℓ! L_ℓ^{(k-ℓ)}(|z|²; σ) z^{k-ℓ}` for `k ≥ ℓ`, and the
/// conjugate-symmetric branch with `z̄^{ℓ-k}` otherwise.
pub fn wick_scalar(k: usize, ell: usize, z: Complex64, sigma: f64) -> Complex64 {
    let r = z.norm_sqr();
    let (low, sup, base) = if k >= ell { (ell, k - ell, z) } else { (k, ell - k, z.conj()) };
    let sign = if low % 2 == 0 { 1.0 } else { -1.0 };
    base.powu(sup as u32) * (sign * factorial(low) * laguerre_scaled(low, sup as f64, sigma, r))
}

/// `:Ψ^k Ψ̄^ℓ:` evaluated pointwise on an `m × m` grid.
pub fn wick_grid(psi: &Grid, k: usize, ell: usize, sigma: f64) -> Grid {
    psi.map(|z| wick_scalar(k, ell, z, sigma))
}

/// `:Ψ_N^k Ψ̄_N^ℓ:` truncated to band `N`, evaluated on a grid fine enough
/// that the retained coefficients are exact.
pub fn wick_monomial(state: &NoiseState, k: usize, ell: usize) -> SpectralField {
    let n = state.n_cut();
    let m = state.modes.grid_size().max(dealias_floor(k + ell, n));
    wick_grid(&Grid::from_field(&state.modes, m), k, ell, state.sigma_n_const).to_field(n, state.modes.grid_size())
}

/// `:Ψ^k Ψ̄^ℓ:` on its full band `(k + ℓ)N`, no truncation.
pub fn wick_monomial_full(psi: &SpectralField, sigma: f64, k: usize, ell: usize) -> SpectralField {
    let band = (k + ell) * psi.n_max();
    let m = dealias_floor(1, band);
    wick_grid(&Grid::from_field(psi, m), k, ell, sigma).to_field(band, m)
}

/// All `:Ψ^k Ψ̄^ℓ:` with `0 ≤ k ≤ m`, `0 ≤ ℓ ≤ m-1`, sampled on a common
/// physical grid on which every product entering the `v`-nonlinearity is
/// alias-free.
#[derive(Clone, Debug)]
pub struct WickTensor {
    m: usize,
    n_cut: usize,
    field_grid: usize,
    grids: Vec<Grid>,
}

impl WickTensor {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn grid_size(&self) -> usize {
        self.grids[0].size()
    }

    /// Physical values of `:Ψ^k Ψ̄^ℓ:`.
    pub fn grid(&self, k: usize, ell: usize) -> &Grid {
        assert!(k <= self.m && ell < self.m, "entry ({k}, {ell}) outside the tensor");
        &self.grids[k * self.m + ell]
    }

    /// Entry `(k, ℓ)` truncated to band `N`.
    pub fn entry(&self, k: usize, ell: usize) -> SpectralField {
        self.grid(k, ell).to_field(self.n_cut, self.field_grid)
    }

    /// A tensor whose only non-zero entry is `(0, 0) ≡ value`.
    pub fn constant_only(m: usize, n_cut: usize, field_grid: usize, value: Complex64) -> Self {
        let g = dealias_floor(2 * m - 1, n_cut).max(field_grid);
        let zero = Complex64::new(0.0, 0.0);
        let grids = (0..(m + 1) * m)
            .map(|i| Grid::filled(g, if i == 0 { value } else { zero }))
            .collect();
        Self { m, n_cut, field_grid, grids }
    }
}

pub fn wick_tensor(state: &NoiseState, m: usize) -> WickTensor {
    wick_tensor_from(&state.modes, state.sigma_n_const, m)
}

/// Tensor of an arbitrary band-limited field `psi` Wick-ordered at variance `sigma`.
pub fn wick_tensor_from(psi: &SpectralField, sigma: f64, m: usize) -> WickTensor {
    let n = psi.n_max();
    let field_grid = psi.grid_size();
    let g = dealias_floor(2 * m - 1, n).max(field_grid);
    let psi = Grid::from_field(psi, g);
    let mut grids = Vec::with_capacity((m + 1) * m);
    for k in 0..=m {
        for ell in 0..m {
            grids.push(wick_grid(&psi, k, ell, sigma));
        }
    }
    WickTensor { m, n_cut: n, field_grid, grids }
}

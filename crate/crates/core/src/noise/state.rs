use super::PhysicsParams;
use crate::rng::{complex_normal, StreamRng};
use crate::spectral::{lambda, CutoffSpec, SpectralField};
use crate::{Error, Result};
use num_complex::Complex64;

/// `σ_N = Σ_n χ_N(n)² γ / (a₁(|n|² + 1))`.
pub fn sigma_const(n_cut: usize, cutoff: &CutoffSpec, params: &PhysicsParams) -> f64 {
    let n = n_cut as i64;
    let mut s = 0.0;
    for a in -n..=n {
        for b in -n..=n {
            let chi = cutoff.chi(a, b, n_cut);
            if chi != 0.0 {
                s += chi * chi / lambda(a, b);
            }
        }
    }
    s * params.gamma / params.a1
}

/// Stationary variance of mode `n`.
pub fn mode_variance(n: (i64, i64), n_cut: usize, cutoff: &CutoffSpec, params: &PhysicsParams) -> f64 {
    let chi = cutoff.chi(n.0, n.1, n_cut);
    chi * chi * params.gamma / (params.a1 * lambda(n.0, n.1))
}

/// Exact OU transition of mode `n` over `dt`: `(decay, innovation std)`.
pub fn ou_transition(n: (i64, i64), dt: f64, n_cut: usize, cutoff: &CutoffSpec, params: &PhysicsParams) -> (Complex64, f64) {
    let lam = lambda(n.0, n.1);
    let decay = (-Complex64::new(params.a1, params.a2) * (lam * dt)).exp();
    let chi = cutoff.chi(n.0, n.1, n_cut);
    let var = chi * chi * params.gamma * (-(-2.0 * params.a1 * lam * dt).exp_m1()) / (params.a1 * lam);
    (decay, var.sqrt())
}

/// `ζ(n, t₁, t₂) = E[Ψ̂_n(t₁) conj Ψ̂_n(t₂)]` without cutoff.
pub fn covariance_kernel(n: (i64, i64), t1: f64, t2: f64, params: &PhysicsParams) -> Result<Complex64> {
    if t1 > t2 {
        return Err(Error::Domain(format!("covariance kernel needs t1 <= t2, got {t1} > {t2}")));
    }
    let lam = lambda(n.0, n.1);
    let decay = (-Complex64::new(params.a1, -params.a2) * ((t2 - t1) * lam)).exp();
    Ok(decay * (params.gamma / (params.a1 * lam)))
}

/// The truncated stochastic convolution `Ψ_N` as a bank of OU modes.
#[derive(Clone, Debug)]
pub struct NoiseState {
    pub modes: SpectralField,
    pub time: f64,
    pub cutoff: CutoffSpec,
    pub sigma_n_const: f64,
    pub params: PhysicsParams,
    rng: StreamRng,
}

/// Draws `Ψ_N` from its stationary law on a box of half-width `n_cut`.
pub fn sample_stationary(
    n_cut: usize,
    grid_size: usize,
    cutoff: CutoffSpec,
    params: PhysicsParams,
    mut rng: StreamRng,
) -> NoiseState {
    let modes = SpectralField::from_fn(n_cut, grid_size, |a, b| {
        let g = complex_normal(&mut rng);
        g * mode_variance((a, b), n_cut, &cutoff, &params).sqrt()
    });
    NoiseState::from_modes(modes, cutoff, params, rng)
}

impl NoiseState {
    /// Wraps given mode values (e.g. a deterministic start such as zero).
    pub fn from_modes(modes: SpectralField, cutoff: CutoffSpec, params: PhysicsParams, rng: StreamRng) -> Self {
        let sigma_n_const = sigma_const(modes.n_max(), &cutoff, &params);
        Self { modes, time: 0.0, cutoff, sigma_n_const, params, rng }
    }

    pub fn n_cut(&self) -> usize {
        self.modes.n_max()
    }

    /// One exact OU step using the state's own generator.
    pub fn ou_step(&mut self, dt: f64) {
        let n = self.n_cut() as i64;
        let side = self.modes.side();
        let mut gs = Vec::with_capacity(side * side);
        for _ in 0..side * side {
            gs.push(complex_normal(&mut self.rng));
        }
        let bank = SpectralField::from_coeffs(n as usize, self.modes.grid_size(), gs);
        self.ou_step_with(dt, &bank);
    }

    /// One exact OU step with externally supplied complex standard normals,
    /// read by wavenumber from `bank` (whose band may exceed this state's).
    pub fn ou_step_with(&mut self, dt: f64, bank: &SpectralField) {
        let n_cut = self.n_cut();
        let (cutoff, params) = (self.cutoff, self.params);
        let n = n_cut as i64;
        for a in -n..=n {
            for b in -n..=n {
                let (decay, std) = ou_transition((a, b), dt, n_cut, &cutoff, &params);
                let i = self.modes.index(a, b);
                let c = &mut self.modes.coeffs_mut()[i];
                *c = decay * *c + bank.get(a, b) * std;
            }
        }
        self.time += dt;
    }

    /// Standard normals for one step on a box of half-width `n_cut`.
    pub fn draw_bank(rng: &mut StreamRng, n_cut: usize, grid_size: usize) -> SpectralField {
        let side = 2 * n_cut + 1;
        let gs = (0..side * side).map(|_| complex_normal(rng)).collect();
        SpectralField::from_coeffs(n_cut, grid_size, gs)
    }

    pub fn rng_mut(&mut self) -> &mut StreamRng {
        &mut self.rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn unit() -> PhysicsParams {
        PhysicsParams { a1: 1.0, a2: 0.0, c1: 0.0, c2: 0.0, gamma: 1.0, m: 2 }
    }

    #[test]
    fn sigma_small_cases() {
        assert_eq!(sigma_const(0, &CutoffSpec::sharp(), &unit()), 1.0);
        assert!((sigma_const(1, &CutoffSpec::sharp(), &unit()) - 3.0).abs() < 1e-15);
        assert_eq!(sigma_const(0, &CutoffSpec::smooth(), &unit()), 1.0);
    }

    #[test]
    fn kernel_values() {
        let p = PhysicsParams { a1: 1.0, a2: 2.0, ..unit() };
        assert!((covariance_kernel((0, 0), 0.3, 0.3, &unit()).unwrap() - 1.0).norm() < 1e-15);
        assert!((covariance_kernel((1, 0), 0.0, 0.0, &unit()).unwrap() - 0.5).norm() < 1e-15);
        let z = covariance_kernel((1, 0), 1.0, 1.5, &p).unwrap();
        let want = Complex64::from_polar(0.5 * (-1.0f64).exp(), 2.0);
        assert!((z - want).norm() < 1e-15);
        assert!(covariance_kernel((1, 0), 2.0, 1.0, &p).is_err());
    }

    #[test]
    fn transition_preserves_stationary_variance() {
        let p = PhysicsParams { a2: 0.7, gamma: 1.3, ..unit() };
        let c = CutoffSpec::smooth();
        for n in [(0, 0), (1, 2), (3, 0)] {
            let v = mode_variance(n, 4, &c, &p);
            let (d, s) = ou_transition(n, 0.013, 4, &c, &p);
            assert!((d.norm_sqr() * v + s * s - v).abs() < 1e-15);
            // small-dt innovation variance is 2γχ²dt
            let (_, s) = ou_transition(n, 1e-7, 4, &c, &p);
            let chi = c.chi(n.0, n.1, 4);
            assert!((s * s / (2.0 * p.gamma * chi * chi * 1e-7) - 1.0).abs() < 1e-5 || chi == 0.0);
        }
    }

    #[test]
    fn transition_composes_exactly() {
        let p = PhysicsParams { a2: -0.4, ..unit() };
        let c = CutoffSpec::sharp();
        let (d1, s1) = ou_transition((1, 1), 0.1, 3, &c, &p);
        let (d3, s3) = ou_transition((1, 1), 0.3, 3, &c, &p);
        assert!((d1 * d1 * d1 - d3).norm() < 1e-15);
        let v = s1 * s1 * (1.0 + d1.norm_sqr() + d1.norm_sqr() * d1.norm_sqr());
        assert!((v - s3 * s3).abs() < 1e-15);
    }

    #[test]
    fn seeded_sampling_is_deterministic() {
        let a = sample_stationary(3, 16, CutoffSpec::smooth(), unit(), stream(5, 0));
        let b = sample_stationary(3, 16, CutoffSpec::smooth(), unit(), stream(5, 0));
        assert_eq!(a.modes, b.modes);
    }
}

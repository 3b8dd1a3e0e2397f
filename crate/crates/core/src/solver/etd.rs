use super::config::{Placement, Scheme, SimConfig};
use crate::noise::{wick_scalar, wick_tensor_from, NoiseState, WickTensor};
use crate::polyalg::binomial;
use crate::spectral::{lambda, project, Grid, SpectralField};
use crate::{Error, Result};
use num_complex::Complex64;

/// `(e^z - 1)/z` and `(e^z - 1 - z)/z²`, by series near zero.
pub fn phi_functions(z: Complex64) -> (Complex64, Complex64) {
    if z.norm() < 0.2 {
        let (mut t1, mut t2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let mut term = Complex64::new(1.0, 0.0);
        // term = z^k / (k+1)!, φ₂ uses z^k / (k+2)!
        for k in 0..20 {
            t1 += term;
            t2 += term / (k as f64 + 2.0);
            term = term * z / (k as f64 + 2.0);
        }
        (t1, t2)
    } else {
        let e = z.exp();
        ((e - 1.0) / z, (e - 1.0 - z) / (z * z))
    }
}

/// Precomputed exponential-integrator coefficients for one configuration.
#[derive(Clone, Debug)]
pub struct Stepper {
    cfg: SimConfig,
    sigma: f64,
    decay: Vec<Complex64>,
    phi1: Vec<Complex64>,
    phi2: Vec<Complex64>,
}

impl Stepper {
    /// `sigma` is the Wick variance used by the `u`-form nonlinearity.
    pub fn new(cfg: &SimConfig, sigma: f64) -> Result<Self> {
        cfg.validate()?;
        let a = Complex64::new(cfg.params.a1, cfg.params.a2);
        let n = cfg.n_cut as i64;
        let (mut decay, mut phi1, mut phi2) = (Vec::new(), Vec::new(), Vec::new());
        for n1 in -n..=n {
            for n2 in -n..=n {
                let z = -a * (lambda(n1, n2) * cfg.dt);
                let (p1, p2) = phi_functions(z);
                decay.push(z.exp());
                phi1.push(p1 * cfg.dt);
                phi2.push(p2 * cfg.dt);
            }
        }
        Ok(Self { cfg: cfg.clone(), sigma, decay, phi1, phi2 })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    fn coupling(&self) -> Complex64 {
        -Complex64::new(self.cfg.params.c1, self.cfg.params.c2)
    }

    fn inner(&self, f: &SpectralField) -> SpectralField {
        match self.cfg.placement {
            Placement::NoiseOnly => f.clone(),
            Placement::Projected => project(f, &self.cfg.inner_cutoff, self.cfg.n_cut),
        }
    }

    /// `-(c₁ + i c₂) :|u|^{2m-2} u:`, band-`N` part (with projections if configured).
    pub fn nonlinearity_u(&self, u: &SpectralField) -> SpectralField {
        let m = self.cfg.params.m;
        let g = Grid::from_field(&self.inner(u), self.cfg.grid_size);
        let c = self.coupling();
        let nl = g.map(|z| c * wick_scalar(m, m - 1, z, self.sigma)).to_field(self.cfg.n_cut, u.grid_size());
        self.inner(&nl)
    }

    /// `-(c₁ + i c₂) Σ binom(m,i) binom(m-1,j) v^i v̄^j :Ψ^{m-i} Ψ̄^{m-1-j}:`.
    pub fn nonlinearity_v(&self, v: &SpectralField, wick: &WickTensor) -> SpectralField {
        let m = self.cfg.params.m;
        let gs = wick.grid_size();
        let vg = Grid::from_field(&self.inner(v), gs);
        let c = self.coupling();
        let mut acc = vec![Complex64::new(0.0, 0.0); gs * gs];
        let mut pw = vec![Complex64::new(1.0, 0.0); m + 1];
        let mut pwc = vec![Complex64::new(1.0, 0.0); m];
        let weights: Vec<Vec<f64>> =
            (0..=m).map(|i| (0..m).map(|j| binomial(m, i) * binomial(m - 1, j)).collect()).collect();
        for (idx, (out, &z)) in acc.iter_mut().zip(vg.values()).enumerate() {
            for i in 1..=m {
                pw[i] = pw[i - 1] * z;
            }
            for j in 1..m {
                pwc[j] = pwc[j - 1] * z.conj();
            }
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..=m {
                for j in 0..m {
                    s += pw[i] * pwc[j] * wick.grid(m - i, m - 1 - j).values()[idx] * weights[i][j];
                }
            }
            *out = c * s;
        }
        let nl = Grid::new(gs, acc).to_field(self.cfg.n_cut, v.grid_size());
        self.inner(&nl)
    }

    fn check(&self, f: SpectralField, t_new: f64) -> Result<SpectralField> {
        if !f.is_finite() || f.l2_norm_sq().sqrt() > self.cfg.blowup_ceiling {
            return Err(Error::BlowUp { time: t_new });
        }
        Ok(f)
    }

    fn combine(&self, base: &SpectralField, f0: &SpectralField, extra: Option<&SpectralField>) -> SpectralField {
        let mut out = base.clone();
        for (k, o) in out.coeffs_mut().iter_mut().enumerate() {
            *o = self.decay[k] * *o + self.phi1[k] * f0.coeffs()[k];
            if let Some(e) = extra {
                *o += e.coeffs()[k];
            }
        }
        out
    }

    fn correct(&self, a: &mut SpectralField, f0: &SpectralField, f1: &SpectralField) {
        for (k, o) in a.coeffs_mut().iter_mut().enumerate() {
            *o += self.phi2[k] * (f1.coeffs()[k] - f0.coeffs()[k]);
        }
    }

    /// One step of the `u`-form from `t` given `Ψ(t)` and `Ψ(t + dt)`; the
    /// noise enters as the exact increment `Ψ(t+dt) - e^{L dt} Ψ(t)`.
    pub fn step_u(&self, u: &SpectralField, psi_old: &SpectralField, psi_new: &SpectralField, t: f64) -> Result<SpectralField> {
        let mut eta = psi_new.clone();
        for (k, e) in eta.coeffs_mut().iter_mut().enumerate() {
            *e -= self.decay[k] * psi_old.coeffs()[k];
        }
        let f0 = self.nonlinearity_u(u);
        let mut a = self.combine(u, &f0, Some(&eta));
        if self.cfg.scheme == Scheme::EtdRk2 {
            let f1 = self.nonlinearity_u(&a);
            self.correct(&mut a, &f0, &f1);
        }
        self.check(a, t + self.cfg.dt)
    }

    /// One step of the `v`-form with the tensor held at its value at `t`.
    pub fn step_v(&self, v: &SpectralField, wick: &WickTensor, t: f64) -> Result<SpectralField> {
        let f0 = self.nonlinearity_v(v, wick);
        let mut a = self.combine(v, &f0, None);
        if self.cfg.scheme == Scheme::EtdRk2 {
            let f1 = self.nonlinearity_v(&a, wick);
            self.correct(&mut a, &f0, &f1);
        }
        self.check(a, t + self.cfg.dt)
    }

    /// Wick tensor of `psi` matching this configuration's placement.
    pub fn tensor(&self, psi: &SpectralField) -> WickTensor {
        wick_tensor_from(&self.inner(psi), self.sigma, self.cfg.params.m)
    }
}

/// Advances `noise` by `dt` in lockstep and returns `u(t + dt)`.
pub fn step_u(u: &SpectralField, noise: &mut NoiseState, cfg: &SimConfig) -> Result<SpectralField> {
    let stepper = Stepper::new(cfg, wick_sigma(cfg))?;
    let old = noise.modes.clone();
    let t = noise.time;
    noise.ou_step(cfg.dt);
    stepper.step_u(u, &old, &noise.modes, t)
}

/// One `v`-form step with a tensor sampled at the step's start.
pub fn step_v(v: &SpectralField, wick: &WickTensor, cfg: &SimConfig) -> Result<SpectralField> {
    Stepper::new(cfg, wick_sigma(cfg))?.step_v(v, wick, 0.0)
}

/// `σ_N` for the configuration's Wick cutoff.
pub fn wick_sigma(cfg: &SimConfig) -> f64 {
    crate::noise::sigma_const(cfg.n_cut, &cfg.wick_cutoff(), &cfg.params)
}

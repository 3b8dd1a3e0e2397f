use super::{log_density, normalize_log_weights, reference_draw, systematic_indices};
use crate::noise::{wick_grid, PhysicsParams};
use crate::rng::{complex_normal, par_map, split_seed, stream, StreamRng};
use crate::spectral::{dealias_floor, lambda, project, CutoffSpec, Grid, SpectralField};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;

/// `U_β(u) = a Σ λ_n |û_n|² - β log G(u)` on the disc, with its gradient.
#[derive(Clone, Debug)]
pub struct GibbsPotential {
    pub n_cut: usize,
    pub a: f64,
    pub c: f64,
    pub m: usize,
    pub sigma: f64,
    pub inner: CutoffSpec,
    grid: usize,
    /// `2aλ_n` on the disc, zero off it.
    mass: Vec<f64>,
}

impl GibbsPotential {
    pub fn new(n_cut: usize, params: &PhysicsParams, inner: &CutoffSpec, sigma: f64) -> Self {
        let a = params.a1 / params.gamma;
        let disc = CutoffSpec::sharp();
        let n = n_cut as i64;
        let mut mass = Vec::new();
        for n1 in -n..=n {
            for n2 in -n..=n {
                mass.push(disc.chi(n1, n2, n_cut) * 2.0 * a * lambda(n1, n2));
            }
        }
        let m = params.m;
        Self { n_cut, a, c: params.coupling(), m, sigma, inner: *inner, grid: dealias_floor(2 * m - 1, n_cut), mass }
    }

    pub fn log_g(&self, u: &SpectralField) -> f64 {
        log_density(u, self.c, self.m, self.sigma, &self.inner)
    }

    pub fn energy(&self, u: &SpectralField, beta: f64) -> f64 {
        let quad: f64 = u.coeffs().iter().zip(&self.mass).map(|(z, &mm)| 0.5 * mm * z.norm_sqr()).sum();
        quad - beta * self.log_g(u)
    }

    /// `∂_x U + i ∂_y U` per coefficient.
    pub fn gradient(&self, u: &SpectralField, beta: f64) -> Vec<Complex64> {
        let mut g: Vec<Complex64> = u.coeffs().iter().zip(&self.mass).map(|(z, &mm)| z * mm).collect();
        if beta != 0.0 && self.c != 0.0 {
            let w = project(u, &self.inner, self.n_cut);
            let f = wick_grid(&Grid::from_field(&w, self.grid), self.m, self.m - 1, self.sigma).to_field(self.n_cut, u.grid_size());
            let fp = project(&f, &self.inner, self.n_cut);
            // ∂/∂ū of (c/m)(2π)^{-2}∫:|w|^{2m}: is c χ F̂; the factor 2 converts to ∂_x + i∂_y
            let k = 2.0 * beta * self.c;
            for (gi, (fi, &mm)) in g.iter_mut().zip(fp.coeffs().iter().zip(&self.mass)) {
                if mm > 0.0 {
                    *gi += fi * k;
                }
            }
        }
        g
    }

    /// One Metropolis-adjusted Hamiltonian move with mass `2aλ_n`.
    pub fn hmc_move(&self, u: &SpectralField, beta: f64, eps: f64, leapfrog: usize, rng: &mut StreamRng) -> (SpectralField, bool) {
        let eps = eps * rng.random_range(0.8..1.2);
        let p0: Vec<Complex64> = self.mass.iter().map(|&mm| complex_normal(rng) * (2.0 * mm).sqrt()).collect();
        let kinetic = |p: &[Complex64]| -> f64 {
            p.iter().zip(&self.mass).filter(|(_, &mm)| mm > 0.0).map(|(z, &mm)| 0.5 * z.norm_sqr() / mm).sum()
        };
        let h0 = self.energy(u, beta) + kinetic(&p0);
        let mut q = u.clone();
        let mut p = p0;
        let mut g = self.gradient(&q, beta);
        for _ in 0..leapfrog {
            for (pi, gi) in p.iter_mut().zip(&g) {
                *pi -= gi * (0.5 * eps);
            }
            for ((qi, pi), &mm) in q.coeffs_mut().iter_mut().zip(&p).zip(&self.mass) {
                if mm > 0.0 {
                    *qi += pi * (eps / mm);
                }
            }
            g = self.gradient(&q, beta);
            for (pi, gi) in p.iter_mut().zip(&g) {
                *pi -= gi * (0.5 * eps);
            }
        }
        let h1 = self.energy(&q, beta) + kinetic(&p);
        let accept = h1.is_finite() && rng.random::<f64>().ln() < h0 - h1;
        if accept {
            (q, true)
        } else {
            (u.clone(), false)
        }
    }
}

#[derive(Clone, Debug)]
pub struct SmcOptions {
    pub particles: usize,
    /// Hamiltonian moves per particle after each reweighting.
    pub moves: usize,
    /// Extra moves at `β = 1` to decorrelate resampled duplicates.
    pub final_moves: usize,
    pub leapfrog: usize,
    /// Fraction of particles kept effective between temperatures.
    pub ess_target: f64,
    pub seed: u64,
}

impl Default for SmcOptions {
    fn default() -> Self {
        Self { particles: 1000, moves: 3, final_moves: 20, leapfrog: 8, ess_target: 0.5, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct SmcResult {
    /// Equally weighted draws from the truncated Gibbs measure.
    pub particles: Vec<SpectralField>,
    /// Estimate of `log Z = log E_μ[G]`.
    pub log_z: f64,
    pub temperatures: Vec<f64>,
    pub acceptance: f64,
}

/// Tempered sequential Monte Carlo from `μ_a` (`β = 0`) to the Gibbs
/// measure (`β = 1`): reweight by `G^{Δβ}` with `Δβ` chosen to hold the
/// effective sample size, resample, then move with [`GibbsPotential::hmc_move`].
pub fn smc_gibbs(n_cut: usize, params: &PhysicsParams, inner: &CutoffSpec, sigma: f64, opts: &SmcOptions) -> Result<SmcResult> {
    let c = params.coupling();
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!("Gibbs weight needs c = c1/gamma >= 0, got {c}")));
    }
    if opts.particles < 2 || !(opts.ess_target > 0.0 && opts.ess_target < 1.0) {
        return Err(Error::config("SMC needs at least two particles and 0 < ess_target < 1"));
    }
    let pot = GibbsPotential::new(n_cut, params, inner, sigma);
    let count = opts.particles;
    let base = split_seed(opts.seed, 0x5EC);
    let mut particles = par_map(count, |i| reference_draw(n_cut, pot.a, &mut stream(base, i as u64)));
    let mut beta = 0.0;
    let mut log_z = 0.0;
    let mut temps = vec![0.0];
    let mut eps = 0.3;
    let (mut acc_total, mut moves_total) = (0usize, 0usize);
    let mut stage = 0u64;
    let mut resample_rng = stream(split_seed(opts.seed, 0x4E5), 0);
    while beta < 1.0 {
        stage += 1;
        let ell: Vec<f64> = par_map(count, |i| pot.log_g(&particles[i]));
        let ess_of = |db: f64| {
            let w = normalize_log_weights(&ell.iter().map(|l| db * l).collect::<Vec<_>>());
            1.0 / w.iter().map(|x| x * x).sum::<f64>()
        };
        let target = opts.ess_target * count as f64;
        let db = if ess_of(1.0 - beta) >= target {
            1.0 - beta
        } else {
            let (mut lo, mut hi) = (0.0, 1.0 - beta);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if ess_of(mid) >= target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo.max(1e-12)
        };
        let incr: Vec<f64> = ell.iter().map(|l| db * l).collect();
        let top = incr.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        log_z += top + (incr.iter().map(|x| (x - top).exp()).sum::<f64>() / count as f64).ln();
        beta = if beta + db >= 1.0 - 1e-12 { 1.0 } else { beta + db };
        temps.push(beta);
        let idx = systematic_indices(&normalize_log_weights(&incr), count, &mut resample_rng);
        particles = idx.into_iter().map(|i| particles[i].clone()).collect();

        let n_moves = if beta == 1.0 { opts.moves + opts.final_moves } else { opts.moves };
        for sweep in 0..n_moves {
            let seed = split_seed(opts.seed, (stage << 20) | sweep as u64);
            let step = eps;
            let moved = par_map(count, |i| pot.hmc_move(&particles[i], beta, step, opts.leapfrog, &mut stream(seed, i as u64)));
            let accepted = moved.iter().filter(|(_, a)| *a).count();
            particles = moved.into_iter().map(|(u, _)| u).collect();
            acc_total += accepted;
            moves_total += count;
            let rate = accepted as f64 / count as f64;
            eps *= if rate < 0.6 { 0.8 } else if rate > 0.9 { 1.15 } else { 1.0 };
        }
        if stage > 10_000 {
            return Err(Error::Numeric("tempering did not reach beta = 1".into()));
        }
    }
    if !log_z.is_finite() {
        return Err(Error::Numeric("non-finite partition-function estimate".into()));
    }
    Ok(SmcResult { particles, log_z, temperatures: temps, acceptance: acc_total as f64 / moves_total.max(1) as f64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gibbs::gibbs_sigma;

    fn potential() -> (GibbsPotential, SpectralField) {
        let params = PhysicsParams::default();
        let inner = CutoffSpec::smooth();
        let pot = GibbsPotential::new(3, &params, &inner, gibbs_sigma(3, &inner, &params));
        let mut rng = stream(1, 0);
        let u = reference_draw(3, 1.0, &mut rng);
        (pot, u)
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let (pot, u) = potential();
        let g = pot.gradient(&u, 0.7);
        let h = 1e-6;
        for k in [0usize, 10, 24, 30] {
            for dir in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                let mut up = u.clone();
                let mut dn = u.clone();
                up.coeffs_mut()[k] += dir * h;
                dn.coeffs_mut()[k] -= dir * h;
                let fd = (pot.energy(&up, 0.7) - pot.energy(&dn, 0.7)) / (2.0 * h);
                let an = if dir.re == 1.0 { g[k].re } else { g[k].im };
                assert!((fd - an).abs() < 1e-5 * (1.0 + an.abs()), "k={k} fd={fd} an={an}");
            }
        }
    }

    #[test]
    fn hmc_preserves_reference_at_zero_beta() {
        let (pot, _) = potential();
        let mut acc = crate::stats::MeanVar::default();
        let mut u = SpectralField::zeros(3, pot.grid);
        let mut rng = stream(9, 0);
        for it in 0..4000 {
            u = pot.hmc_move(&u, 0.0, 0.3, 8, &mut rng).0;
            if it >= 200 {
                acc.push(u.get(0, 0).norm_sqr());
            }
        }
        // E|û(0)|² = 1/a = 1; chain samples are close to independent at β = 0
        assert!((acc.mean() - 1.0).abs() < 0.1, "{}", acc.mean());
    }

    #[test]
    fn uncoupled_smc_is_trivial() {
        let params = PhysicsParams { c1: 0.0, c2: 0.0, ..PhysicsParams::default() };
        let inner = CutoffSpec::smooth();
        let r = smc_gibbs(2, &params, &inner, 1.0, &SmcOptions { particles: 50, ..Default::default() }).unwrap();
        assert_eq!(r.log_z, 0.0);
        assert_eq!(r.temperatures, vec![0.0, 1.0]);
    }
}

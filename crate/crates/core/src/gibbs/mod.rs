//! Truncated Gibbs measure: exact Gaussian reference, Wick-ordered
//! weights, partition-function estimates and the fixed-`N` invariance test.
//!
//! The reference law has modes `û(n) = g_n / √(a(1 + |n|²))` on the disc
//! `|n| ≤ N`, `a = a₁/γ`, which is the stationary law of the linear flow
//! driven by disc-projected noise. The density relative to it is
//!
//! ```text
//! G(u) = exp(-(c/m) (2π)^{-2} ∫ :|S_N u|^{2m}: dx),   c = c₁/γ,
//! ```
//!
//! with the same `σ_N` and `S_N` as the projected solver nonlinearity.

mod invariance;
mod smc;

pub use smc::{smc_gibbs, GibbsPotential, SmcOptions, SmcResult};
pub use invariance::{default_observables, invariance_config, invariance_test, InvarianceOptions, InvarianceReport, InvarianceRow, Observable};

use crate::noise::{sigma_const, PhysicsParams};
use crate::polyalg::laguerre_scaled;
use crate::rng::{complex_normal, par_map, split_seed, stream};
use crate::spectral::{dealias_floor, lambda, project, CutoffSpec, Grid, SpectralField, TORUS_AREA};
use crate::{Error, Result};
use rand::Rng;

const TAG_REFERENCE: u64 = 0x61B5;
const TAG_BOOTSTRAP: u64 = 0xB007;

/// Samples from the Gaussian reference with optional log-weights.
#[derive(Clone, Debug)]
pub struct GibbsEnsemble {
    pub n_cut: usize,
    pub samples: Vec<SpectralField>,
    /// `log G` per sample; all zero until weighted.
    pub log_weights: Vec<f64>,
    /// Estimate of `Z = E_μ[G]`.
    pub normalizer: f64,
    /// Relative standard error of `normalizer`.
    pub normalizer_rel_se: f64,
    /// `(Σw)² / Σw²`.
    pub ess: f64,
}

impl GibbsEnsemble {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Self-normalised weights summing to one.
    pub fn normalized_weights(&self) -> Vec<f64> {
        normalize_log_weights(&self.log_weights)
    }

    /// Systematic resampling of `count` members; the draws carry uniform weight.
    pub fn resample(&self, count: usize, seed: u64) -> Vec<SpectralField> {
        let mut rng = stream(seed, 0);
        systematic_indices(&self.normalized_weights(), count, &mut rng).into_iter().map(|i| self.samples[i].clone()).collect()
    }
}

pub(crate) fn normalize_log_weights(log_w: &[f64]) -> Vec<f64> {
    let top = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_w.iter().map(|l| (l - top).exp()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

pub(crate) fn systematic_indices(w: &[f64], count: usize, rng: &mut crate::rng::StreamRng) -> Vec<usize> {
    let offset: f64 = rng.random::<f64>() / count as f64;
    let mut out = Vec::with_capacity(count);
    let (mut i, mut cum) = (0usize, w[0]);
    for k in 0..count {
        let target = offset + k as f64 / count as f64;
        while cum < target && i + 1 < w.len() {
            i += 1;
            cum += w[i];
        }
        out.push(i);
    }
    out
}

/// Draws `count` independent samples of `μ_a` restricted to `|n| ≤ N`.
pub fn sample_gaussian_reference(n_cut: usize, a: f64, count: usize, seed: u64) -> Result<GibbsEnsemble> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("reference needs a > 0, got {a}")));
    }
    let base = split_seed(seed, TAG_REFERENCE);
    let samples = par_map(count, |i| reference_draw(n_cut, a, &mut stream(base, i as u64)));
    Ok(GibbsEnsemble { n_cut, samples, log_weights: vec![0.0; count], normalizer: 1.0, normalizer_rel_se: 0.0, ess: count as f64 })
}

pub(crate) fn reference_draw(n_cut: usize, a: f64, rng: &mut crate::rng::StreamRng) -> SpectralField {
    let disc = CutoffSpec::sharp();
    SpectralField::from_fn(n_cut, dealias_floor(1, n_cut), |n1, n2| {
        let g = complex_normal(rng);
        g * (disc.chi(n1, n2, n_cut) / (a * lambda(n1, n2))).sqrt()
    })
}

/// `∫ :|u|^{2m}: dx` with `:|z|^{2m}: = (-1)^m m! L_m(|z|²; σ)`, exact on the grid.
/// The caller applies `S_N`.
pub fn wick_energy(u: &SpectralField, m: usize, sigma: f64) -> f64 {
    let g = Grid::from_field(u, dealias_floor(2 * m.max(1) - 1, u.n_max()));
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let mf = crate::polyalg::factorial(m);
    let cell = TORUS_AREA / (g.size() * g.size()) as f64;
    g.values().iter().map(|z| sign * mf * laguerre_scaled(m, 0.0, sigma, z.norm_sqr())).sum::<f64>() * cell
}

/// The Wick variance paired with the Gibbs density for inner cutoff `inner`.
pub fn gibbs_sigma(n_cut: usize, inner: &CutoffSpec, params: &PhysicsParams) -> f64 {
    sigma_const(n_cut, inner, params)
}

/// `log G(u) = -(c/m)(2π)^{-2} ∫ :|S_N u|^{2m}:`.
pub fn log_density(u: &SpectralField, c: f64, m: usize, sigma: f64, inner: &CutoffSpec) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    -(c / m as f64) * wick_energy(&project(u, inner, u.n_max()), m, sigma) / TORUS_AREA
}

/// Fills log-weights with `c = c₁/γ` and the smooth inner cutoff.
pub fn weight_ensemble(ens: &GibbsEnsemble, params: &PhysicsParams) -> Result<GibbsEnsemble> {
    weight_ensemble_with(ens, params, &CutoffSpec::smooth())
}

pub fn weight_ensemble_with(ens: &GibbsEnsemble, params: &PhysicsParams, inner: &CutoffSpec) -> Result<GibbsEnsemble> {
    let c = params.coupling();
    if c < 0.0 || (c == 0.0 && params.c1 != 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!("Gibbs weight needs c = c1/gamma >= 0, got {c}")));
    }
    if ens.is_empty() {
        return Err(Error::config("empty ensemble"));
    }
    let sigma = gibbs_sigma(ens.n_cut, inner, params);
    let m = params.m;
    let log_weights = par_map(ens.len(), |i| log_density(&ens.samples[i], c, m, sigma, inner));
    if log_weights.iter().any(|l| !l.is_finite()) {
        return Err(Error::Numeric("non-finite Gibbs weight".into()));
    }
    let top = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (s1, s2) = log_weights.iter().fold((0.0, 0.0), |(a, b), l| {
        let w = (l - top).exp();
        (a + w, b + w * w)
    });
    let count = ens.len() as f64;
    let mean = s1 / count;
    let var = (s2 / count - mean * mean).max(0.0);
    Ok(GibbsEnsemble {
        n_cut: ens.n_cut,
        samples: ens.samples.clone(),
        normalizer: top.exp() * mean,
        normalizer_rel_se: (var / count).sqrt() / mean,
        ess: s1 * s1 / s2,
        log_weights,
    })
}

/// Self-normalised estimate with weighted-bootstrap standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObservableEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub ess: f64,
    /// False when the effective sample size is below 10.
    pub reliable: bool,
}

pub fn estimate_observable(ens: &GibbsEnsemble, observable: &(dyn Fn(&SpectralField) -> f64 + Sync), seed: u64) -> ObservableEstimate {
    let values = par_map(ens.len(), |i| observable(&ens.samples[i]));
    estimate_values(&values, &ens.normalized_weights(), ens.ess, seed)
}

pub(crate) fn estimate_values(values: &[f64], w: &[f64], ess: f64, seed: u64) -> ObservableEstimate {
    let mean = values.iter().zip(w).map(|(v, w)| v * w).sum::<f64>() / w.iter().sum::<f64>();
    let n = values.len();
    let mut rng = stream(split_seed(seed, TAG_BOOTSTRAP), 0);
    let mut acc = crate::stats::MeanVar::default();
    for _ in 0..200 {
        let (mut num, mut den) = (0.0, 0.0);
        for _ in 0..n {
            let i = rng.random_range(0..n);
            num += w[i] * values[i];
            den += w[i];
        }
        acc.push(num / den);
    }
    ObservableEstimate { mean, std_error: acc.variance().sqrt(), ess, reliable: ess >= 10.0 }
}

/// `Z^N` estimates with normal 95% intervals from independent SMC repeats.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ZnReport {
    pub n_list: Vec<usize>,
    pub z: Vec<f64>,
    pub std_error: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub repeats: usize,
}

impl ZnReport {
    pub const CSV_HEADER: &'static str = "N,Z,std_error,lower,upper";

    pub fn min_lower(&self) -> f64 {
        self.lower.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn csv(&self) -> String {
        let mut s = format!("{}\n", Self::CSV_HEADER);
        for i in 0..self.n_list.len() {
            s.push_str(&format!(
                "{},{:.12e},{:.12e},{:.12e},{:.12e}\n",
                self.n_list[i], self.z[i], self.std_error[i], self.lower[i], self.upper[i]
            ));
        }
        s
    }
}

pub const ZN_REPEATS: usize = 8;

/// `Z^N = E_μ[G]` across `n_list`, each from [`ZN_REPEATS`] independent
/// tempered SMC runs of `count` particles (the SMC estimate of `Z` is unbiased).
pub fn zn_lower_bound(n_list: &[usize], params: &PhysicsParams, count: usize, seed: u64) -> Result<ZnReport> {
    let inner = CutoffSpec::smooth();
    let mut rep = ZnReport { n_list: n_list.to_vec(), repeats: ZN_REPEATS, ..ZnReport::default() };
    for &n in n_list {
        let sigma = gibbs_sigma(n, &inner, params);
        let mut zs = Vec::with_capacity(ZN_REPEATS);
        for r in 0..ZN_REPEATS {
            let opts = SmcOptions { particles: count, final_moves: 0, seed: split_seed(seed, ((n as u64) << 16) | r as u64), ..SmcOptions::default() };
            zs.push(smc_gibbs(n, params, &inner, sigma, &opts)?.log_z.exp());
        }
        let (z, se) = crate::stats::mean_se(&zs);
        rep.z.push(z);
        rep.std_error.push(se);
        rep.lower.push(z - 1.96 * se);
        rep.upper.push(z + 1.96 * se);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn reference_l2_mean_n1() {
        let ens = sample_gaussian_reference(1, 1.0, 20000, 3).unwrap();
        let e = estimate_observable(&ens, &|u| u.l2_norm_sq(), 1);
        let target = TORUS_AREA * 3.0;
        assert!((e.mean - target).abs() < 4.0 * e.std_error, "{e:?} vs {target}");
        assert!((target - 118.435).abs() < 1e-3);
    }

    #[test]
    fn zero_mode_variance() {
        let ens = sample_gaussian_reference(2, 2.0, 20000, 9).unwrap();
        let e = estimate_observable(&ens, &|u| u.get(0, 0).norm_sqr(), 2);
        assert!((e.mean - 0.5).abs() < 4.0 * e.std_error);
    }

    #[test]
    fn wick_energy_closed_forms() {
        let sigma = 0.7;
        let zero = SpectralField::zeros(3, 16);
        let want = 2.0 * sigma * sigma * TORUS_AREA;
        assert!((wick_energy(&zero, 2, sigma) - want).abs() < 1e-12 * want);
        let u = SpectralField::from_fn(2, 8, |a, b| Complex64::new(0.2 / (1.0 + (a * a + b * b) as f64), 0.1 * a as f64));
        let direct = u.l2_norm_sq() - sigma * TORUS_AREA;
        assert!((wick_energy(&u, 1, sigma) - direct).abs() < 1e-12);
    }

    #[test]
    fn uncoupled_weights_are_trivial() {
        let params = PhysicsParams { c1: 0.0, c2: 0.0, ..PhysicsParams::default() };
        let ens = weight_ensemble(&sample_gaussian_reference(2, 1.0, 50, 1).unwrap(), &params).unwrap();
        assert!(ens.log_weights.iter().all(|&l| l == 0.0));
        assert_eq!(ens.normalizer, 1.0);
        assert!((ens.ess - 50.0).abs() < 1e-9);
        assert_eq!(estimate_observable(&ens, &|_| 1.0, 0).mean, 1.0);
    }

    #[test]
    fn focusing_sign_refused() {
        let params = PhysicsParams { c1: -1.0, ..PhysicsParams::default() };
        let ens = sample_gaussian_reference(2, 1.0, 4, 1).unwrap();
        assert!(matches!(weight_ensemble(&ens, &params), Err(Error::Domain(_))));
    }

    #[test]
    fn resampling_matches_importance_weights() {
        let ens = weight_ensemble(&sample_gaussian_reference(2, 1.0, 4000, 5).unwrap(), &PhysicsParams::default()).unwrap();
        assert!(ens.ess <= ens.len() as f64);
        let obs = |u: &SpectralField| u.l2_norm_sq();
        let is = estimate_observable(&ens, &obs, 4);
        let draws = ens.resample(4000, 11);
        let (mean, se) = crate::stats::mean_se(&draws.iter().map(obs).collect::<Vec<_>>());
        assert!((mean - is.mean).abs() < 4.0 * (se * se + is.std_error * is.std_error).sqrt());
    }

    #[test]
    fn zn_positive() {
        let rep = zn_lower_bound(&[2, 4], &PhysicsParams::default(), 200, 7).unwrap();
        assert!(rep.min_lower() > 0.0, "{rep:?}");
    }
}

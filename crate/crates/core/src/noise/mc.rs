use super::wick::wick_grid;
use super::{mode_variance, sigma_const, PhysicsParams};
use crate::polyalg::{factorial, laguerre_scaled};
use crate::rng::{complex_normal, par_map, split_seed, stream};
use crate::spectral::{dealias_floor, sobolev_norm, CutoffSpec, Grid, SpectralField};
use crate::stats::{MeanVar, StatRecord};
use crate::{Error, Result};
use num_complex::Complex64;

const CHUNKS: usize = 64;

/// Real and imaginary parts of a complex Monte Carlo estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexStat {
    pub re: StatRecord,
    pub im: StatRecord,
}

impl ComplexStat {
    pub fn max_abs_z(&self) -> f64 {
        self.re.z_score.abs().max(self.im.z_score.abs())
    }
}

/// Parameters of the Laguerre orthogonality check for a correlated
/// complex Gaussian pair with `E|f|² = σ_f`, `E|g|² = σ_g`, `E[f ḡ] = ρ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrthoSpec {
    pub k: usize,
    pub ell: usize,
    pub mprime: usize,
    pub rho: Complex64,
    pub sigma_f: f64,
    pub sigma_g: f64,
}

impl OrthoSpec {
    /// `δ_{km'} (k+ℓ)!/k! |ρ|^{2k} ρ^ℓ`.
    pub fn target(&self) -> Complex64 {
        if self.k != self.mprime {
            return Complex64::new(0.0, 0.0);
        }
        let w = factorial(self.k + self.ell) / factorial(self.k) * self.rho.norm_sqr().powi(self.k as i32);
        self.rho.powu(self.ell as u32) * w
    }
}

/// Monte Carlo mean of `L_k^{(ℓ)}(|f|²;σ_f) f^ℓ · conj(L_{m'}^{(ℓ)}(|g|²;σ_g) g^ℓ)`.
pub fn mc_orthogonality(spec: &OrthoSpec, samples: usize, seed: u64) -> Result<ComplexStat> {
    let OrthoSpec { k, ell, mprime, rho, sigma_f, sigma_g } = *spec;
    if !(sigma_f > 0.0 && sigma_g > 0.0) {
        return Err(Error::domain("variances must be positive"));
    }
    let resid = sigma_g - rho.norm_sqr() / sigma_f;
    if resid < -1e-12 * sigma_g {
        return Err(Error::Domain(format!("|rho|² = {} exceeds σ_f σ_g = {}", rho.norm_sqr(), sigma_f * sigma_g)));
    }
    if samples == 0 {
        return Err(Error::domain("at least one sample is required"));
    }
    let (sf, sr) = (sigma_f.sqrt(), resid.max(0.0).sqrt());
    let coupling = rho.conj() / sigma_f;
    let per_chunk = samples.div_ceil(CHUNKS);
    let parts = par_map(CHUNKS, |c| {
        let mut rng = stream(seed, c as u64);
        let count = per_chunk.min(samples.saturating_sub(c * per_chunk));
        let (mut re, mut im) = (MeanVar::default(), MeanVar::default());
        for _ in 0..count {
            let f = complex_normal(&mut rng) * sf;
            let g = coupling * f + complex_normal(&mut rng) * sr;
            let a = f.powu(ell as u32) * laguerre_scaled(k, ell as f64, sigma_f, f.norm_sqr());
            let b = g.powu(ell as u32) * laguerre_scaled(mprime, ell as f64, sigma_g, g.norm_sqr());
            let x = a * b.conj();
            re.push(x.re);
            im.push(x.im);
        }
        (re, im)
    });
    let (mut re, mut im) = (MeanVar::default(), MeanVar::default());
    for (r, i) in &parts {
        re.merge(r);
        im.merge(i);
    }
    let t = spec.target();
    Ok(ComplexStat { re: StatRecord::from_accumulator(&re, t.re), im: StatRecord::from_accumulator(&im, t.im) })
}

/// Monte Carlo `E[e^{Re g}]` for a circular complex Gaussian with
/// `E|g|² = var`, against `e^{var/4}`.
pub fn mc_exp_re(samples: usize, seed: u64, var: f64) -> Result<StatRecord> {
    if !(var >= 0.0) || samples == 0 {
        return Err(Error::domain("need var >= 0 and at least one sample"));
    }
    let s = var.sqrt();
    let per_chunk = samples.div_ceil(CHUNKS);
    let parts = par_map(CHUNKS, |c| {
        let mut rng = stream(seed, c as u64);
        let count = per_chunk.min(samples.saturating_sub(c * per_chunk));
        (0..count).map(|_| (complex_normal(&mut rng) * s).re.exp()).collect::<MeanVar>()
    });
    let mut acc = MeanVar::default();
    parts.iter().for_each(|p| acc.merge(p));
    Ok(StatRecord::from_accumulator(&acc, (var / 4.0).exp()))
}

/// Coupled-truncation Cauchy statistics for `:Ψ_N^k Ψ̄_N^ℓ:`.
#[derive(Clone, Debug, PartialEq)]
pub struct CauchyReport {
    pub k: usize,
    pub ell: usize,
    pub eps: f64,
    pub n_list: Vec<usize>,
    /// Ensemble mean of `‖W_N - W_{2N}‖_{W^{-ε,∞}}` per `N`.
    pub means: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// Least-squares slope of `log mean` against `log N`.
    pub slope: f64,
}

impl CauchyReport {
    pub fn strictly_decreasing(&self) -> bool {
        self.means.windows(2).all(|w| w[1] < w[0])
    }

    pub const CSV_HEADER: &'static str = "N,mean_diff_norm,std_error";

    pub fn csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for ((n, m), e) in self.n_list.iter().zip(&self.means).zip(&self.std_errors) {
            s.push_str(&format!("{n},{m:.12e},{e:.12e}\n"));
        }
        s
    }
}

fn loglog_slope(xs: &[usize], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|&x| (x as f64).ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// `‖:Ψ_N^kΨ̄_N^ℓ: - :Ψ_{2N}^kΨ̄_{2N}^ℓ:‖_{W^{-ε,∞}}` with both truncations
/// built from the same Gaussian draws, using the untruncated monomials.
pub fn wick_cauchy_distance(bank: &SpectralField, n: usize, k: usize, ell: usize, eps: f64, cutoff: &CutoffSpec, params: &PhysicsParams) -> f64 {
    let fine = 2 * n;
    let band = (k + ell) * fine;
    let m = dealias_floor(1, band);
    let psi = |nc: usize| {
        SpectralField::from_fn(nc, m, |a, b| bank.get(a, b) * mode_variance((a, b), nc, cutoff, params).sqrt())
    };
    let w = |nc: usize| wick_grid(&Grid::from_field(&psi(nc), m), k, ell, sigma_const(nc, cutoff, params));
    let diff = w(n).zip_map(&w(fine), |x, y| x - y).to_field(band, m);
    sobolev_norm(&diff, -eps, f64::INFINITY)
}

/// Ensemble Cauchy trend across `n_list`; member `i` uses stream `i` of
/// `split_seed(seed, tag)` for a single bank of Gaussians shared by all `N`.
pub fn wick_cauchy_trend(
    k: usize,
    ell: usize,
    n_list: &[usize],
    ensembles: usize,
    eps: f64,
    cutoff: &CutoffSpec,
    params: &PhysicsParams,
    seed: u64,
) -> Result<CauchyReport> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[1] <= w[0]) || ensembles == 0 {
        return Err(Error::domain("N list must be non-empty and strictly increasing, ensembles >= 1"));
    }
    let top = 2 * n_list[n_list.len() - 1];
    let base = split_seed(seed, 0xCA0C);
    let rows = par_map(ensembles, |i| {
        let mut rng = stream(base, i as u64);
        let side = 2 * top + 1;
        let gs = (0..side * side).map(|_| complex_normal(&mut rng)).collect();
        let bank = SpectralField::from_coeffs(top, side, gs);
        n_list.iter().map(|&n| wick_cauchy_distance(&bank, n, k, ell, eps, cutoff, params)).collect::<Vec<_>>()
    });
    let mut means = Vec::new();
    let mut std_errors = Vec::new();
    for j in 0..n_list.len() {
        let acc: MeanVar = rows.iter().map(|r| r[j]).collect();
        means.push(acc.mean());
        std_errors.push(acc.std_error());
    }
    let slope = loglog_slope(n_list, &means);
    Ok(CauchyReport { k, ell, eps, n_list: n_list.to_vec(), means, std_errors, slope })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn targets() {
        let base = OrthoSpec { k: 2, ell: 1, mprime: 2, rho: Complex64::new(0.5, 0.0), sigma_f: 1.0, sigma_g: 1.0 };
        assert!((base.target() - 0.09375).norm() < 1e-15);
        assert_eq!(OrthoSpec { mprime: 1, ..base }.target(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn infeasible_rho_is_rejected() {
        let s = OrthoSpec { k: 1, ell: 0, mprime: 1, rho: Complex64::new(2.0, 0.0), sigma_f: 1.0, sigma_g: 1.0 };
        assert!(matches!(mc_orthogonality(&s, 10, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn exp_re_trivial() {
        let r = mc_exp_re(1000, 3, 0.0).unwrap();
        assert_eq!(r.estimate, 1.0);
        assert_eq!(r.target, 1.0);
    }

    #[test]
    fn linear_trend_decreases() {
        // at ε = 0.1 the grid supremum's √log N growth dominates for small N
        let p = PhysicsParams::default();
        let r = wick_cauchy_trend(1, 0, &[2, 4, 8], 16, 0.6, &CutoffSpec::smooth(), &p, 9).unwrap();
        assert!(r.strictly_decreasing(), "{r:?}");
        assert!(r.slope < 0.0);
    }
}

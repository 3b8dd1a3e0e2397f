use super::config::SimConfig;
use super::etd::{wick_sigma, Stepper};
use super::run::x_distance;
use crate::noise::WickTensor;
use crate::spectral::{semigroup_apply, SpectralField};
use crate::{Error, Result};

/// Controls for the fixed-point iteration of the mild map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PicardOptions {
    /// Number of uniform quadrature intervals on `[0, T]`.
    pub intervals: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self { intervals: 64, tol: 1e-10, max_iter: 200 }
    }
}

/// Fixed point of the mild map on a uniform grid.
#[derive(Clone, Debug)]
pub struct PicardSolution {
    pub times: Vec<f64>,
    pub fields: Vec<SpectralField>,
    pub iterations: usize,
    /// `X^{s₀,2ε}_T` distance between the last two iterates.
    pub last_distance: f64,
}

/// Solves `v(t) = S(t)v₀ + ∫₀^t S(t-s) F(v(s), z⃗(s)) ds` by Picard iteration,
/// with composite trapezoid quadrature and exact semigroup factors. `wick`
/// holds either one tensor (frozen in time) or one per quadrature node.
pub fn picard_solve(v0: &SpectralField, wick: &[WickTensor], horizon: f64, cfg: &SimConfig, opts: &PicardOptions) -> Result<PicardSolution> {
    let k = opts.intervals;
    if k == 0 || !(horizon > 0.0) {
        return Err(Error::config("need a positive horizon and at least one interval"));
    }
    if wick.len() != 1 && wick.len() != k + 1 {
        return Err(Error::Config(format!("expected 1 or {} Wick tensors, got {}", k + 1, wick.len())));
    }
    let h = horizon / k as f64;
    let mut c = cfg.clone();
    c.dt = h;
    c.t_final = horizon;
    let stepper = Stepper::new(&c, wick_sigma(&c))?;
    let tensor = |j: usize| if wick.len() == 1 { &wick[0] } else { &wick[j] };
    let times: Vec<f64> = (0..=k).map(|j| j as f64 * h).collect();
    let free: Vec<SpectralField> = times.iter().map(|&t| semigroup_apply(v0, t, &c.params)).collect();

    let mut cur = free.clone();
    let mut last = f64::INFINITY;
    let mut growth = 0;
    for it in 1..=opts.max_iter {
        let forcing: Vec<SpectralField> = cur.iter().enumerate().map(|(j, v)| stepper.nonlinearity_v(v, tensor(j))).collect();
        let mut next = Vec::with_capacity(k + 1);
        let mut duhamel = SpectralField::zeros(v0.n_max(), v0.grid_size());
        next.push(free[0].clone());
        for j in 1..=k {
            let carried = semigroup_apply(&(&duhamel + &(&forcing[j - 1] * (0.5 * h))), h, &c.params);
            duhamel = &carried + &(&forcing[j] * (0.5 * h));
            next.push(&free[j] + &duhamel);
        }
        if next.iter().any(|f| !f.is_finite()) {
            return Err(Error::NonContraction { horizon });
        }
        let d = x_distance(&times, &next, &cur, c.s0, c.eps);
        cur = next;
        if d <= opts.tol * (1.0 + x_distance(&times, &cur, &vec![SpectralField::zeros(v0.n_max(), v0.grid_size()); k + 1], c.s0, c.eps)) {
            return Ok(PicardSolution { times, fields: cur, iterations: it, last_distance: d });
        }
        growth = if d > last { growth + 1 } else { 0 };
        if growth >= 3 {
            return Err(Error::NonContraction { horizon });
        }
        last = d;
    }
    Err(Error::NonContraction { horizon })
}

/// Largest candidate horizon on which the iteration converges, scanning
/// `candidates` in increasing order and stopping at the first failure.
pub fn contraction_horizon(v0: &SpectralField, wick: &WickTensor, cfg: &SimConfig, candidates: &[f64], opts: &PicardOptions) -> Result<Option<f64>> {
    let mut best = None;
    for &t in candidates {
        match picard_solve(v0, std::slice::from_ref(wick), t, cfg, opts) {
            Ok(_) => best = Some(t),
            Err(Error::NonContraction { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(best)
}

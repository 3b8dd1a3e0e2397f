use super::smc::{smc_gibbs, SmcOptions};
use super::{gibbs_sigma, wick_energy};
use crate::noise::NoiseState;
use crate::rng::{par_map, split_seed, stream};
use crate::solver::{wick_sigma, Placement, SimConfig, Stepper};
use crate::spectral::{project, CutoffKind, CutoffSpec, SpectralField};
use crate::stats::mean_se;
use crate::{Error, Result};
use std::sync::Arc;

const TAG_REFERENCE: u64 = 0x70;
const TAG_MEMBERS: u64 = 0x71;
const TAG_EVOLVE: u64 = 0xE701;

/// Named real-valued functional of a state.
#[derive(Clone)]
pub struct Observable {
    pub name: String,
    pub eval: Arc<dyn Fn(&SpectralField) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for Observable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Observable").field("name", &self.name).finish()
    }
}

impl Observable {
    pub fn new(name: &str, eval: impl Fn(&SpectralField) -> f64 + Send + Sync + 'static) -> Self {
        Self { name: name.to_string(), eval: Arc::new(eval) }
    }
}

/// `‖u‖²_{L²}`, `Re ∫ :|S_N u|⁴:`, `‖u‖⁴_{L⁴}` and `Re û(0)`.
pub fn default_observables(cfg: &SimConfig) -> Vec<Observable> {
    let sigma = wick_sigma(cfg);
    let (inner, n) = (cfg.inner_cutoff, cfg.n_cut);
    vec![
        Observable::new("L2_sq", |u| u.l2_norm_sq()),
        Observable::new("wick4_int", move |u| wick_energy(&project(u, &inner, n), 2, sigma)),
        Observable::new("L4_pow4", |u| crate::spectral::lp_norm(&u.with_grid_size(crate::spectral::dealias_floor(3, u.n_max())), 4.0).powi(4)),
        Observable::new("re_u0", |u| u.get(0, 0).re),
    ]
}

#[derive(Clone, Debug)]
pub struct InvarianceOptions {
    pub members: usize,
    pub t_final: f64,
    pub seed: u64,
    /// Runs even when `a₂/a₁ ≠ c₂/c₁` (negative controls).
    pub allow_ratio_violation: bool,
    /// Sampler settings; `particles` and `seed` are overridden.
    pub smc: SmcOptions,
}

impl Default for InvarianceOptions {
    fn default() -> Self {
        Self { members: 1000, t_final: 1.0, seed: 0, allow_ratio_violation: false, smc: SmcOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceRow {
    pub observable: String,
    pub t0_mean: f64,
    pub t1_mean: f64,
    pub pooled_se: f64,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub rows: Vec<InvarianceRow>,
    /// SMC estimate of `log Z^N` from the `t = 0` draw.
    pub log_z: f64,
    pub sigma: f64,
}

impl InvarianceReport {
    pub const CSV_HEADER: &'static str = "observable,t0_mean,t1_mean,pooled_se,z";

    pub fn max_abs_z(&self) -> f64 {
        self.rows.iter().map(|r| r.z.abs()).fold(0.0, f64::max)
    }

    pub fn csv(&self) -> String {
        let mut s = format!("{}\n", Self::CSV_HEADER);
        for r in &self.rows {
            s.push_str(&format!("{},{:.12e},{:.12e},{:.12e},{:.6}\n", r.observable, r.t0_mean, r.t1_mean, r.pooled_se, r.z));
        }
        s
    }
}

fn ratio_holds(cfg: &SimConfig) -> bool {
    let p = &cfg.params;
    (p.a2 * p.c1 - p.c2 * p.a1).abs() <= 1e-12 * (p.a2 * p.c1).abs().max((p.c2 * p.a1).abs()).max(1e-300)
}

/// Draws two independent ensembles from the truncated Gibbs measure,
/// evolves the second with the projected `u`-form under disc-projected
/// noise, and compares observable means at `t = 0` and `t_final`.
pub fn invariance_test(cfg: &SimConfig, opts: &InvarianceOptions, observables: &[Observable]) -> Result<InvarianceReport> {
    if !opts.allow_ratio_violation && !ratio_holds(cfg) {
        return Err(Error::Domain(format!(
            "invariance requires a2/a1 = c2/c1, got a2/a1 = {}, c2/c1 = {}",
            cfg.params.a2 / cfg.params.a1,
            cfg.params.c2 / cfg.params.c1
        )));
    }
    if cfg.placement != Placement::Projected || cfg.cutoff.kind != CutoffKind::Sharp {
        return Err(Error::config("invariance test needs projected placement and sharp (disc) noise"));
    }
    let n = cfg.n_cut;
    let sigma = wick_sigma(cfg);
    if sigma != gibbs_sigma(n, &cfg.inner_cutoff, &cfg.params) {
        return Err(Error::config("solver and Gibbs Wick variances disagree"));
    }
    let draw = |tag: u64| {
        let smc = SmcOptions { particles: opts.members, seed: split_seed(opts.seed, tag), ..opts.smc.clone() };
        smc_gibbs(n, &cfg.params, &cfg.inner_cutoff, sigma, &smc)
    };
    let start = draw(TAG_REFERENCE)?;
    let members = draw(TAG_MEMBERS)?.particles;

    let stepper = Stepper::new(cfg, sigma)?;
    let steps = (opts.t_final / cfg.dt).round() as usize;
    let evolve_seed = split_seed(opts.seed, TAG_EVOLVE);
    let finals: Vec<Result<SpectralField>> = par_map(members.len(), |i| {
        let mut u = members[i].with_grid_size(cfg.grid_size);
        let zero = SpectralField::zeros(n, cfg.grid_size);
        let mut noise = NoiseState::from_modes(zero, cfg.cutoff, cfg.params, stream(evolve_seed, i as u64));
        for k in 0..steps {
            let old = noise.modes.clone();
            noise.ou_step(cfg.dt);
            u = stepper.step_u(&u, &old, &noise.modes, k as f64 * cfg.dt)?;
        }
        Ok(u)
    });
    let finals = finals.into_iter().collect::<Result<Vec<_>>>()?;

    let rows = observables
        .iter()
        .map(|obs| {
            let v0: Vec<f64> = start.particles.iter().map(|u| (obs.eval)(u)).collect();
            let v1: Vec<f64> = finals.iter().map(|u| (obs.eval)(u)).collect();
            let ((m0, se0), (m1, se1)) = (mean_se(&v0), mean_se(&v1));
            let pooled = (se0 * se0 + se1 * se1).sqrt();
            InvarianceRow {
                observable: obs.name.clone(),
                t0_mean: m0,
                t1_mean: m1,
                pooled_se: pooled,
                z: if pooled > 0.0 { (m1 - m0) / pooled } else { 0.0 },
            }
        })
        .collect();
    Ok(InvarianceReport { rows, log_z: start.log_z, sigma })
}

/// Configuration used by the invariance test: disc noise, smooth inner projector.
pub fn invariance_config(params: crate::noise::PhysicsParams, n_cut: usize) -> SimConfig {
    let mut cfg = SimConfig::new(params, n_cut);
    cfg.placement = Placement::Projected;
    cfg.cutoff = CutoffSpec::sharp();
    cfg.inner_cutoff = CutoffSpec::smooth();
    cfg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::PhysicsParams;

    #[test]
    fn ratio_violation_refused() {
        let params = PhysicsParams { c2: -1.0, ..PhysicsParams::default() };
        let cfg = invariance_config(params, 2);
        let err = invariance_test(&cfg, &InvarianceOptions { members: 4, ..Default::default() }, &[]);
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn linear_flow_keeps_l2() {
        let params = PhysicsParams { c1: 0.0, c2: 0.0, ..PhysicsParams::default() };
        let mut cfg = invariance_config(params, 2);
        cfg.dt = 0.01;
        let opts = InvarianceOptions { members: 400, t_final: 0.5, seed: 3, ..Default::default() };
        let rep = invariance_test(&cfg, &opts, &default_observables(&cfg)).unwrap();
        assert!(rep.max_abs_z() < 4.0, "{}", rep.csv());
    }
}

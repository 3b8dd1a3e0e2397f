use super::config::SimConfig;
use crate::noise::{mode_variance, sample_stationary, sigma_const, NoiseState};
use crate::rng::StreamRng;
use crate::spectral::{dealias_floor, SpectralField};

/// A sampled trajectory of `Ψ_N` on a uniform time grid.
#[derive(Clone, Debug)]
pub struct NoisePath {
    pub dt: f64,
    pub states: Vec<SpectralField>,
    /// `σ_N` of the noise cutoff.
    pub sigma: f64,
}

impl NoisePath {
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    /// Every `stride`-th state; the exact OU transitions compose, so this is
    /// a sample of the same path at step `stride · dt`.
    pub fn coarsen(&self, stride: usize) -> NoisePath {
        assert!(stride >= 1 && self.steps() % stride == 0, "stride must divide the step count");
        NoisePath { dt: self.dt * stride as f64, states: self.states.iter().step_by(stride).cloned().collect(), sigma: self.sigma }
    }
}

/// Stationary start and `steps` exact OU steps of size `dt`.
pub fn noise_path(cfg: &SimConfig, dt: f64, steps: usize, rng: StreamRng) -> NoisePath {
    let mut st = sample_stationary(cfg.n_cut, cfg.grid_size, cfg.cutoff, cfg.params, rng);
    let sigma = st.sigma_n_const;
    let mut states = Vec::with_capacity(steps + 1);
    states.push(st.modes.clone());
    for _ in 0..steps {
        st.ou_step(dt);
        states.push(st.modes.clone());
    }
    NoisePath { dt, states, sigma }
}

/// Noise paths for several cutoffs built from one stream of Gaussians, so
/// every mode shared by two resolutions carries the same Brownian path.
pub fn coupled_paths(cfg: &SimConfig, n_list: &[usize], dt: f64, steps: usize, mut rng: StreamRng) -> Vec<NoisePath> {
    let top = n_list.iter().copied().max().unwrap_or(0);
    let m = cfg.params.m;
    let bank0 = NoiseState::draw_bank(&mut rng, top, 2 * top + 1);
    let mut states: Vec<NoiseState> = n_list
        .iter()
        .map(|&n| {
            let grid = dealias_floor(2 * m - 1, n);
            let modes = SpectralField::from_fn(n, grid, |a, b| {
                bank0.get(a, b) * mode_variance((a, b), n, &cfg.cutoff, &cfg.params).sqrt()
            });
            NoiseState::from_modes(modes, cfg.cutoff, cfg.params, crate::rng::stream(0, 0))
        })
        .collect();
    let mut paths: Vec<NoisePath> = states
        .iter()
        .zip(n_list)
        .map(|(s, &n)| NoisePath { dt, states: vec![s.modes.clone()], sigma: sigma_const(n, &cfg.cutoff, &cfg.params) })
        .collect();
    for _ in 0..steps {
        let bank = NoiseState::draw_bank(&mut rng, top, 2 * top + 1);
        for (s, p) in states.iter_mut().zip(paths.iter_mut()) {
            s.ou_step_with(dt, &bank);
            p.states.push(s.modes.clone());
        }
    }
    paths
}

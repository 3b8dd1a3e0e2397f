use crate::noise::PhysicsParams;
use crate::spectral::{dealias_floor, CutoffSpec};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// First-order exponential Euler.
    EtdEuler,
    /// Second-order exponential predictor–corrector (Cox–Matthews ETD2RK).
    EtdRk2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formulation {
    /// Evolve `u_N` directly.
    U,
    /// Evolve `v_N = u_N - Ψ_N` driven by the Wick tensor of `Ψ_N`.
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    /// Cutoff enters only through the noise and the data.
    NoiseOnly,
    /// Nonlinearity `S_N[N(S_N u)]` with the projector `inner_cutoff`.
    Projected,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub params: PhysicsParams,
    pub n_cut: usize,
    pub grid_size: usize,
    pub dt: f64,
    pub t_final: f64,
    pub seed: u64,
    pub scheme: Scheme,
    pub formulation: Formulation,
    pub placement: Placement,
    /// Cutoff applied to the noise.
    pub cutoff: CutoffSpec,
    /// Projector used inside and outside the nonlinearity for `Projected`.
    pub inner_cutoff: CutoffSpec,
    /// Regularity label of the initial data, `s₀`.
    pub s0: f64,
    pub eps: f64,
    /// Exponent of the recorded `L^p` norm.
    pub p: f64,
    /// Amplitude of the deterministic part of the initial data.
    pub v0_amplitude: f64,
    pub blowup_ceiling: f64,
    /// Record a snapshot every this many steps (0 disables).
    pub snapshot_every: usize,
}

impl SimConfig {
    pub fn new(params: PhysicsParams, n_cut: usize) -> Self {
        Self {
            params,
            n_cut,
            grid_size: dealias_floor(2 * params.m - 1, n_cut),
            dt: 1e-3,
            t_final: 1.0,
            seed: 0,
            scheme: Scheme::EtdRk2,
            formulation: Formulation::U,
            placement: Placement::NoiseOnly,
            cutoff: CutoffSpec::smooth(),
            inner_cutoff: CutoffSpec::smooth(),
            s0: -0.05,
            eps: 0.05,
            p: 4.0,
            v0_amplitude: 0.0,
            blowup_ceiling: 1e8,
            snapshot_every: 0,
        }
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    /// Cutoff that defines `σ_N` for the Wick ordering.
    pub fn wick_cutoff(&self) -> CutoffSpec {
        match self.placement {
            Placement::NoiseOnly => self.cutoff,
            Placement::Projected => self.inner_cutoff,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.dt > 0.0) || !(self.t_final >= 0.0) {
            return Err(Error::Config(format!("need dt > 0 and t_final >= 0 (dt = {}, t_final = {})", self.dt, self.t_final)));
        }
        let steps = self.t_final / self.dt;
        if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
            return Err(Error::Config(format!("t_final = {} is not a multiple of dt = {}", self.t_final, self.dt)));
        }
        let need = dealias_floor(2 * self.params.m - 1, self.n_cut);
        if self.grid_size < need {
            return Err(Error::Config(format!(
                "grid_size {} is below the dealiasing floor {need} for degree {} at N = {}",
                self.grid_size,
                2 * self.params.m - 1,
                self.n_cut
            )));
        }
        Ok(())
    }

    /// Whether `s₀` satisfies the local well-posedness condition `s₀ > -2/(2m-1)`.
    pub fn s0_admissible(&self) -> bool {
        self.s0 > -2.0 / (2.0 * self.params.m as f64 - 1.0)
    }
}

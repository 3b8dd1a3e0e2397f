use crate::noise::PhysicsParams;
use crate::solver::{Formulation, Placement, Scheme, SimConfig};
use crate::spectral::{dealias_floor, CutoffKind, CutoffSpec};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub physics: PhysicsSection,
    pub solver: SolverSection,
    pub experiment: ExperimentSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicsSection {
    pub a1: f64,
    pub a2: f64,
    pub c1: f64,
    pub c2: f64,
    pub gamma: f64,
    pub m: usize,
}

impl Default for PhysicsSection {
    fn default() -> Self {
        let p = PhysicsParams::default();
        Self { a1: p.a1, a2: p.a2, c1: p.c1, c2: p.c2, gamma: p.gamma, m: p.m }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub n_cut: usize,
    /// 0 selects the smallest dealiasing grid.
    pub grid_size: usize,
    pub dt: f64,
    pub t_final: f64,
    /// `etd-euler` or `etd-rk2`.
    pub scheme: String,
    /// `u` or `v`.
    pub formulation: String,
    /// `noise-only` or `projected`.
    pub placement: String,
    /// `smooth` or `sharp`.
    pub cutoff: String,
    pub inner_cutoff: String,
    pub s0: f64,
    pub eps: f64,
    pub p: f64,
    pub v0_amplitude: f64,
    pub blowup_ceiling: f64,
    pub snapshot_every: usize,
    /// Energy-monitor sampling stride in steps.
    pub monitor_stride: usize,
    /// 0 selects the default `η`.
    pub eta: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        let c = SimConfig::new(PhysicsParams::default(), 8);
        Self {
            n_cut: c.n_cut,
            grid_size: 0,
            dt: c.dt,
            t_final: c.t_final,
            scheme: "etd-rk2".into(),
            formulation: "v".into(),
            placement: "noise-only".into(),
            cutoff: "smooth".into(),
            inner_cutoff: "smooth".into(),
            s0: c.s0,
            eps: c.eps,
            p: c.p,
            v0_amplitude: 1.0,
            blowup_ceiling: c.blowup_ceiling,
            snapshot_every: 0,
            monitor_stride: 10,
            eta: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSection {
    pub n_list: Vec<usize>,
    pub members: usize,
    pub samples: usize,
    /// Monomial indices for `wick-cauchy`.
    pub k: usize,
    pub ell: usize,
    /// Negative Sobolev index for `wick-cauchy`.
    pub eps: f64,
    pub allow_ratio_violation: bool,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        Self { n_list: vec![8, 16, 32, 64], members: 64, samples: 100_000, k: 2, ell: 1, eps: 0.1, allow_ratio_violation: false }
    }
}

fn parse_cutoff(s: &str) -> Result<CutoffSpec> {
    match s {
        "smooth" => Ok(CutoffSpec::smooth()),
        "sharp" => Ok(CutoffSpec::sharp()),
        _ => Err(Error::Config(format!("unknown cutoff `{s}` (expected smooth or sharp)"))),
    }
}

fn cutoff_name(c: &CutoffSpec) -> &'static str {
    match c.kind {
        CutoffKind::Smooth => "smooth",
        CutoffKind::Sharp => "sharp",
    }
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn physics(&self) -> PhysicsParams {
        let p = &self.physics;
        PhysicsParams { a1: p.a1, a2: p.a2, c1: p.c1, c2: p.c2, gamma: p.gamma, m: p.m }
    }

    pub fn sim_config(&self, seed: u64) -> Result<SimConfig> {
        let s = &self.solver;
        let params = self.physics();
        params.validate()?;
        let mut c = SimConfig::new(params, s.n_cut);
        c.grid_size = if s.grid_size == 0 { dealias_floor(2 * params.m - 1, s.n_cut) } else { s.grid_size };
        c.dt = s.dt;
        c.t_final = s.t_final;
        c.seed = seed;
        c.scheme = match s.scheme.as_str() {
            "etd-euler" => Scheme::EtdEuler,
            "etd-rk2" => Scheme::EtdRk2,
            o => return Err(Error::Config(format!("unknown scheme `{o}` (expected etd-euler or etd-rk2)"))),
        };
        c.formulation = match s.formulation.as_str() {
            "u" => Formulation::U,
            "v" => Formulation::V,
            o => return Err(Error::Config(format!("unknown formulation `{o}` (expected u or v)"))),
        };
        c.placement = match s.placement.as_str() {
            "noise-only" => Placement::NoiseOnly,
            "projected" => Placement::Projected,
            o => return Err(Error::Config(format!("unknown placement `{o}` (expected noise-only or projected)"))),
        };
        c.cutoff = parse_cutoff(&s.cutoff)?;
        c.inner_cutoff = parse_cutoff(&s.inner_cutoff)?;
        c.s0 = s.s0;
        c.eps = s.eps;
        c.p = s.p;
        c.v0_amplitude = s.v0_amplitude;
        c.blowup_ceiling = s.blowup_ceiling;
        c.snapshot_every = s.snapshot_every;
        c.validate()?;
        Ok(c)
    }

    /// Echo of a resolved solver configuration back into file form.
    pub fn with_resolved(mut self, c: &SimConfig) -> Self {
        let s = &mut self.solver;
        s.grid_size = c.grid_size;
        s.cutoff = cutoff_name(&c.cutoff).into();
        s.inner_cutoff = cutoff_name(&c.inner_cutoff).into();
        self
    }
}

use super::config::{Formulation, SimConfig};
use super::etd::{wick_sigma, Stepper};
use super::path::{coupled_paths, noise_path, NoisePath};
use crate::rng::{par_map, split_seed, stream};
use crate::spectral::{holder_norm, Grid, SpectralField};
use crate::stats::MeanVar;
use crate::{Error, Result};
use num_complex::Complex64;

pub(crate) const TAG_NOISE: u64 = 0x4E01_5E;

/// Deterministic part of the initial data: `A(e^{ix₁} + (i/2) e^{-ix₂})`.
pub fn initial_v0(cfg: &SimConfig) -> SpectralField {
    let mut v0 = SpectralField::zeros(cfg.n_cut, cfg.grid_size);
    if cfg.n_cut >= 1 && cfg.v0_amplitude != 0.0 {
        v0.set(1, 0, Complex64::new(cfg.v0_amplitude, 0.0));
        v0.set(0, -1, Complex64::new(0.0, 0.5 * cfg.v0_amplitude));
    } else if cfg.v0_amplitude != 0.0 {
        v0.set(0, 0, Complex64::new(cfg.v0_amplitude, 0.0));
    }
    v0
}

/// Raw output of [`integrate`]: the evolved field (`u` or `v` per the
/// formulation) at each node. On blow-up the fields stop at the last
/// finite node and `blowup` holds the time of loss.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub fields: Vec<SpectralField>,
    pub blowup: Option<f64>,
}

/// Integrates from `v0` (so `u(0) = v0 + Ψ(0)` in the `u`-form) over the
/// path sampled every `stride` steps.
pub fn integrate(cfg: &SimConfig, v0: &SpectralField, path: &NoisePath, stride: usize) -> Result<Trajectory> {
    let path = path.coarsen(stride);
    let mut cfg = cfg.clone();
    cfg.dt = path.dt;
    cfg.t_final = path.dt * path.steps() as f64;
    let stepper = Stepper::new(&cfg, wick_sigma(&cfg))?;
    let mut cur = match cfg.formulation {
        Formulation::U => v0 + &path.states[0],
        Formulation::V => v0.clone(),
    };
    let mut times = vec![0.0];
    let mut fields = vec![cur.clone()];
    let mut blowup = None;
    for k in 0..path.steps() {
        let t = k as f64 * path.dt;
        let next = match cfg.formulation {
            Formulation::U => stepper.step_u(&cur, &path.states[k], &path.states[k + 1], t),
            Formulation::V => stepper.step_v(&cur, &stepper.tensor(&path.states[k]), t),
        };
        match next {
            Ok(f) => cur = f,
            Err(Error::BlowUp { time }) => {
                blowup = Some(time);
                break;
            }
            Err(e) => return Err(e),
        }
        times.push((k + 1) as f64 * path.dt);
        fields.push(cur.clone());
    }
    Ok(Trajectory { times, fields, blowup })
}

/// Per-node diagnostics of the remainder `v`.
#[derive(Clone, Debug, Default)]
pub struct TrajectoryRecord {
    pub p: f64,
    pub times: Vec<f64>,
    pub l2: Vec<f64>,
    pub linf: Vec<f64>,
    pub lp: Vec<f64>,
    /// `‖v(t)‖_{C^{s₀}}`.
    pub holder_s0: Vec<f64>,
    /// `t^{(2ε - s₀)/2} ‖v(t)‖_{C^{2ε}}`.
    pub weighted_2eps: Vec<f64>,
    pub snapshots: Vec<(f64, SpectralField)>,
    pub blowup: Option<f64>,
}

impl TrajectoryRecord {
    pub const CSV_HEADER: &'static str = "t,L2,Linf,Lp,C_s0,weighted_C_2eps";

    /// `‖v‖_{X^{s₀,2ε}_T}` accumulated over the record.
    pub fn x_norm(&self) -> f64 {
        self.weighted_2eps.iter().fold(0.0, |a: f64, &b| a.max(b)) + self.holder_s0.iter().fold(0.0, |a: f64, &b| a.max(b))
    }

    pub fn csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for i in 0..self.times.len() {
            s.push_str(&format!(
                "{:.10},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n",
                self.times[i], self.l2[i], self.linf[i], self.lp[i], self.holder_s0[i], self.weighted_2eps[i]
            ));
        }
        s
    }
}

/// `‖v‖_{X^{s₀,2ε}}` distance between two trajectories on the same nodes.
pub fn x_distance(times: &[f64], a: &[SpectralField], b: &[SpectralField], s0: f64, eps: f64) -> f64 {
    let (mut w, mut h) = (0.0f64, 0.0f64);
    for ((t, x), y) in times.iter().zip(a).zip(b) {
        let d = x - y;
        w = w.max(t.powf((2.0 * eps - s0) / 2.0) * holder_norm(&d, 2.0 * eps));
        h = h.max(holder_norm(&d, s0));
    }
    w + h
}

pub fn record(cfg: &SimConfig, times: &[f64], vs: &[SpectralField], blowup: Option<f64>) -> TrajectoryRecord {
    let mut rec = TrajectoryRecord { p: cfg.p, blowup, ..Default::default() };
    for (k, (t, v)) in times.iter().zip(vs).enumerate() {
        let g: Grid = v.to_grid();
        rec.times.push(*t);
        rec.l2.push(g.lp_norm(2.0));
        rec.linf.push(g.lp_norm(f64::INFINITY));
        rec.lp.push(g.lp_norm(cfg.p));
        rec.holder_s0.push(holder_norm(v, cfg.s0));
        rec.weighted_2eps.push(t.powf((2.0 * cfg.eps - cfg.s0) / 2.0) * holder_norm(v, 2.0 * cfg.eps));
        if cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0 {
            rec.snapshots.push((*t, v.clone()));
        }
    }
    rec
}

/// Everything produced by one seeded run.
#[derive(Clone, Debug)]
pub struct SimOutput {
    pub record: TrajectoryRecord,
    pub path: NoisePath,
    /// `v = u - Ψ` at every node.
    pub v: Vec<SpectralField>,
}

/// Seeded run of `cfg`: noise from stream 0 of `split_seed(seed, TAG_NOISE)`.
pub fn simulate(cfg: &SimConfig) -> Result<SimOutput> {
    cfg.validate()?;
    let path = noise_path(cfg, cfg.dt, cfg.steps(), stream(split_seed(cfg.seed, TAG_NOISE), 0));
    let traj = integrate(cfg, &initial_v0(cfg), &path, 1)?;
    let v: Vec<SpectralField> = match cfg.formulation {
        Formulation::U => traj.fields.iter().zip(&path.states).map(|(u, p)| u - p).collect(),
        Formulation::V => traj.fields,
    };
    let record = record(cfg, &traj.times, &v, traj.blowup);
    Ok(SimOutput { record, path, v })
}

/// Consecutive-resolution distances `sup_t ‖v_{N'}(t) - v_N(t)‖_{C^{s₀}}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub n_list: Vec<usize>,
    pub mean_distances: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// `per_member[i][j]` is the `j`-th consecutive distance of member `i`.
    pub per_member: Vec<Vec<f64>>,
}

impl ConvergenceReport {
    pub const CSV_HEADER: &'static str = "N,N_next,mean_sup_C_s0_distance,std_error";

    pub fn monotone_decreasing(&self) -> bool {
        self.mean_distances.windows(2).all(|w| w[1] < w[0])
    }

    pub fn csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for j in 0..self.mean_distances.len() {
            s.push_str(&format!(
                "{},{},{:.12e},{:.12e}\n",
                self.n_list[j],
                self.n_list[j + 1],
                self.mean_distances[j],
                self.std_errors[j]
            ));
        }
        s
    }
}

/// Runs the `v`-form at each `N` with coupled noise for `members` paths.
pub fn convergence_in_n(cfg: &SimConfig, n_list: &[usize], members: usize, seed: u64) -> Result<ConvergenceReport> {
    if n_list.len() < 2 || members == 0 {
        return Err(Error::config("need at least two cutoffs and one member"));
    }
    let base = split_seed(seed, TAG_NOISE ^ 0xC0);
    let rows = par_map(members, |i| -> Result<Vec<f64>> {
        let paths = coupled_paths(cfg, n_list, cfg.dt, cfg.steps(), stream(base, i as u64));
        let mut runs = Vec::new();
        for (&n, path) in n_list.iter().zip(&paths) {
            let mut c = cfg.clone();
            c.n_cut = n;
            c.grid_size = crate::spectral::dealias_floor(2 * c.params.m - 1, n);
            c.formulation = Formulation::V;
            let tr = integrate(&c, &initial_v0(&c), path, 1)?;
            if let Some(t) = tr.blowup {
                return Err(Error::BlowUp { time: t });
            }
            runs.push(tr.fields);
        }
        Ok((0..n_list.len() - 1)
            .map(|j| {
                let top = n_list[j + 1];
                runs[j]
                    .iter()
                    .zip(&runs[j + 1])
                    .map(|(a, b)| holder_norm(&(b - &a.resize(top).with_grid_size(b.grid_size())), cfg.s0))
                    .fold(0.0, f64::max)
            })
            .collect())
    });
    let per_member = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let mut mean_distances = Vec::new();
    let mut std_errors = Vec::new();
    for j in 0..n_list.len() - 1 {
        let acc: MeanVar = per_member.iter().map(|r| r[j]).collect();
        mean_distances.push(acc.mean());
        std_errors.push(acc.std_error());
    }
    Ok(ConvergenceReport { n_list: n_list.to_vec(), mean_distances, std_errors, per_member })
}

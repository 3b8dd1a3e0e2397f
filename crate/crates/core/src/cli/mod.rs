//! The `scgl` command line: TOML configuration, one master seed, a
//! manifest per run and CSV/WCGL outputs.
//!
//! Exit codes: 0 success, 1 a check failed (or the run aborted
//! numerically), 2 configuration error.

mod config;
mod schema;

pub use config::{ExperimentSection, FileConfig, PhysicsSection, SolverSection};

use crate::energy::{default_eta, gwp_admissible, monitor_energy};
use crate::gibbs::{default_observables, invariance_config, invariance_test, zn_lower_bound, InvarianceOptions};
use crate::noise::{mc_orthogonality, wick_cauchy_trend, OrthoSpec};
use crate::polyalg::{scaling_residual_exact, sum_formula_max_error, verify_hermite_identities, verify_three_point_exact};
use crate::solver::{convergence_in_n, simulate};
use crate::spectral::write_snapshot;
use crate::{Complex64, Error, Result};
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "scgl", version, about = "Wick-ordered stochastic complex Ginzburg-Landau laboratory")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// TOML configuration file; defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, global = true, default_value = "scgl-out")]
    pub out: PathBuf,
    /// Worker threads (0 = all cores); does not affect results.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Integrate one path and monitor the L^p energy inequality.
    Simulate,
    /// Laguerre and Hermite identity suites.
    VerifyAlgebra {
        #[arg(long, default_value_t = 4)]
        m_max: usize,
        #[arg(long, default_value_t = 3)]
        ell_max: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Monte Carlo check of the Laguerre expectation formula.
    McOrtho {
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Coupled Cauchy trend of a Wick monomial in W^{-eps,inf}.
    WickCauchy {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        ensembles: Option<usize>,
    },
    /// Positivity window and global well-posedness classification.
    Regime {
        #[arg(long)]
        a1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        a2: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        c1: Option<f64>,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Invariance of the truncated Gibbs measure under the dynamics.
    GibbsInvariance {
        #[arg(long)]
        members: Option<usize>,
        #[arg(long)]
        t_final: Option<f64>,
        #[arg(long)]
        allow_ratio_violation: bool,
    },
    /// Partition-function estimates across cutoffs.
    ZnScan {
        #[arg(long, default_value_t = 128)]
        count: usize,
    },
    /// Distances between v at consecutive cutoffs on coupled noise.
    ConvergeN {
        #[arg(long)]
        members: Option<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::VerifyAlgebra { .. } => "verify-algebra",
            Command::McOrtho { .. } => "mc-ortho",
            Command::WickCauchy { .. } => "wick-cauchy",
            Command::Regime { .. } => "regime",
            Command::GibbsInvariance { .. } => "gibbs-invariance",
            Command::ZnScan { .. } => "zn-scan",
            Command::ConvergeN { .. } => "converge-n",
        }
    }
}

/// Collected outputs of one subcommand before they are written.
struct Outputs {
    files: Vec<(String, Vec<u8>)>,
    summary: String,
    passed: bool,
}

impl Outputs {
    fn new() -> Self {
        Self { files: Vec::new(), summary: String::new(), passed: true }
    }

    fn text(&mut self, name: &str, body: String) {
        self.files.push((name.to_string(), body.into_bytes()));
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(summary) => {
            print!("{}", summary.0);
            i32::from(!summary.1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Domain(_) => 2,
                _ => 1,
            }
        }
    }
}

/// Runs a parsed command; returns the printed summary and the check verdict.
pub fn run(cli: &Cli) -> Result<(String, bool)> {
    if cli.global.threads > 0 {
        // a pool that already exists keeps its size; results do not depend on it
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads).build_global();
    }
    let mut cfg = match &cli.global.config {
        Some(p) => FileConfig::parse(&std::fs::read_to_string(p)?)?,
        None => FileConfig::default(),
    };
    let seed = cli.global.seed;
    let mut flags = String::new();
    let out = execute(&cli.command, &mut cfg, seed, &mut flags)?;
    write_outputs(cli, &cfg, &flags, &out)?;
    Ok((out.summary, out.passed))
}

fn execute(cmd: &Command, cfg: &mut FileConfig, seed: u64, flags: &mut String) -> Result<Outputs> {
    let mut out = Outputs::new();
    match cmd {
        Command::Simulate => {
            let sim = cfg.sim_config(seed)?;
            *cfg = cfg.clone().with_resolved(&sim);
            let res = simulate(&sim)?;
            out.text("trajectory.csv", res.record.csv());
            let stride = cfg.solver.monitor_stride.max(1);
            let idx: Vec<usize> = (0..res.v.len()).step_by(stride).collect();
            let params = sim.params;
            let eta = if cfg.solver.eta > 0.0 { cfg.solver.eta } else { default_eta(&params, sim.p) };
            let ledger = monitor_energy(
                &idx.iter().map(|&i| res.record.times[i]).collect::<Vec<_>>(),
                &idx.iter().map(|&i| res.v[i].clone()).collect::<Vec<_>>(),
                &idx.iter().map(|&i| res.path.states[i].clone()).collect::<Vec<_>>(),
                res.path.sigma,
                sim.p,
                eta,
                &params,
            )?;
            out.text("energy.csv", ledger.csv());
            for (k, (_, v)) in res.record.snapshots.iter().enumerate() {
                out.files.push((format!("snapshot_{k:06}.wcgl"), snapshot_bytes(v)?));
            }
            if let Some(v) = res.v.last() {
                out.files.push(("final.wcgl".into(), snapshot_bytes(v)?));
            }
            let lp = ledger.lp.last().copied().unwrap_or(f64::NAN);
            let _ = writeln!(
                out.summary,
                "steps={} final_Lp={lp:.6} min_relative_slack={:.3e} p_in_window={} blowup={}",
                sim.steps(),
                ledger.min_relative_slack(),
                ledger.admissible_p,
                res.record.blowup.map_or("none".to_string(), |t| format!("{t}"))
            );
            out.passed = res.record.blowup.is_none();
        }
        Command::VerifyAlgebra { m_max, ell_max, trials } => {
            let _ = write!(flags, "m_max = {m_max}\nell_max = {ell_max}\ntrials = {trials}\n");
            let mut csv = String::from("suite,case,metric,passed\n");
            let mut all = true;
            for m in 1..=*m_max {
                for ell in 0..=*ell_max {
                    let err = sum_formula_max_error(m, ell, *trials, seed)?;
                    let ok = err < 1e-10;
                    all &= ok;
                    let _ = writeln!(csv, "laguerre_sum,m={m} ell={ell},{err:.3e},{ok}");
                }
            }
            let x = BigRational::new(7.into(), 3.into());
            for k in 1..=(*m_max + *ell_max) {
                for ell in -1..=(*ell_max as i64) {
                    let ok = verify_three_point_exact(k, ell, &x) && scaling_residual_exact(k, ell, 1.75, 0.3125).is_zero();
                    all &= ok;
                    let _ = writeln!(csv, "laguerre_exact,k={k} ell={ell},0,{ok}");
                }
            }
            for k in 0..=2 * *m_max {
                let chk = verify_hermite_identities(k, 1.0, 0.5, 0.7, 0.3)?;
                let ok = chk.passed();
                all &= ok;
                let _ = writeln!(csv, "hermite,k={k},{:.3e},{ok}", chk.integral_rel_error);
            }
            out.text("algebra.csv", csv);
            let _ = writeln!(out.summary, "verify-algebra: {}", if all { "all identities hold" } else { "FAILED" });
            out.passed = all;
        }
        Command::McOrtho { samples } => {
            let samples = samples.unwrap_or(cfg.experiment.samples);
            let _ = writeln!(flags, "samples = {samples}");
            let rhos = [Complex64::new(0.5, 0.0), Complex64::new(0.3, 0.4), Complex64::new(-0.2, 0.6)];
            let mut csv = String::from("k,ell,mprime,rho_re,rho_im,target_re,target_im,estimate_re,estimate_im,se_re,se_im,max_abs_z\n");
            let mut worst: f64 = 0.0;
            for (ri, rho) in rhos.iter().enumerate() {
                for k in 0..=3 {
                    for ell in 0..=3 {
                        for mp in 0..=3 {
                            let spec = OrthoSpec { k, ell, mprime: mp, rho: *rho, sigma_f: 1.0, sigma_g: 1.0 };
                            let case = ((ri * 4 + k) * 4 + ell) * 4 + mp;
                            let st = mc_orthogonality(&spec, samples, crate::rng::split_seed(seed, case as u64))?;
                            let t = spec.target();
                            let z = st.max_abs_z();
                            worst = worst.max(z);
                            let _ = writeln!(
                                csv,
                                "{k},{ell},{mp},{},{},{:.12e},{:.12e},{:.12e},{:.12e},{:.6e},{:.6e},{z:.4}",
                                rho.re, rho.im, t.re, t.im, st.re.estimate, st.im.estimate, st.re.std_error, st.im.std_error
                            );
                        }
                    }
                }
            }
            out.text("mc_ortho.csv", csv);
            out.passed = worst < 4.0;
            let _ = writeln!(out.summary, "mc-ortho: max |z| = {worst:.3} over 192 cases");
        }
        Command::WickCauchy { k, ell, eps, ensembles } => {
            let e = &mut cfg.experiment;
            e.k = k.unwrap_or(e.k);
            e.ell = ell.unwrap_or(e.ell);
            e.eps = eps.unwrap_or(e.eps);
            e.members = ensembles.unwrap_or(e.members);
            let e = e.clone();
            let rep = wick_cauchy_trend(e.k, e.ell, &e.n_list, e.members, e.eps, &crate::spectral::CutoffSpec::smooth(), &cfg.physics(), seed)?;
            out.text("wick_cauchy.csv", rep.csv());
            out.passed = rep.strictly_decreasing();
            let _ = writeln!(out.summary, "wick-cauchy: means {:?} strictly_decreasing={} slope={:.4}", rep.means, out.passed, rep.slope);
        }
        Command::Regime { a1, a2, c1, m } => {
            let p = &mut cfg.physics;
            p.a1 = a1.unwrap_or(p.a1);
            p.a2 = a2.unwrap_or(p.a2);
            p.c1 = c1.unwrap_or(p.c1);
            p.m = m.unwrap_or(p.m);
            let params = cfg.physics();
            params.validate()?;
            let a = gwp_admissible(&params);
            let w = a.window;
            let header = "a1,a2,c1,m,r_a1_over_a2,r_a2_over_a1,p_min,p_max,p_max_stated,p_max_stated_alt,degree,margin,admissible,stated_admissible";
            let row = format!(
                "{},{},{},{},{:.12},{:.12},{},{:.12},{:.12},{:.12},{},{:.12},{},{}",
                params.a1, params.a2, params.c1, params.m, w.r_a1_over_a2, w.r_a2_over_a1, w.p_min, w.p_max,
                w.p_max_stated, w.p_max_stated_alt, a.degree, a.margin, a.admissible, a.stated_admissible
            );
            out.text("regime.csv", format!("{header}\n{row}\n"));
            let _ = writeln!(
                out.summary,
                "admissible={} window=({}, {:.5}) margin={:.5}\nstated_window=({}, {:.5}) stated_admissible={} stated_margin={:.5}",
                a.admissible, w.p_min, w.p_max, a.margin, w.p_min, w.p_max_stated, a.stated_admissible, a.stated_margin
            );
        }
        Command::GibbsInvariance { members, t_final, allow_ratio_violation } => {
            let mut sim = invariance_config(cfg.physics(), cfg.solver.n_cut);
            sim.dt = cfg.solver.dt;
            sim.scheme = cfg.sim_config(seed)?.scheme;
            *cfg = cfg.clone().with_resolved(&sim);
            cfg.solver.placement = "projected".into();
            let opts = InvarianceOptions {
                members: members.unwrap_or(cfg.experiment.members),
                t_final: t_final.unwrap_or(cfg.solver.t_final),
                seed,
                allow_ratio_violation: *allow_ratio_violation || cfg.experiment.allow_ratio_violation,
                ..Default::default()
            };
            let _ = write!(flags, "members = {}\nt_final = {}\nallow_ratio_violation = {}\n", opts.members, opts.t_final, opts.allow_ratio_violation);
            let rep = invariance_test(&sim, &opts, &default_observables(&sim))?;
            out.text("invariance.csv", rep.csv());
            out.passed = rep.max_abs_z() < 4.0;
            let _ = writeln!(out.summary, "gibbs-invariance: max |z| = {:.3} log Z = {:.4} sigma = {:.6}", rep.max_abs_z(), rep.log_z, rep.sigma);
        }
        Command::ZnScan { count } => {
            let _ = writeln!(flags, "count = {count}");
            let rep = zn_lower_bound(&cfg.experiment.n_list, &cfg.physics(), *count, seed)?;
            out.text("zn.csv", rep.csv());
            out.passed = rep.min_lower() > 0.0;
            let _ = writeln!(out.summary, "zn-scan: min lower bound = {:.6e}", rep.min_lower());
        }
        Command::ConvergeN { members } => {
            let sim = cfg.sim_config(seed)?;
            let members = members.unwrap_or(cfg.experiment.members);
            let _ = writeln!(flags, "members = {members}");
            let rep = convergence_in_n(&sim, &cfg.experiment.n_list, members, seed)?;
            out.text("converge.csv", rep.csv());
            let _ = writeln!(out.summary, "converge-n: mean distances {:?}", rep.mean_distances);
        }
    }
    Ok(out)
}

fn snapshot_bytes(v: &crate::spectral::SpectralField) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_snapshot(&mut buf, v)?;
    Ok(buf)
}

/// Identifier of this build; `SCGL_BUILD_ID` may carry a `git describe` string.
pub fn build_id() -> String {
    option_env!("SCGL_BUILD_ID").map_or_else(|| format!("scgl-{}", env!("CARGO_PKG_VERSION")), str::to_string)
}

fn write_outputs(cli: &Cli, cfg: &FileConfig, flags: &str, out: &Outputs) -> Result<()> {
    let dir: &Path = &cli.global.out;
    std::fs::create_dir_all(dir)?;
    let mut names = Vec::new();
    for (name, bytes) in &out.files {
        std::fs::write(dir.join(name), bytes)?;
        names.push(name.as_str());
    }
    let mut m = String::new();
    let _ = writeln!(m, "subcommand = \"{}\"", cli.command.name());
    let cfg_path = cli.global.config.as_ref().map_or("<defaults>".to_string(), |p| p.display().to_string());
    let _ = writeln!(m, "config_path = \"{cfg_path}\"");
    let _ = writeln!(m, "seed = {}", cli.global.seed);
    let _ = writeln!(m, "out_dir = \"{}\"", dir.display());
    let _ = writeln!(m, "build = \"{}\"", build_id());
    let _ = writeln!(m, "passed = {}", out.passed);
    let _ = writeln!(m, "outputs = [{}]", names.iter().map(|n| format!("\"{n}\"")).collect::<Vec<_>>().join(", "));
    m.push_str(flags);
    m.push('\n');
    m.push_str(&cfg.to_toml());
    std::fs::write(dir.join("manifest.toml"), m)?;
    std::fs::write(dir.join("schema.txt"), schema::render(&names))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regime_flags() {
        let cli = Cli::try_parse_from(["scgl", "regime", "--a1", "1", "--a2", "1", "--m", "2", "--out", "/dev/null/x"]).unwrap();
        let mut cfg = FileConfig::default();
        let out = execute(&cli.command, &mut cfg, 0, &mut String::new()).unwrap();
        assert!(out.summary.contains("admissible=true"));
        assert!(out.summary.contains("9.65685"));
        assert!(out.summary.contains("6.82843"));
    }

    #[test]
    fn config_error_exit_code() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("bad.toml");
        std::fs::write(&cfg, "[solver]\nfoo = 1\n").unwrap();
        let code = run_from_args(["scgl", "regime", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
        assert_eq!(code, 2);
    }
}

use super::window::positivity_window;
use crate::noise::{wick_tensor_from, PhysicsParams};
use crate::polyalg::binomial;
use crate::spectral::{dealias_floor, Grid, SpectralField};
use crate::{Error, Result};
use num_complex::Complex64;

/// Running terms of the `L^p` energy inequality along one trajectory.
///
/// `a_int` includes the factor `4ηa₁`; `b_int` is `∫‖v‖^{p+2m-2}_{L^{p+2m-2}}`
/// without the factor `c₁`, which the slack applies.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EnergyLedger {
    pub p: f64,
    pub eta: f64,
    pub c1: f64,
    /// Whether `p` lies inside the positivity window.
    pub admissible_p: bool,
    pub times: Vec<f64>,
    pub lp: Vec<f64>,
    pub a_int: Vec<f64>,
    pub b_int: Vec<f64>,
    pub f0_int: Vec<f64>,
    /// `F0_int - [(‖v(t)‖_p^p - ‖v(0)‖_p^p)/p + c₁ B_int + A_int]`.
    pub slack: Vec<f64>,
    /// Richardson estimate of the time-quadrature error in the final slack.
    pub quadrature_error: f64,
}

impl EnergyLedger {
    pub const CSV_HEADER: &'static str = "t,Lp,A_int,B_int,F0_int,slack";

    /// Magnitude of the right-hand side at the final time.
    pub fn rhs_scale(&self) -> f64 {
        self.f0_int.last().copied().unwrap_or(0.0)
    }

    /// Most negative slack divided by the right-hand-side scale.
    pub fn min_relative_slack(&self) -> f64 {
        let scale = self.rhs_scale().max(f64::MIN_POSITIVE);
        self.slack.iter().fold(f64::INFINITY, |a, &s| a.min(s)) / scale
    }

    pub fn lp_non_increasing(&self, tol: f64) -> bool {
        self.lp.windows(2).all(|w| w[1] <= w[0] * (1.0 + tol) + tol)
    }

    pub fn csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for i in 0..self.times.len() {
            s.push_str(&format!(
                "{:.10},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n",
                self.times[i], self.lp[i], self.a_int[i], self.b_int[i], self.f0_int[i], self.slack[i]
            ));
        }
        s
    }
}

struct NodeTerms {
    lp_pow: f64,
    a: f64,
    b: f64,
    f0: f64,
}

fn node_terms(v: &SpectralField, psi: &SpectralField, sigma: f64, p: f64, eta: f64, params: &PhysicsParams, grid: usize) -> NodeTerms {
    let m = params.m;
    let tensor = wick_tensor_from(&psi.with_grid_size(grid), sigma, m);
    let g = tensor.grid_size();
    let vg = Grid::from_field(v, g);
    let (dx, dy) = v.gradient();
    let (gx, gy) = (Grid::from_field(&dx, g), Grid::from_field(&dy, g));
    let cell = crate::spectral::TORUS_AREA / (g * g) as f64;
    let c = Complex64::new(params.c1, params.c2);
    let (mut lp_pow, mut a, mut b) = (0.0, 0.0, 0.0);
    let mut f0 = Complex64::new(0.0, 0.0);
    for idx in 0..g * g {
        let z = vg.values()[idx];
        let r = z.norm();
        let grad2 = gx.values()[idx].norm_sqr() + gy.values()[idx].norm_sqr();
        lp_pow += r.powf(p);
        a += r.powf(p - 2.0) * grad2;
        b += r.powf(p + 2.0 * m as f64 - 2.0);
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..=m {
            for j in 0..m {
                if i == m && j == m - 1 {
                    continue;
                }
                s += z.powu(i as u32) * z.conj().powu(j as u32) * tensor.grid(m - i, m - 1 - j).values()[idx] * (binomial(m, i) * binomial(m - 1, j));
            }
        }
        f0 += c * s * (z * r.powf(p - 2.0)).conj();
    }
    NodeTerms { lp_pow: lp_pow * cell, a: 4.0 * eta * params.a1 * a * cell, b: b * cell, f0: f0.norm() * cell }
}

fn cumulative_trapezoid(times: &[f64], ys: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; ys.len()];
    for k in 1..ys.len() {
        out[k] = out[k - 1] + 0.5 * (times[k] - times[k - 1]) * (ys[k] + ys[k - 1]);
    }
    out
}

/// Evaluates every term of the `L^p` inequality at each node of a `v`
/// trajectory with stochastic data `psis` (Wick-ordered at `sigma`).
pub fn monitor_energy(
    times: &[f64],
    vs: &[SpectralField],
    psis: &[SpectralField],
    sigma: f64,
    p: f64,
    eta: f64,
    params: &PhysicsParams,
) -> Result<EnergyLedger> {
    if !(p > 2.0) || !(eta > 0.0) {
        return Err(Error::Domain(format!("need p > 2 and eta > 0, got p = {p}, eta = {eta}")));
    }
    if times.len() != vs.len() || vs.len() != psis.len() || vs.is_empty() {
        return Err(Error::config("times, v and Ψ must be non-empty and of equal length"));
    }
    let n = vs[0].n_max();
    let grid = dealias_floor(2 * params.m + p.ceil() as usize, n);
    let terms: Vec<NodeTerms> = crate::rng::par_map(vs.len(), |k| node_terms(&vs[k], &psis[k], sigma, p, eta, params, grid));
    let lp_pow: Vec<f64> = terms.iter().map(|t| t.lp_pow).collect();
    let a_int = cumulative_trapezoid(times, &terms.iter().map(|t| t.a).collect::<Vec<_>>());
    let b_int = cumulative_trapezoid(times, &terms.iter().map(|t| t.b).collect::<Vec<_>>());
    let f0_int = cumulative_trapezoid(times, &terms.iter().map(|t| t.f0).collect::<Vec<_>>());
    let slack: Vec<f64> = (0..times.len())
        .map(|k| f0_int[k] - ((lp_pow[k] - lp_pow[0]) / p + params.c1 * b_int[k] + a_int[k]))
        .collect();

    // coarse trapezoid on every other node for a Richardson error estimate
    let last = times.len() - 1;
    let quadrature_error = if last >= 2 && last % 2 == 0 {
        let idx: Vec<usize> = (0..=last).step_by(2).collect();
        let coarse = |ys: &dyn Fn(usize) -> f64| {
            let ts: Vec<f64> = idx.iter().map(|&i| times[i]).collect();
            let vals: Vec<f64> = idx.iter().map(|&i| ys(i)).collect();
            *cumulative_trapezoid(&ts, &vals).last().unwrap()
        };
        let ca = coarse(&|i| terms[i].a);
        let cb = coarse(&|i| terms[i].b);
        let cf = coarse(&|i| terms[i].f0);
        ((a_int[last] - ca).abs() + params.c1.abs() * (b_int[last] - cb).abs() + (f0_int[last] - cf).abs()) / 3.0
    } else {
        f64::NAN
    };

    Ok(EnergyLedger {
        p,
        eta,
        c1: params.c1,
        admissible_p: positivity_window(params, eta).contains(p),
        times: times.to_vec(),
        lp: lp_pow.iter().map(|x| x.powf(1.0 / p)).collect(),
        a_int,
        b_int,
        f0_int,
        slack,
        quadrature_error,
    })
}

/// Minimal affine majorant `‖v(t₀)‖_{L^p} + Ct` of an `L^p` history that
/// starts at `t₀ = times[0]`, with `t` measured from 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthReport {
    pub c: f64,
    pub t0: f64,
    pub admissible_p: bool,
}

pub fn lp_growth_bound(times: &[f64], lp: &[f64], params: &PhysicsParams, p: f64) -> GrowthReport {
    let (t0, l0) = (times[0], lp[0]);
    let c = times
        .iter()
        .zip(lp)
        .skip(1)
        .map(|(&t, &l)| (l - l0) / t)
        .fold(0.0, f64::max);
    GrowthReport { c, t0, admissible_p: positivity_window(params, 0.0).contains(p) }
}

/// Largest pointwise residuals of the three algebraic identities used to
/// rewrite the dissipation, with `∇` applied spectrally:
/// `v²(∇v̄)² + v̄²(∇v)² = (v∇v̄ - v̄∇v)² + 2|v|²|∇v|²`,
/// `∇|v|² = v̄∇v + v∇v̄`, and `4|v|²|∇v|² = (∇|v|²)² - (v∇v̄ - v̄∇v)²`.
pub fn identity_residuals(v: &SpectralField) -> [f64; 3] {
    let n = v.n_max();
    let g = dealias_floor(3, n);
    let vg = Grid::from_field(v, g);
    let (dx, dy) = v.gradient();
    let (gx, gy) = (Grid::from_field(&dx, g), Grid::from_field(&dy, g));
    let mod2 = vg.map(|z| Complex64::new(z.norm_sqr(), 0.0)).to_field(2 * n, g);
    let (mx, my) = mod2.gradient();
    let (hx, hy) = (Grid::from_field(&mx, g), Grid::from_field(&my, g));
    let mut res = [0.0f64; 3];
    for i in 0..g * g {
        let z = vg.values()[i];
        let d = [gx.values()[i], gy.values()[i]];
        let h = [hx.values()[i].re, hy.values()[i].re];
        let dot = |a: [Complex64; 2], b: [Complex64; 2]| a[0] * b[0] + a[1] * b[1];
        let dc = [d[0].conj(), d[1].conj()];
        let w = [z * dc[0] - z.conj() * d[0], z * dc[1] - z.conj() * d[1]];
        let grad2 = d[0].norm_sqr() + d[1].norm_sqr();
        let lhs1 = z * z * dot(dc, dc) + z.conj() * z.conj() * dot(d, d);
        let rhs1 = dot(w, w) + 2.0 * z.norm_sqr() * grad2;
        let scale = 1.0 + z.norm_sqr() * grad2;
        res[0] = res[0].max((lhs1 - rhs1).norm() / scale);
        for k in 0..2 {
            let direct = z.conj() * d[k] + z * dc[k];
            res[1] = res[1].max((direct - h[k]).norm() / (1.0 + z.norm() * d[k].norm()));
        }
        let h2 = h[0] * h[0] + h[1] * h[1];
        res[2] = res[2].max((4.0 * z.norm_sqr() * grad2 - (h2 - dot(w, w))).norm() / scale);
    }
    res
}

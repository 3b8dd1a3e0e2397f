use crate::noise::PhysicsParams;

/// `A_{p,η}(f, g) = (1/4 - η)a₁f² + ((p-2)/4)a₂fg + ((p-1)/4 - η)a₁g²`.
pub fn quadratic_form(p: f64, eta: f64, params: &PhysicsParams, f: f64, g: f64) -> f64 {
    let [[a, b], [_, d]] = form_matrix(p, eta, params);
    a * f * f + 2.0 * b * f * g + d * g * g
}

/// Symmetric matrix of `A_{p,η}`.
pub fn form_matrix(p: f64, eta: f64, params: &PhysicsParams) -> [[f64; 2]; 2] {
    let a = (0.25 - eta) * params.a1;
    let b = (p - 2.0) * params.a2 / 8.0;
    let d = ((p - 1.0) / 4.0 - eta) * params.a1;
    [[a, b], [b, d]]
}

/// Smallest eigenvalue of the form matrix.
pub fn min_eigenvalue(p: f64, eta: f64, params: &PhysicsParams) -> f64 {
    let [[a, b], [_, d]] = form_matrix(p, eta, params);
    0.5 * (a + d) - (0.25 * (a - d) * (a - d) + b * b).sqrt()
}

/// Closed-form upper endpoint `2 + 2(r² + 2r√(1 + r²))`, kept for comparison
/// with the matrix-derived one.
pub fn stated_bound(r: f64) -> f64 {
    2.0 + 2.0 * (r * r + 2.0 * r * (1.0 + r * r).sqrt())
}

/// Upper endpoint of the determinant condition at `η = 0`,
/// `2 + 2ρ(ρ + √(1 + ρ²))` with `ρ = |a₁/a₂|`.
pub fn matrix_bound(rho: f64) -> f64 {
    2.0 + 2.0 * rho * (rho + (1.0 + rho * rho).sqrt())
}

/// Open interval of `p > 2` on which `A_{p,η}` is positive semidefinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub p_min: f64,
    /// From the matrix itself (convention-free); `∞` when `a₂ = 0`.
    pub p_max: f64,
    pub eta: f64,
    /// `|a₁/a₂|`.
    pub r_a1_over_a2: f64,
    /// `|a₂/a₁|`.
    pub r_a2_over_a1: f64,
    /// `2 + 2(r² + 2r√(1+r²))` evaluated with `r = |a₁/a₂|`.
    pub p_max_stated: f64,
    /// The same expression evaluated with `r = |a₂/a₁|`.
    pub p_max_stated_alt: f64,
}

impl Window {
    pub fn contains(&self, p: f64) -> bool {
        p > self.p_min && p < self.p_max
    }
}

pub fn positivity_window(params: &PhysicsParams, eta: f64) -> Window {
    let r1 = params.r_a1_over_a2();
    let r2 = params.r_a2_over_a1();
    let p_max = if params.a2 == 0.0 {
        f64::INFINITY
    } else {
        // det ≥ 0 ⟺ a₂² q² - 16α q - 16α(1 - 4η) ≤ 0 with q = p - 2, α = (1/4 - η)a₁²
        let alpha = (0.25 - eta) * params.a1 * params.a1;
        let a2s = params.a2 * params.a2;
        if alpha <= 0.0 {
            2.0
        } else {
            let disc = 256.0 * alpha * alpha + 64.0 * a2s * alpha * (1.0 - 4.0 * eta);
            2.0 + (16.0 * alpha + disc.sqrt()) / (2.0 * a2s)
        }
    };
    let stated = |r: f64| if r.is_finite() { stated_bound(r) } else { f64::INFINITY };
    Window {
        p_min: 2.0,
        p_max,
        eta,
        r_a1_over_a2: r1,
        r_a2_over_a1: r2,
        p_max_stated: stated(r1),
        p_max_stated_alt: stated(r2),
    }
}

/// `η = 1e-4 · min(1, p_max - p)`, floored so that it stays positive.
pub fn default_eta(params: &PhysicsParams, p: f64) -> f64 {
    let slack = positivity_window(params, 0.0).p_max - p;
    1e-4 * slack.clamp(1e-6, 1.0)
}

/// Global well-posedness classification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    /// `p_max - (2m - 1)` from the matrix window.
    pub margin: f64,
    pub degree: usize,
    pub c1_positive: bool,
    pub window: Window,
    /// Verdict and margin against the closed-form bound with `r = |a₁/a₂|`.
    pub stated_admissible: bool,
    pub stated_margin: f64,
}

pub fn gwp_admissible(params: &PhysicsParams) -> Admissibility {
    let window = positivity_window(params, 0.0);
    let degree = 2 * params.m - 1;
    let margin = window.p_max - degree as f64;
    let stated_margin = window.p_max_stated - degree as f64;
    let c1_positive = params.c1 > 0.0;
    Admissibility {
        admissible: c1_positive && margin > 0.0,
        margin,
        degree,
        c1_positive,
        window,
        stated_admissible: c1_positive && stated_margin > 0.0,
        stated_margin,
    }
}

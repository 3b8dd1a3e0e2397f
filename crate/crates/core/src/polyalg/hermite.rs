use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Degree and variance of the generalized Hermite polynomial `H_k(x; σ)`.
/// The variance may be negative: `H_k(x; -σ)` appears in the imaginary
/// argument identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermiteSpec {
    pub k: usize,
    pub sigma: f64,
}

/// `H_k(x; σ)` via `H_{k+1} = x H_k - k σ H_{k-1}`, `H_0 = 1`, `H_1 = x`.
pub fn eval_hermite(spec: &HermiteSpec, x: f64) -> f64 {
    let mut prev = 1.0;
    if spec.k == 0 {
        return prev;
    }
    let mut cur = x;
    for n in 1..spec.k {
        let next = x * cur - n as f64 * spec.sigma * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Integer coefficients of `H_k(x; σ)` keyed by `(deg_x, deg_σ)`.
pub fn hermite_poly_symbolic(k: usize) -> BTreeMap<(u32, u32), BigInt> {
    let mut prev: BTreeMap<(u32, u32), BigInt> = BTreeMap::from([((0, 0), BigInt::one())]);
    if k == 0 {
        return prev;
    }
    let mut cur: BTreeMap<(u32, u32), BigInt> = BTreeMap::from([((1, 0), BigInt::one())]);
    for n in 1..k {
        let mut next: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        for (&(a, b), c) in &cur {
            *next.entry((a + 1, b)).or_default() += c;
        }
        for (&(a, b), c) in &prev {
            *next.entry((a, b + 1)).or_default() -= c * BigInt::from(n);
        }
        next.retain(|_, c| !c.is_zero());
        prev = cur;
        cur = next;
    }
    cur
}

/// Outcome of the three Hermite identity checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermiteCheck {
    /// `∫ H_k(x;σ) e^{ux - x²/2} dx = √(2π) H_k(u; σ-1) e^{u²/2}` by quadrature.
    pub integral: bool,
    /// `i^k H_k(x; -σ) = H_k(ix; σ)` as an exact coefficient identity.
    pub imaginary: bool,
    /// `H_k(2x; σ+β) = Σ_j binom(k,j) H_j(x; σ) H_{k-j}(x; β)` exactly.
    pub additivity: bool,
    pub integral_rel_error: f64,
}

impl HermiteCheck {
    pub fn passed(&self) -> bool {
        self.integral && self.imaginary && self.additivity
    }
}

// i^n as a Gaussian integer (re, im).
fn i_pow(n: u32) -> (i64, i64) {
    match n % 4 {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    }
}

fn imaginary_identity_exact(k: usize) -> bool {
    let h = hermite_poly_symbolic(k);
    h.iter().all(|(&(a, b), c)| {
        let (lr, li) = i_pow(k as u32);
        let sign = if b % 2 == 0 { 1 } else { -1 };
        let (rr, ri) = i_pow(a);
        (c * lr * sign, c * li * sign) == (c * rr, c * ri)
    })
}

fn binomial_big(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn additivity_exact(k: usize) -> bool {
    // LHS: H_k(2x; s + β)
    let mut lhs: BTreeMap<(u32, u32, u32), BigInt> = BTreeMap::new();
    for (&(a, b), c) in &hermite_poly_symbolic(k) {
        let c = c << a;
        for split in 0..=b {
            *lhs.entry((a, split, b - split)).or_default() += &c * binomial_big(b as usize, split as usize);
        }
    }
    let mut rhs: BTreeMap<(u32, u32, u32), BigInt> = BTreeMap::new();
    for j in 0..=k {
        let w = binomial_big(k, j);
        let hs = hermite_poly_symbolic(j);
        let hb = hermite_poly_symbolic(k - j);
        for (&(a1, b1), c1) in &hs {
            for (&(a2, b2), c2) in &hb {
                *rhs.entry((a1 + a2, b1, b2)).or_default() += &w * c1 * c2;
            }
        }
    }
    lhs.retain(|_, c| !c.is_zero());
    rhs.retain(|_, c| !c.is_zero());
    lhs == rhs
}

fn gaussian_moment_integral(k: usize, sigma: f64, u: f64, step: f64) -> f64 {
    // Trapezoid rule on a window centred on the Gaussian peak at x = u; the
    // integrand is analytic and decays like e^{-(x-u)²/2}, so the rule
    // converges geometrically in 1/step.
    let half_width = 40.0 + (k as f64).sqrt() * 4.0;
    let n = (2.0 * half_width / step).ceil() as usize;
    let h = 2.0 * half_width / n as f64;
    let spec = HermiteSpec { k, sigma };
    let f = |x: f64| eval_hermite(&spec, x) * (u * x - 0.5 * x * x - 0.5 * u * u).exp();
    let a = u - half_width;
    let interior: f64 = (1..n).map(|i| f(a + i as f64 * h)).sum();
    h * (interior + 0.5 * (f(a) + f(a + n as f64 * h)))
}

/// Runs the three Hermite identity checks. The quadrature identity is
/// compared with the `e^{u²/2}` factor divided out on both sides.
pub fn verify_hermite_identities(k: usize, sigma: f64, beta: f64, x: f64, u: f64) -> Result<HermiteCheck> {
    let coarse = gaussian_moment_integral(k, sigma, u, 0.1);
    let fine = gaussian_moment_integral(k, sigma, u, 0.05);
    let target = (2.0 * std::f64::consts::PI).sqrt() * eval_hermite(&HermiteSpec { k, sigma: sigma - 1.0 }, u);
    let scale = 1.0 + target.abs();
    if !((fine - coarse).abs() <= 1e-11 * scale) {
        return Err(Error::Numeric(format!(
            "Hermite moment quadrature did not converge (k = {k}, u = {u}): {coarse} vs {fine}"
        )));
    }
    let integral_rel_error = (fine - target).abs() / scale;

    // numeric spot checks at the supplied point accompany the exact identities
    let h = |k: usize, s: f64, x: f64| eval_hermite(&HermiteSpec { k, sigma: s }, x);
    let spot_add: f64 = (0..=k)
        .map(|j| super::binomial(k, j) * h(j, sigma, x) * h(k - j, beta, x))
        .sum();
    let add_scale = 1.0 + spot_add.abs();
    let additivity = additivity_exact(k) && (h(k, sigma + beta, 2.0 * x) - spot_add).abs() <= 1e-10 * add_scale;

    Ok(HermiteCheck {
        integral: integral_rel_error < 1e-8,
        imaginary: imaginary_identity_exact(k),
        additivity,
        integral_rel_error,
    })
}

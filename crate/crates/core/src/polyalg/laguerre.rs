use super::bipoly::BiPoly;
use super::exact::{pow_rat, rat_from_f64, RatPoly};
use super::{binomial, factorial};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Degree, superscript and variance of a σ-scaled generalized Laguerre
/// polynomial `L_k^{(ℓ)}(x; σ) = σ^k L_k^{(ℓ)}(x / σ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaguerreSpec {
    pub k: usize,
    pub ell: i64,
    pub sigma: f64,
}

impl LaguerreSpec {
    pub fn new(k: usize, ell: i64, sigma: f64) -> Result<Self> {
        let spec = Self { k, ell, sigma };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::domain(format!("Laguerre sigma must be positive, got {}", self.sigma)));
        }
        if self.ell < 0 && (self.k as i64) + self.ell < 0 {
            return Err(Error::domain(format!(
                "negative superscript needs k + ell >= 0 (k = {}, ell = {})",
                self.k, self.ell
            )));
        }
        Ok(())
    }
}

/// Unscaled `L_k^{(ℓ)}(x)` by forward recursion. The recursion is a
/// polynomial identity in `ℓ`, so negative superscripts are handled by the
/// same seed `L_0 = 1`, `L_1 = 1 + ℓ - x`.
pub fn laguerre(k: usize, ell: f64, x: f64) -> f64 {
    laguerre_scaled(k, ell, 1.0, x)
}

/// `L_k^{(ℓ)}(x; σ)` without validation; `ℓ` may be any real.
pub fn laguerre_scaled(k: usize, ell: f64, sigma: f64, x: f64) -> f64 {
    // σ-scaled recursion: L_{n+1} = (((2n+1+ℓ)σ - x) L_n - (n+ℓ) σ² L_{n-1}) / (n+1)
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = (1.0 + ell) * sigma - x;
    for n in 1..k {
        let nf = n as f64;
        let next = (((2.0 * nf + 1.0 + ell) * sigma - x) * cur - (nf + ell) * sigma * sigma * prev)
            / (nf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_k^{(ℓ)}(x; σ)` in double precision.
pub fn eval_laguerre(spec: &LaguerreSpec, x: f64) -> Result<f64> {
    spec.validate()?;
    Ok(laguerre_scaled(spec.k, spec.ell as f64, spec.sigma, x))
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact coefficients of the unscaled `L_k^{(ℓ)}` built from the recursion.
pub fn laguerre_poly(k: usize, ell: i64) -> RatPoly {
    let mut prev = RatPoly::constant(BigRational::one());
    if k == 0 {
        return prev;
    }
    let mut cur = RatPoly::from_ints(&[1 + ell, -1]);
    for n in 1..k {
        let n_i = n as i64;
        let lin = RatPoly::from_ints(&[2 * n_i + 1 + ell, -1]);
        let next = (&(&lin * &cur) - &prev.scale(&int(n_i + ell))).scale(&(BigRational::one() / int(n_i + 1)));
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_k^{(ℓ)}(x; σ)` in exact rational arithmetic.
pub fn eval_laguerre_exact(k: usize, ell: i64, sigma: &BigRational, x: &BigRational) -> Result<BigRational> {
    if sigma <= &BigRational::zero() {
        return Err(Error::domain("Laguerre sigma must be positive"));
    }
    if ell < 0 && (k as i64) + ell < 0 {
        return Err(Error::domain("negative superscript needs k + ell >= 0"));
    }
    Ok(laguerre_poly(k, ell).sigma_scaled(k, sigma).eval(x))
}

/// Checks both classical three-point rules and the combined rule
/// `(n+ℓ) L_n^{(ℓ-1)} = ℓ L_n^{(ℓ)} - x L_{n-1}^{(ℓ+1)}` at `x` in double precision.
pub fn verify_three_point(k: usize, ell: i64, x: f64) -> bool {
    if k == 0 {
        return false;
    }
    let l = |n: usize, a: i64| laguerre(n, a as f64, x);
    let nf = k as f64;
    let ef = ell as f64;
    let residuals = [
        ((nf + ef) * l(k - 1, ell), nf * l(k, ell) + x * l(k - 1, ell + 1)),
        (l(k, ell) - l(k - 1, ell), l(k, ell - 1)),
        ((nf + ef) * l(k, ell - 1), ef * l(k, ell) - x * l(k - 1, ell + 1)),
    ];
    residuals.iter().all(|&(lhs, rhs)| {
        let scale = 1.0 + lhs.abs().max(rhs.abs());
        (lhs - rhs).abs() <= 1e-12 * scale
    })
}

/// Exact-arithmetic version of [`verify_three_point`]: the rules must hold
/// with zero residual.
pub fn verify_three_point_exact(k: usize, ell: i64, x: &BigRational) -> bool {
    if k == 0 {
        return false;
    }
    let l = |n: usize, a: i64| laguerre_poly(n, a).eval(x);
    let n = int(k as i64);
    let e = int(ell);
    let r1 = (&n + &e) * l(k - 1, ell) == &n * l(k, ell) + x * l(k - 1, ell + 1);
    let r2 = l(k, ell) - l(k - 1, ell) == l(k, ell - 1);
    let r3 = (&n + &e) * l(k, ell - 1) == &e * l(k, ell) - x * l(k - 1, ell + 1);
    r1 && r2 && r3
}

/// Left-hand side of the sum formula,
/// `(-1)^m m! L_m^{(ℓ)}(|x+y|²; σ) (x+y)^ℓ`.
pub fn laguerre_sum_lhs(m: usize, ell: usize, sigma: f64, x: Complex64, y: Complex64) -> Complex64 {
    let z = x + y;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let lag = laguerre_scaled(m, ell as f64, sigma, z.norm_sqr());
    z.powu(ell as u32) * (sign * factorial(m) * lag)
}

/// One coefficient `P_{i,j}^{m,ℓ,σ}(y, ȳ)` of the sum formula.
fn p_branch(m: usize, ell: usize, i: usize, j: usize, sigma: f64, y: Complex64) -> Complex64 {
    let r = y.norm_sqr();
    if ell + j >= i {
        let deg = m - j;
        let sup = ell + j - i;
        let sign = if deg % 2 == 0 { 1.0 } else { -1.0 };
        y.powu(sup as u32) * (sign * factorial(deg) * laguerre_scaled(deg, sup as f64, sigma, r))
    } else {
        let deg = m + ell - i;
        let sup = i - j - ell;
        let sign = if deg % 2 == 0 { 1.0 } else { -1.0 };
        y.conj().powu(sup as u32) * (sign * factorial(deg) * laguerre_scaled(deg, sup as f64, sigma, r))
    }
}

/// Coefficient family `binom(m+ℓ, i) binom(m, j) P_{i,j}^{m,ℓ,σ}(y, ȳ)` of the
/// Laguerre sum formula, as a polynomial in `(x, x̄)`. Its value at `x`
/// reproduces [`laguerre_sum_lhs`] identically in `x`.
pub fn laguerre_sum_coeffs(m: usize, ell: usize, sigma: f64, y: Complex64) -> Result<BiPoly> {
    if m == 0 {
        return Err(Error::domain("sum formula requires m >= 1"));
    }
    if !(sigma > 0.0) {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    let mut out = BiPoly::zero();
    for i in 0..=m + ell {
        for j in 0..=m {
            let c = p_branch(m, ell, i, j, sigma, y) * (binomial(m + ell, i) * binomial(m, j));
            out.add_term(i as u32, j as u32, c);
        }
    }
    Ok(out)
}

/// Largest relative error of the sum formula over `trials` random
/// `(x, y, σ)` with `|x|, |y| ≤ 2` and `σ ∈ [0.1, 3]`.
pub fn sum_formula_max_error(m: usize, ell: usize, trials: usize, seed: u64) -> Result<f64> {
    use rand::Rng;
    let mut rng = crate::rng::stream(seed, ((m as u64) << 8) | ell as u64);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let mut c = || Complex64::from_polar(rng.random_range(0.0..2.0), rng.random_range(0.0..std::f64::consts::TAU));
        let (x, y) = (c(), c());
        let sigma = rng.random_range(0.1..3.0);
        let lhs = laguerre_sum_lhs(m, ell, sigma, x, y);
        let rhs = super::expand_bipoly(&laguerre_sum_coeffs(m, ell, sigma, y)?, x);
        worst = worst.max((lhs - rhs).norm() / lhs.norm().max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

/// `L_k^{(ℓ)}(x;σ) - σ^k L_k^{(ℓ)}(x/σ)` in exact arithmetic at the
/// rationals nearest the float arguments.
pub fn scaling_residual_exact(k: usize, ell: i64, sigma: f64, x: f64) -> BigRational {
    let s = rat_from_f64(sigma);
    let xr = rat_from_f64(x);
    let lhs = laguerre_poly(k, ell).sigma_scaled(k, &s).eval(&xr);
    let rhs = pow_rat(&s, k as i64) * laguerre_poly(k, ell).eval(&(&xr / &s));
    lhs - rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(k: usize, ell: i64, sigma: f64) -> LaguerreSpec {
        LaguerreSpec::new(k, ell, sigma).unwrap()
    }

    #[test]
    fn listed_values() {
        assert_eq!(eval_laguerre(&spec(0, 5, 2.0), 3.7).unwrap(), 1.0);
        assert_eq!(eval_laguerre(&spec(1, 1, 1.0), 2.0).unwrap(), 0.0);
        assert!((eval_laguerre(&spec(2, 0, 1.0), 1.0).unwrap() + 0.5).abs() < 1e-15);
        // sigma-scaled: 4 * L_2(1) = -2
        assert!((eval_laguerre(&spec(2, 0, 2.0), 2.0).unwrap() + 2.0).abs() < 1e-15);
    }

    #[test]
    fn third_table_row_is_degree_two() {
        // The third listed row is L_2: x^2/2 - (ℓ+2)x + (ℓ+1)(ℓ+2)/2
        for ell in 0..4 {
            let e = ell as f64;
            for &x in &[0.0, 0.7, 2.5] {
                let table = 0.5 * x * x - (e + 2.0) * x + (e + 1.0) * (e + 2.0) / 2.0;
                assert!((laguerre(2, e, x) - table).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn negative_superscript_domain() {
        assert!(LaguerreSpec::new(2, -3, 1.0).is_err());
        assert!(LaguerreSpec::new(2, -2, 1.0).is_ok());
        assert!(LaguerreSpec::new(2, 0, 0.0).is_err());
        // L_1^{(-1)}(x) = -x
        assert_eq!(laguerre(1, -1.0, 3.0), -3.0);
    }

    #[test]
    fn three_point_rules() {
        assert!(verify_three_point(1, 1, 0.5));
        assert!(verify_three_point(3, 2, 4.25));
        assert!(verify_three_point(5, 0, -1.0));
        let x = BigRational::new(17.into(), 4.into());
        assert!(verify_three_point_exact(3, 2, &x));
        assert!(verify_three_point_exact(5, 0, &int(-1)));
    }

    #[test]
    fn exact_scaling_has_zero_residual() {
        for k in 0..8 {
            for ell in 0..4 {
                assert!(scaling_residual_exact(k, ell, 1.75, 0.3125).is_zero());
            }
        }
    }

    #[test]
    fn sum_formula_small_cases() {
        let c = laguerre_sum_coeffs(1, 0, 1.0, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(c.get(0, 0), Complex64::new(-1.0, 0.0));
        assert_eq!(c.get(1, 1), Complex64::new(1.0, 0.0));
        assert_eq!(c.len(), 2);

        let c = laguerre_sum_coeffs(1, 1, 1.0, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(c.get(2, 1), Complex64::new(1.0, 0.0));
        assert_eq!(c.get(1, 0), Complex64::new(-2.0, 0.0));
        assert_eq!(c.len(), 2);

        assert!(laguerre_sum_coeffs(0, 1, 1.0, Complex64::new(1.0, 0.0)).is_err());
    }
}

use super::exact::rat_to_f64;
use super::factorial;
use super::laguerre::laguerre_poly;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::ops::{Add, Mul};

/// Polynomial in `x` and `x̄` with complex coefficients, keyed by bidegree
/// `(i, j)` for the monomial `x^i x̄^j`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Complex64>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn monomial(i: u32, j: u32, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Complex64) {
        let entry = self.terms.entry((i, j)).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.remove(&(i, j));
        }
    }

    pub fn get(&self, i: u32, j: u32) -> Complex64 {
        self.terms.get(&(i, j)).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), Complex64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    /// Largest `(i, j)` bidegree present, compared componentwise.
    pub fn bidegree(&self) -> (u32, u32) {
        self.terms
            .keys()
            .fold((0, 0), |(a, b), &(i, j)| (a.max(i), b.max(j)))
    }

    pub fn powu(&self, n: u32) -> BiPoly {
        (0..n).fold(BiPoly::constant(Complex64::new(1.0, 0.0)), |acc, _| &acc * self)
    }

    /// Drops coefficients whose modulus is below `tol`.
    pub fn pruned(&self, tol: f64) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().filter(|(_, c)| c.norm() > tol).map(|(&k, &v)| (k, v)).collect(),
        }
    }

    /// Largest coefficient-wise distance to `other`.
    pub fn max_abs_diff(&self, other: &BiPoly) -> f64 {
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|&(i, j)| (self.get(i, j) - other.get(i, j)).norm())
            .fold(0.0, f64::max)
    }

    /// Symbolic expansion of `(-1)^m m! L_m^{(ℓ)}(|x+y|²; σ) (x+y)^ℓ` in
    /// `(x, x̄)` by polynomial arithmetic on `|x+y|² = (x+y)(x̄+ȳ)`.
    pub fn laguerre_lhs(m: usize, ell: usize, sigma: f64, y: Complex64) -> BiPoly {
        let one = Complex64::new(1.0, 0.0);
        let mut shift = BiPoly::monomial(1, 0, one);
        shift.add_term(0, 0, y);
        let mut shift_bar = BiPoly::monomial(0, 1, one);
        shift_bar.add_term(0, 0, y.conj());
        let modsq = &shift * &shift_bar;

        let coeffs = laguerre_poly(m, ell as i64);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let mut lag = BiPoly::zero();
        let mut power = BiPoly::constant(one);
        for (p, c) in coeffs.coeffs().iter().enumerate() {
            let weight = rat_to_f64(c) * sigma.powi((m - p) as i32) * sign * factorial(m);
            lag = &lag + &(&power * &BiPoly::constant(Complex64::new(weight, 0.0)));
            power = &power * &modsq;
        }
        &lag * &shift.powu(ell as u32)
    }
}

/// Evaluates `Σ c_{ij} x^i x̄^j`.
pub fn expand_bipoly(p: &BiPoly, x: Complex64) -> Complex64 {
    let xb = x.conj();
    p.iter()
        .map(|((i, j), c)| c * x.powu(i) * xb.powu(j))
        .sum()
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for ((i, j), c) in rhs.iter() {
            out.add_term(i, j, c);
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((i1, j1), a) in self.iter() {
            for ((i2, j2), b) in rhs.iter() {
                out.add_term(i1 + i2, j1 + j2, a * b);
            }
        }
        out
    }
}

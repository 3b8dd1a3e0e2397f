use super::fft::Grid;
use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

/// Fourier coefficients `f̂(n)` of a trigonometric polynomial on the torus
/// `(ℝ/2πℤ)²`, stored on the square box `|n₁|, |n₂| ≤ N` in lexicographic
/// order (n₁ outer, n₂ inner). `grid_size` is the physical grid used when
/// the field is transformed.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    n_max: usize,
    grid_size: usize,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(n_max: usize, grid_size: usize) -> Self {
        let side = 2 * n_max + 1;
        assert!(grid_size >= side, "grid size {grid_size} cannot resolve band {n_max}");
        Self { n_max, grid_size, coeffs: vec![Complex64::new(0.0, 0.0); side * side] }
    }

    pub fn from_coeffs(n_max: usize, grid_size: usize, coeffs: Vec<Complex64>) -> Self {
        let side = 2 * n_max + 1;
        assert_eq!(coeffs.len(), side * side, "coefficient count does not match band {n_max}");
        assert!(grid_size >= side, "grid size {grid_size} cannot resolve band {n_max}");
        Self { n_max, grid_size, coeffs }
    }

    pub fn from_fn(n_max: usize, grid_size: usize, mut f: impl FnMut(i64, i64) -> Complex64) -> Self {
        let mut out = Self::zeros(n_max, grid_size);
        let n = n_max as i64;
        let mut idx = 0;
        for n1 in -n..=n {
            for n2 in -n..=n {
                out.coeffs[idx] = f(n1, n2);
                idx += 1;
            }
        }
        out
    }

    /// `c·e^{in·x}`.
    pub fn mode(n_max: usize, grid_size: usize, n: (i64, i64), c: Complex64) -> Self {
        let mut out = Self::zeros(n_max, grid_size);
        out.set(n.0, n.1, c);
        out
    }

    pub fn constant(n_max: usize, grid_size: usize, c: Complex64) -> Self {
        Self::mode(n_max, grid_size, (0, 0), c)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn side(&self) -> usize {
        2 * self.n_max + 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn contains(&self, n1: i64, n2: i64) -> bool {
        let n = self.n_max as i64;
        n1.abs() <= n && n2.abs() <= n
    }

    pub fn index(&self, n1: i64, n2: i64) -> usize {
        let n = self.n_max as i64;
        debug_assert!(self.contains(n1, n2));
        ((n1 + n) as usize) * self.side() + (n2 + n) as usize
    }

    /// Coefficient at `n`, zero outside the stored box.
    pub fn get(&self, n1: i64, n2: i64) -> Complex64 {
        if self.contains(n1, n2) {
            self.coeffs[self.index(n1, n2)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn set(&mut self, n1: i64, n2: i64, c: Complex64) {
        let i = self.index(n1, n2);
        self.coeffs[i] = c;
    }

    /// Iterates `(n₁, n₂, f̂(n))` in storage order.
    pub fn modes(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        let n = self.n_max as i64;
        let side = self.side();
        self.coeffs.iter().enumerate().map(move |(i, &c)| ((i / side) as i64 - n, (i % side) as i64 - n, c))
    }

    /// Multiplies each coefficient by `m(n₁, n₂)`.
    pub fn apply_multiplier(&self, mut m: impl FnMut(i64, i64) -> Complex64) -> Self {
        let n = self.n_max as i64;
        let side = self.side();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c * m((i / side) as i64 - n, (i % side) as i64 - n))
            .collect();
        Self { n_max: self.n_max, grid_size: self.grid_size, coeffs }
    }

    pub fn apply_real_multiplier(&self, mut m: impl FnMut(i64, i64) -> f64) -> Self {
        self.apply_multiplier(|a, b| Complex64::new(m(a, b), 0.0))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { n_max: self.n_max, grid_size: self.grid_size, coeffs: self.coeffs.iter().map(|&c| c * s).collect() }
    }

    /// Coefficients of the pointwise conjugate: `conj(f̂(-n))`.
    pub fn conj(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        coeffs.iter_mut().for_each(|c| *c = c.conj());
        Self { n_max: self.n_max, grid_size: self.grid_size, coeffs }
    }

    /// Same coefficients on a different transform grid.
    pub fn with_grid_size(&self, grid_size: usize) -> Self {
        Self::from_coeffs(self.n_max, grid_size, self.coeffs.clone())
    }

    /// Truncates to, or zero-pads into, the box of half-width `n_max`.
    pub fn resize(&self, n_max: usize) -> Self {
        let grid_size = self.grid_size.max(2 * n_max + 1);
        Self::from_fn(n_max, grid_size, |a, b| self.get(a, b))
    }

    /// `(2π)^{-2} ∫ |f|² = Σ |f̂(n)|²`.
    pub fn mean_square(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `‖f‖_{L²}²` on the torus by Parseval.
    pub fn l2_norm_sq(&self) -> f64 {
        super::TORUS_AREA * self.mean_square()
    }

    /// Largest coefficient-wise distance; fields may have different bands.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.n_max.max(other.n_max) as i64;
        let mut worst: f64 = 0.0;
        for a in -n..=n {
            for b in -n..=n {
                worst = worst.max((self.get(a, b) - other.get(a, b)).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Physical values on this field's own grid.
    pub fn to_grid(&self) -> Grid {
        Grid::from_field(self, self.grid_size)
    }

    /// Spectral partial derivatives `(∂₁f, ∂₂f)`.
    pub fn gradient(&self) -> (Self, Self) {
        let i = Complex64::new(0.0, 1.0);
        (
            self.apply_multiplier(|a, _| i * a as f64),
            self.apply_multiplier(|_, b| i * b as f64),
        )
    }
}

fn combine(a: &SpectralField, b: &SpectralField, op: impl Fn(Complex64, Complex64) -> Complex64) -> SpectralField {
    assert_eq!(a.n_max, b.n_max, "band mismatch");
    let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| op(x, y)).collect();
    SpectralField { n_max: a.n_max, grid_size: a.grid_size.max(b.grid_size), coeffs }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        combine(self, rhs, |x, y| x + y)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        combine(self, rhs, |x, y| x - y)
    }
}

impl Mul<Complex64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: Complex64) -> SpectralField {
        self.scale(rhs)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_is_lexicographic() {
        let f = SpectralField::from_fn(2, 5, |a, b| Complex64::new(a as f64, b as f64));
        assert_eq!(f.coeffs()[0], Complex64::new(-2.0, -2.0));
        assert_eq!(f.coeffs()[1], Complex64::new(-2.0, -1.0));
        assert_eq!(f.get(1, -2), Complex64::new(1.0, -2.0));
        assert_eq!(f.get(3, 0), Complex64::new(0.0, 0.0));
        for (a, b, c) in f.modes() {
            assert_eq!(c, Complex64::new(a as f64, b as f64));
        }
    }

    #[test]
    fn conj_reflects_modes() {
        let f = SpectralField::mode(2, 5, (1, -2), Complex64::new(1.0, 2.0));
        let g = f.conj();
        assert_eq!(g.get(-1, 2), Complex64::new(1.0, -2.0));
        assert_eq!(g.get(1, -2), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn resize_pads_and_truncates() {
        let f = SpectralField::from_fn(2, 5, |a, b| Complex64::new((a * 10 + b) as f64, 0.0));
        let g = f.resize(4);
        assert_eq!(g.get(2, -1), f.get(2, -1));
        assert_eq!(g.get(3, 0), Complex64::new(0.0, 0.0));
        assert_eq!(g.resize(2).coeffs(), f.coeffs());
        assert_eq!(f.resize(1).get(1, 1), f.get(1, 1));
    }
}

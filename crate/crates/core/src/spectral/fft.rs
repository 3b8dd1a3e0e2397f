use super::field::SpectralField;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::sync::Arc;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(m: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(m)
        } else {
            p.plan_fft_forward(m)
        }
    })
}

fn transpose(data: &mut [Complex64], m: usize) {
    for i in 0..m {
        for j in (i + 1)..m {
            data.swap(i * m + j, j * m + i);
        }
    }
}

/// Unnormalized 2-D DFT of a row-major `m × m` array.
fn fft2(data: &mut [Complex64], m: usize, inverse: bool) {
    let fft = plan(m, inverse);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(data, &mut scratch);
    transpose(data, m);
    fft.process_with_scratch(data, &mut scratch);
    transpose(data, m);
}

/// Values of a field at `x = 2π(i₁, i₂)/M`, row-major in `(i₁, i₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    m: usize,
    data: Vec<Complex64>,
}

impl Grid {
    pub fn new(m: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), m * m);
        Self { m, data }
    }

    pub fn filled(m: usize, c: Complex64) -> Self {
        Self { m, data: vec![c; m * m] }
    }

    /// Synthesis `f(x) = Σ f̂(n) e^{in·x}` on an `m × m` grid. Node values
    /// are exact for any `m`; wavenumbers beyond the grid fold onto their
    /// aliases, which leaves the nodal values unchanged.
    pub fn from_field(f: &SpectralField, m: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); m * m];
        let wrap = |k: i64| k.rem_euclid(m as i64) as usize;
        for (a, b, c) in f.modes() {
            data[wrap(a) * m + wrap(b)] += c;
        }
        fft2(&mut data, m, true);
        Self { m, data }
    }

    /// Analysis restricted to the box of half-width `n_max`. Exact when the
    /// sampled function has no content at wavenumbers aliasing into the box.
    pub fn to_field(&self, n_max: usize, grid_size: usize) -> SpectralField {
        let m = self.m;
        assert!(m > 2 * n_max, "grid size {m} cannot resolve band {n_max}");
        let mut data = self.data.clone();
        fft2(&mut data, m, false);
        let norm = 1.0 / (m * m) as f64;
        let wrap = |k: i64| k.rem_euclid(m as i64) as usize;
        SpectralField::from_fn(n_max, grid_size, |a, b| data[wrap(a) * m + wrap(b)] * norm)
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[Complex64] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { m: self.m, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn zip_map(&self, other: &Grid, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.m, other.m, "grid size mismatch");
        Self { m: self.m, data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect() }
    }

    /// `‖f‖_{L^p}` on the torus by the rectangle rule; `p = ∞` is the grid maximum.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
        }
        let cell = super::TORUS_AREA / (self.m * self.m) as f64;
        let sum: f64 = self.data.iter().map(|z| z.norm().powf(p)).sum();
        (cell * sum).powf(1.0 / p)
    }

    /// `∫_{T²} f dx` by the rectangle rule.
    pub fn integral(&self) -> Complex64 {
        let cell = super::TORUS_AREA / (self.m * self.m) as f64;
        self.data.iter().sum::<Complex64>() * cell
    }
}

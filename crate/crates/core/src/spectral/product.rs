use super::fft::Grid;
use super::field::SpectralField;
use crate::{Error, Result};
use num_complex::Complex64;

fn is_5_smooth(mut m: usize) -> bool {
    for p in [2, 3, 5] {
        while m % p == 0 {
            m /= p;
        }
    }
    m == 1
}

/// Smallest `2^a 3^b 5^c ≥ (d + 1)N + 1` (and at least `2N + 1`): a grid on
/// which a degree-`d` product of band-`N` fields has no aliasing into the band.
pub fn dealias_floor(degree: usize, n_max: usize) -> usize {
    let need = ((degree + 1) * n_max + 1).max(2 * n_max + 1);
    (need..).find(|&m| is_5_smooth(m)).expect("5-smooth numbers are unbounded")
}

/// Band-`N` coefficients of `Π_k f_k` (with `f̄_k` where `conj[k]`).
pub fn dealiased_product(fields: &[&SpectralField], conj: &[bool]) -> Result<SpectralField> {
    let first = *fields.first().ok_or_else(|| Error::config("empty product"))?;
    if conj.len() != fields.len() {
        return Err(Error::config("one conjugation flag per factor is required"));
    }
    let n = first.n_max();
    if fields.iter().any(|f| f.n_max() != n) {
        return Err(Error::config("product factors must share the band N"));
    }
    let m = fields.iter().map(|f| f.grid_size()).max().unwrap_or(0);
    let need = dealias_floor(fields.len(), n);
    if m < need {
        return Err(Error::Config(format!(
            "grid size {m} is below the dealiasing floor {need} for a degree-{} product at N = {n}",
            fields.len()
        )));
    }
    let mut acc = Grid::from_field(first, m);
    if conj[0] {
        acc = acc.map(|z| z.conj());
    }
    for (f, &c) in fields.iter().zip(conj).skip(1) {
        let g = Grid::from_field(f, m);
        acc = acc.zip_map(&g, |a, b| if c { a * b.conj() } else { a * b });
    }
    Ok(acc.to_field(n, first.grid_size()))
}

/// Evaluates `op` pointwise on the grid values of `fields`, returning the
/// band-`out_n` part of the result computed on an `m × m` grid.
pub fn pointwise(
    fields: &[&SpectralField],
    m: usize,
    out_n: usize,
    op: impl Fn(&[Complex64]) -> Complex64,
) -> SpectralField {
    let grids: Vec<Grid> = fields.iter().map(|f| Grid::from_field(f, m)).collect();
    let mut vals = vec![Complex64::new(0.0, 0.0); fields.len()];
    let data = (0..m * m)
        .map(|i| {
            for (v, g) in vals.iter_mut().zip(&grids) {
                *v = g.values()[i];
            }
            op(&vals)
        })
        .collect();
    Grid::new(m, data).to_field(out_n, m)
}

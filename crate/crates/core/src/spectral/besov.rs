use super::cutoff::smoothstep;
use super::field::SpectralField;

const LP_FLAT: f64 = 1.0;
const LP_EDGE: f64 = 8.0 / 5.0;

/// Littlewood–Paley generator `φ₀`: 1 for `|ξ| ≤ 1`, 0 for `|ξ| ≥ 8/5`.
pub fn phi0(radius: f64) -> f64 {
    1.0 - smoothstep((radius - LP_FLAT) / (LP_EDGE - LP_FLAT))
}

/// Index of the highest block needed for a band-`N` field.
pub fn j_max(n_max: usize) -> usize {
    if n_max <= 1 {
        n_max
    } else {
        (usize::BITS - (n_max - 1).leading_zeros()) as usize + 1
    }
}

/// `φ_j(ξ)` at radius `|ξ|`, with block `top` absorbing everything above.
pub fn lp_multiplier(j: usize, top: usize, radius: f64) -> f64 {
    if j == 0 {
        return if top == 0 { 1.0 } else { phi0(radius) };
    }
    let below = phi0(radius / f64::powi(2.0, j as i32 - 1));
    if j == top {
        1.0 - below
    } else {
        phi0(radius / f64::powi(2.0, j as i32)) - below
    }
}

/// `δ_j f`.
pub fn lp_block(f: &SpectralField, j: usize) -> SpectralField {
    let top = j_max(f.n_max());
    f.apply_real_multiplier(|a, b| lp_multiplier(j, top, ((a * a + b * b) as f64).sqrt()))
}

/// Per-block `L^p` norms `‖δ_j f‖_{L^p}`, `j = 0..=j_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct BesovProfile {
    pub block_norms: Vec<f64>,
    pub p: f64,
    pub j_max: usize,
}

pub fn lp_blocks(f: &SpectralField, p: f64) -> BesovProfile {
    let top = j_max(f.n_max());
    let block_norms = (0..=top).map(|j| lp_block(f, j).to_grid().lp_norm(p)).collect();
    BesovProfile { block_norms, p, j_max: top }
}

/// `‖(2^{js} ‖δ_j f‖_{L^p})_j‖_{ℓ^q}`.
pub fn besov_norm(profile: &BesovProfile, s: f64, q: f64) -> f64 {
    let weighted = profile.block_norms.iter().enumerate().map(|(j, &b)| (s * j as f64).exp2() * b);
    if q.is_infinite() {
        weighted.fold(0.0, f64::max)
    } else {
        weighted.map(|w| w.powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

/// `C^s = B^s_{∞,∞}` norm.
pub fn holder_norm(f: &SpectralField, s: f64) -> f64 {
    besov_norm(&lp_blocks(f, f64::INFINITY), s, f64::INFINITY)
}

/// `‖f‖_{L^p}` on the field's grid.
pub fn lp_norm(f: &SpectralField, p: f64) -> f64 {
    f.to_grid().lp_norm(p)
}

/// `‖⟨∇⟩^s f‖_{L^p}`.
pub fn sobolev_norm(f: &SpectralField, s: f64, p: f64) -> f64 {
    f.apply_real_multiplier(|a, b| (1.0 + (a * a + b * b) as f64).powf(0.5 * s)).to_grid().lp_norm(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn block_count() {
        assert_eq!(j_max(0), 0);
        assert_eq!(j_max(1), 1);
        assert_eq!(j_max(2), 2);
        assert_eq!(j_max(3), 3);
        assert_eq!(j_max(4), 3);
        assert_eq!(j_max(5), 4);
        assert_eq!(j_max(64), 7);
    }

    #[test]
    fn partition_of_unity_on_box() {
        for n in [1usize, 3, 8, 13] {
            let top = j_max(n);
            let n = n as i64;
            for a in -n..=n {
                for b in -n..=n {
                    let r = ((a * a + b * b) as f64).sqrt();
                    let s: f64 = (0..=top).map(|j| lp_multiplier(j, top, r)).sum();
                    assert!((s - 1.0).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn single_block_mode() {
        let one = Complex64::new(1.0, 0.0);
        let f = SpectralField::mode(16, 33, (4, 0), one);
        let prof = lp_blocks(&f, f64::INFINITY);
        for (j, &b) in prof.block_norms.iter().enumerate() {
            let want = if j == 2 { 1.0 } else { 0.0 };
            assert!((b - want).abs() < 1e-12, "block {j}: {b}");
        }
        assert!((besov_norm(&prof, 0.3, f64::INFINITY) - 0.6f64.exp2()).abs() < 1e-12);
        let c = lp_blocks(&SpectralField::constant(5, 11, one), f64::INFINITY);
        assert_eq!(c.block_norms[0], 1.0);
        assert!(c.block_norms[1..].iter().all(|&b| b < 1e-15));
    }

    #[test]
    fn sobolev_single_mode() {
        let f = SpectralField::mode(4, 9, (1, 2), Complex64::new(0.0, 1.0));
        assert!((sobolev_norm(&f, 0.4, f64::INFINITY) - 6f64.powf(0.2)).abs() < 1e-12);
        assert!((sobolev_norm(&f, 0.0, 2.0) - f.l2_norm_sq().sqrt()).abs() < 1e-12);
    }
}

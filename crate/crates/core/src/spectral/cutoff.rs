use super::field::SpectralField;

/// Quintic smoothstep `t³(10 - 15t + 6t²)`, clamped to `[0, 1]`.
pub fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutoffKind {
    Smooth,
    Sharp,
}

/// Frequency cutoff `χ`. The smooth kind is radial, equal to 1 for
/// `|ξ| ≤ inner`, 0 for `|ξ| ≥ outer`, with a `C²` quintic taper between.
/// The sharp kind is the indicator of the closed unit disc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffSpec {
    pub kind: CutoffKind,
    pub inner: f64,
    pub outer: f64,
}

impl CutoffSpec {
    pub fn smooth() -> Self {
        Self { kind: CutoffKind::Smooth, inner: 0.5, outer: 1.0 }
    }

    pub fn sharp() -> Self {
        Self { kind: CutoffKind::Sharp, inner: 1.0, outer: 1.0 }
    }

    /// `χ(ξ)` at radius `|ξ|`.
    pub fn profile(&self, radius: f64) -> f64 {
        match self.kind {
            CutoffKind::Sharp => f64::from(u8::from(radius <= 1.0)),
            CutoffKind::Smooth => 1.0 - smoothstep((radius - self.inner) / (self.outer - self.inner)),
        }
    }

    /// `χ_N(n) = χ(n / N)`; for `N = 0` only the zero mode survives.
    pub fn chi(&self, n1: i64, n2: i64, n_cut: usize) -> f64 {
        if n_cut == 0 {
            return f64::from(u8::from(n1 == 0 && n2 == 0));
        }
        if self.kind == CutoffKind::Sharp {
            // integer test avoids rounding at |n| = N exactly
            let r2 = n1 * n1 + n2 * n2;
            return f64::from(u8::from(r2 <= (n_cut * n_cut) as i64));
        }
        self.profile(((n1 * n1 + n2 * n2) as f64).sqrt() / n_cut as f64)
    }
}

/// `S_N f` (smooth) or `P_N f` (sharp).
pub fn project(f: &SpectralField, cut: &CutoffSpec, n_cut: usize) -> SpectralField {
    f.apply_real_multiplier(|a, b| cut.chi(a, b, n_cut))
}

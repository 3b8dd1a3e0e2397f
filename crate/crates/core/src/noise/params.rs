use crate::{Error, Result};

/// Coefficients of `∂_t u = (a₁ + i a₂)(Δ - 1)u - (c₁ + i c₂)|u|^{2m-2}u + √(2γ) ξ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicsParams {
    pub a1: f64,
    pub a2: f64,
    pub c1: f64,
    pub c2: f64,
    pub gamma: f64,
    pub m: usize,
}

impl Default for PhysicsParams {
    fn default() -> Self {
        Self { a1: 1.0, a2: 1.0, c1: 1.0, c2: 1.0, gamma: 1.0, m: 2 }
    }
}

impl PhysicsParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.a1 > 0.0) {
            return Err(Error::Domain(format!("a1 must be positive, got {}", self.a1)));
        }
        if !(self.gamma >= 0.0) {
            return Err(Error::Domain(format!("gamma must be non-negative, got {}", self.gamma)));
        }
        if self.m < 2 {
            return Err(Error::Domain(format!("m must be at least 2, got {}", self.m)));
        }
        if ![self.a2, self.c1, self.c2].iter().all(|x| x.is_finite()) {
            return Err(Error::domain("coefficients must be finite"));
        }
        Ok(())
    }

    /// Dissipation over dispersion, `|a₁/a₂|` (infinite when `a₂ = 0`).
    pub fn r_a1_over_a2(&self) -> f64 {
        (self.a1 / self.a2).abs()
    }

    /// Dispersion over dissipation, `|a₂/a₁|`.
    pub fn r_a2_over_a1(&self) -> f64 {
        (self.a2 / self.a1).abs()
    }

    /// Gibbs coupling `c = c₁/γ`.
    pub fn coupling(&self) -> f64 {
        self.c1 / self.gamma
    }
}

//! WebAssembly bindings for the browser demo: regime classification,
//! scaled Laguerre curves and a live truncated simulation.

use scgl::energy::gwp_admissible;
use scgl::noise::{sample_stationary, NoiseState, PhysicsParams};
use scgl::polyalg::laguerre_scaled;
use scgl::rng::{split_seed, stream};
use scgl::solver::{wick_sigma, SimConfig, Stepper};
use scgl::spectral::{Grid, SpectralField};
use wasm_bindgen::prelude::*;

fn params(a1: f64, a2: f64, c1: f64, c2: f64, m: usize) -> PhysicsParams {
    PhysicsParams { a1, a2, c1, c2, gamma: 1.0, m }
}

/// Positivity window and well-posedness verdict for one parameter set.
#[wasm_bindgen]
#[derive(Clone, Copy, Debug)]
pub struct RegimeView {
    p_max: f64,
    p_max_stated: f64,
    degree: usize,
    admissible: bool,
    stated_admissible: bool,
}

#[wasm_bindgen]
impl RegimeView {
    #[wasm_bindgen(getter)]
    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    #[wasm_bindgen(getter)]
    pub fn p_max_stated(&self) -> f64 {
        self.p_max_stated
    }

    #[wasm_bindgen(getter)]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[wasm_bindgen(getter)]
    pub fn admissible(&self) -> bool {
        self.admissible
    }

    #[wasm_bindgen(getter)]
    pub fn stated_admissible(&self) -> bool {
        self.stated_admissible
    }
}

#[wasm_bindgen]
pub fn regime(a1: f64, a2: f64, c1: f64, m: usize) -> Result<RegimeView, String> {
    let p = params(a1, a2, c1, 0.0, m);
    p.validate().map_err(|e| e.to_string())?;
    let a = gwp_admissible(&p);
    Ok(RegimeView {
        p_max: a.window.p_max,
        p_max_stated: a.window.p_max_stated,
        degree: a.degree,
        admissible: a.admissible,
        stated_admissible: a.stated_admissible,
    })
}

/// `L_k^{(ℓ)}(x; σ)` at `samples` equally spaced points of `[0, x_max]`.
#[wasm_bindgen]
pub fn laguerre_curve(k: usize, ell: f64, sigma: f64, x_max: f64, samples: usize) -> Vec<f64> {
    let step = if samples > 1 { x_max / (samples - 1) as f64 } else { 0.0 };
    (0..samples).map(|i| laguerre_scaled(k, ell, sigma, i as f64 * step)).collect()
}

/// A seeded `u`-form run at cutoff `N`, advanced on demand.
#[wasm_bindgen]
pub struct Simulation {
    stepper: Stepper,
    noise: NoiseState,
    u: SpectralField,
    time: f64,
    blown_up: bool,
}

#[wasm_bindgen]
impl Simulation {
    #[wasm_bindgen(constructor)]
    pub fn new(n_cut: usize, a1: f64, a2: f64, c1: f64, c2: f64, m: usize, seed: u64) -> Result<Simulation, String> {
        let p = params(a1, a2, c1, c2, m);
        let mut cfg = SimConfig::new(p, n_cut);
        cfg.dt = 2e-3;
        let stepper = Stepper::new(&cfg, wick_sigma(&cfg)).map_err(|e| e.to_string())?;
        let noise = sample_stationary(n_cut, cfg.grid_size, cfg.cutoff, p, stream(split_seed(seed, 0x3EB), 0));
        let u = noise.modes.clone();
        Ok(Simulation { stepper, noise, u, time: 0.0, blown_up: false })
    }

    /// Takes `steps` exponential steps; stops early on blow-up.
    pub fn advance(&mut self, steps: usize) {
        let dt = self.stepper.config().dt;
        for _ in 0..steps {
            if self.blown_up {
                return;
            }
            let old = self.noise.modes.clone();
            self.noise.ou_step(dt);
            match self.stepper.step_u(&self.u, &old, &self.noise.modes, self.time) {
                Ok(next) => {
                    self.u = next;
                    self.time += dt;
                }
                Err(_) => self.blown_up = true,
            }
        }
    }

    #[wasm_bindgen(getter)]
    pub fn time(&self) -> f64 {
        self.time
    }

    #[wasm_bindgen(getter)]
    pub fn blown_up(&self) -> bool {
        self.blown_up
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        self.u.to_grid().lp_norm(p)
    }

    /// RGBA image of `u` on a `size × size` grid: hue is the phase and
    /// brightness is `|u|` relative to its maximum.
    pub fn render(&self, size: usize) -> Vec<u8> {
        let g = Grid::from_field(&self.u, size.max(1));
        let peak = g.values().iter().map(|z| z.norm()).fold(f64::MIN_POSITIVE, f64::max);
        let mut out = Vec::with_capacity(4 * g.values().len());
        for z in g.values() {
            let [r, gr, b] = hue(z.arg(), z.norm() / peak);
            out.extend_from_slice(&[r, gr, b, 255]);
        }
        out
    }
}

fn hue(phase: f64, value: f64) -> [u8; 3] {
    let h = (phase / std::f64::consts::TAU).rem_euclid(1.0) * 6.0;
    let x = 1.0 - (h % 2.0 - 1.0).abs();
    let (r, g, b) = match h as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    let v = value.clamp(0.0, 1.0);
    [r, g, b].map(|c| (255.0 * c * v).round() as u8)
}

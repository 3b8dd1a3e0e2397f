use num_complex::Complex64;
use scgl::noise::{covariance_kernel, sample_stationary, sigma_const, wick_monomial, PhysicsParams};
use scgl::rng::{complex_normal, par_map, split_seed, stream};
use scgl::solver::{initial_v0, integrate, noise_path, Formulation, Scheme, SimConfig};
use scgl::spectral::{
    besov_norm, dealias_floor, holder_norm, lp_blocks, pointwise, semigroup_apply, CutoffSpec, Grid, SpectralField, TORUS_AREA,
};
use scgl::stats::{mean_se, MeanVar};

fn unit() -> PhysicsParams {
    PhysicsParams { a1: 1.0, a2: 1.0, c1: 1.0, c2: 1.0, gamma: 1.0, m: 2 }
}

/// Grid values of `count` independent stationary draws of `Ψ_N`.
fn noise_grids(n: usize, cutoff: CutoffSpec, count: usize, seed: u64) -> Vec<Grid> {
    let grid = dealias_floor(1, n);
    par_map(count, |i| sample_stationary(n, grid, cutoff, unit(), stream(seed, i as u64)).modes.to_grid())
}

fn assert_within(acc: &MeanVar, target: f64, what: &str) {
    let z = (acc.mean() - target) / acc.std_error();
    assert!(z.abs() < 4.5, "{what}: mean {} vs {target} (z = {z:.2})", acc.mean());
}

#[test]
fn equal_time_covariance_matches_kernel() {
    let n = 4;
    let grids = noise_grids(n, CutoffSpec::sharp(), 8000, 11);
    let m = grids[0].size();
    let nodes = |i: usize| (i / m, i % m);
    let pairs = [(0, 7), (3, 50), (12, 12), (80, 5), (40, 19), (9, 10), (15, 3), (17, 26), (20, 21), (8, 72)];
    for (i, j) in pairs {
        let (x, y) = (nodes(i), nodes(j));
        let mut want = Complex64::new(0.0, 0.0);
        let ni = n as i64;
        for a in -ni..=ni {
            for b in -ni..=ni {
                if a * a + b * b > ni * ni {
                    continue;
                }
                let phase = std::f64::consts::TAU * (a as f64 * (x.0 as f64 - y.0 as f64) + b as f64 * (x.1 as f64 - y.1 as f64)) / m as f64;
                want += Complex64::from_polar(1.0, phase) * covariance_kernel((a, b), 0.5, 0.5, &unit()).unwrap();
            }
        }
        let (mut re, mut im) = (MeanVar::default(), MeanVar::default());
        for g in &grids {
            let c = g.values()[i] * g.values()[j].conj();
            re.push(c.re);
            im.push(c.im);
        }
        assert_within(&re, want.re, "Re covariance");
        if want.im.abs() > 0.0 || im.std_error() > 0.0 {
            assert_within(&im, want.im, "Im covariance");
        }
    }
}

#[test]
fn pointwise_variance_is_sigma() {
    for cutoff in [CutoffSpec::sharp(), CutoffSpec::smooth()] {
        let n = 6;
        let sigma = sigma_const(n, &cutoff, &unit());
        let grids = noise_grids(n, cutoff, 6000, 12);
        for i in [0, 5, 77, 130, 168] {
            let acc: MeanVar = grids.iter().map(|g| g.values()[i].norm_sqr()).collect();
            assert_within(&acc, sigma, "E|Ψ(x)|²");
        }
    }
}

#[test]
fn wick_monomials_have_mean_zero() {
    let n = 3;
    let grid = dealias_floor(4, n);
    for (k, ell) in [(1, 0), (2, 0), (1, 1), (2, 1), (2, 2), (3, 1)] {
        let vals: Vec<Complex64> = par_map(20000, |i| {
            let st = sample_stationary(n, grid, CutoffSpec::smooth(), unit(), stream(split_seed(13, (k * 8 + ell) as u64), i as u64));
            wick_monomial(&st, k, ell).to_grid().values()[5]
        });
        let re: MeanVar = vals.iter().map(|z| z.re).collect();
        let im: MeanVar = vals.iter().map(|z| z.im).collect();
        assert_within(&re, 0.0, &format!("Re :Ψ^{k}Ψ̄^{ell}:"));
        if im.std_error() > 0.0 {
            assert_within(&im, 0.0, &format!("Im :Ψ^{k}Ψ̄^{ell}:"));
        }
    }
}

#[test]
fn euler_is_first_order_against_fine_rk2() {
    let p = PhysicsParams { gamma: 0.0, c2: 0.5, ..unit() };
    let run = |scheme: Scheme, dt: f64| {
        let mut cfg = SimConfig::new(p, 4);
        cfg.scheme = scheme;
        cfg.formulation = Formulation::V;
        cfg.v0_amplitude = 1.0;
        cfg.dt = dt;
        cfg.t_final = 0.5;
        let path = noise_path(&cfg, dt, cfg.steps(), stream(0, 0));
        integrate(&cfg, &initial_v0(&cfg), &path, 1).unwrap().fields.pop().unwrap()
    };
    let reference = run(Scheme::EtdRk2, 1.0 / 8192.0);
    let e1 = run(Scheme::EtdEuler, 1.0 / 256.0).max_abs_diff(&reference);
    let e2 = run(Scheme::EtdEuler, 1.0 / 512.0).max_abs_diff(&reference);
    assert!((e1 / e2 - 2.0).abs() <= 0.2, "ratio {}", e1 / e2);
}

#[test]
fn seeded_runs_are_bitwise_reproducible() {
    let mut cfg = SimConfig::new(unit(), 4);
    cfg.dt = 0.01;
    cfg.t_final = 0.2;
    cfg.seed = 99;
    cfg.v0_amplitude = 0.5;
    let a = scgl::solver::simulate(&cfg).unwrap();
    let b = scgl::solver::simulate(&cfg).unwrap();
    assert_eq!(a.v, b.v);
    assert_eq!(a.record.csv(), b.record.csv());
}

/// Random field with `f̂(n) = g_n (1 + |n|²)^{-decay/2}`.
fn rough_field(n: usize, decay: f64, seed: u64) -> SpectralField {
    let mut rng = stream(seed, 0);
    SpectralField::from_fn(n, dealias_floor(3, n), |a, b| complex_normal(&mut rng) * (1.0 + (a * a + b * b) as f64).powf(-decay / 2.0))
}

/// The ratio of the two sides of a norm inequality stays within a fixed
/// factor of its median across random inputs.
fn assert_stable(name: &str, ratios: &[f64]) {
    assert!(ratios.iter().all(|r| r.is_finite() && *r >= 0.0), "{name}: non-finite ratio");
    let mut sorted = ratios.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let max = *sorted.last().unwrap();
    assert!(max <= 5.0 * median, "{name}: max ratio {max} vs median {median}");
}

fn l1(f: &SpectralField, m: usize) -> f64 {
    Grid::from_field(f, m).lp_norm(1.0)
}

#[test]
fn besov_estimates_have_stable_constants() {
    let n = 12;
    let samples = 200u64;
    let eps = 0.1;
    let m = dealias_floor(3, n);
    let product: Vec<f64> = par_map(samples as usize, |i| {
        let f = rough_field(n, 1.0, 2 * i as u64);
        let g = rough_field(n, 1.5, 2 * i as u64 + 1);
        let fg = pointwise(&[&f, &g], m, 2 * n, |v| v[0] * v[1]);
        holder_norm(&fg, -eps) / (holder_norm(&f, -eps) * holder_norm(&g, 2.0 * eps))
    });
    assert_stable("product", &product);

    let embedding: Vec<f64> = par_map(samples as usize, |i| {
        let f = rough_field(n, 1.2, 1000 + i as u64);
        holder_norm(&f, -0.5) / besov_norm(&lp_blocks(&f, 2.0), 0.5, f64::INFINITY)
    });
    assert_stable("embedding", &embedding);

    let duality: Vec<f64> = par_map(samples as usize, |i| {
        let f = rough_field(n, 1.5, 2000 + 2 * i as u64);
        let g = rough_field(n, 0.5, 2001 + 2 * i as u64);
        let pairing: Complex64 = f.coeffs().iter().zip(g.coeffs()).map(|(a, b)| a * b.conj()).sum::<Complex64>() * TORUS_AREA;
        pairing.norm() / (besov_norm(&lp_blocks(&f, 1.0), 0.3, 1.0) * holder_norm(&g, -0.3))
    });
    assert_stable("duality", &duality);

    let s = 0.5;
    let fine = 4 * dealias_floor(1, n);
    let interpolation: Vec<f64> = par_map(samples as usize, |i| {
        let f = rough_field(n, 2.0, 3000 + i as u64);
        let (dx, dy) = f.gradient();
        let (gx, gy) = (Grid::from_field(&dx, fine), Grid::from_field(&dy, fine));
        let grad = Grid::new(fine, gx.values().iter().zip(gy.values()).map(|(a, b)| Complex64::new((a.norm_sqr() + b.norm_sqr()).sqrt(), 0.0)).collect());
        let lf = l1(&f, fine);
        let rhs = lf.powf(1.0 - s) * grad.lp_norm(1.0).powf(s) + lf;
        besov_norm(&lp_blocks(&f, 1.0), s, 1.0) / rhs
    });
    assert_stable("interpolation", &interpolation);

    let (s0, s1) = (-0.1, 0.5);
    let semigroup: Vec<f64> = par_map(samples as usize, |i| {
        let f = rough_field(n, 1.5, 4000 + i as u64);
        let t = 10f64.powf(-3.0 + 3.0 * (i as f64 + 0.5) / samples as f64);
        let diff = &f - &semigroup_apply(&f, t, &unit());
        holder_norm(&diff, s0) / (t.powf((s1 - s0) / 2.0) * holder_norm(&f, s1))
    });
    assert_stable("semigroup", &semigroup);
}

#[test]
fn reference_measure_second_moment() {
    // c = 0: the Gibbs measure is the Gaussian reference, E‖u‖²_{L²} = (2π)² Σ_{|n|≤N} 1/(a λ_n)
    let ens = scgl::gibbs::sample_gaussian_reference(3, 2.0, 4000, 21).unwrap();
    let vals: Vec<f64> = ens.samples.iter().map(|u| u.l2_norm_sq()).collect();
    let (mean, se) = mean_se(&vals);
    let want = TORUS_AREA * sigma_const(3, &CutoffSpec::sharp(), &PhysicsParams { a1: 2.0, ..unit() });
    assert!((mean - want).abs() < 4.5 * se, "{mean} vs {want}");
}

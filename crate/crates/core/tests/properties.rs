use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use scgl::energy::{form_matrix, identity_residuals, matrix_bound, min_eigenvalue, positivity_window};
use scgl::noise::{ou_transition, wick_scalar, PhysicsParams};
use scgl::polyalg::{eval_hermite, laguerre, laguerre_poly, scaling_residual_exact, verify_three_point_exact, HermiteSpec, RatPoly};
use scgl::rng::stream;
use scgl::spectral::{
    dealias_floor, dealiased_product, j_max, lp_block, lp_multiplier, project, read_snapshot, write_snapshot, CutoffSpec, SpectralField,
};
use scgl::stats::spearman;

fn field_from(n: usize, grid: usize, vals: &[(f64, f64)]) -> SpectralField {
    let mut it = vals.iter().cycle();
    SpectralField::from_fn(n, grid, |_, _| {
        let (a, b) = it.next().unwrap();
        Complex64::new(*a, *b)
    })
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..64)
}

/// Power-series coefficients of `(1-t)^{-ℓ-1} exp(-xt/(1-t))` up to `t^k`.
fn generating_series(x: f64, ell: usize, k: usize) -> Vec<f64> {
    // s(t) = -x t/(1-t) = -x Σ_{i≥1} tⁱ, and e = exp(s) solves e' = s'e
    let s: Vec<f64> = (0..=k).map(|i| if i == 0 { 0.0 } else { -x }).collect();
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for n in 1..=k {
        e[n] = (1..=n).map(|i| i as f64 * s[i] * e[n - i]).sum::<f64>() / n as f64;
    }
    // (1-t)^{-ℓ-1} = Σ binom(ℓ+i, i) tⁱ
    let mut b = vec![1.0; k + 1];
    for i in 1..=k {
        b[i] = b[i - 1] * (ell + i) as f64 / i as f64;
    }
    (0..=k).map(|n| (0..=n).map(|i| b[i] * e[n - i]).sum()).collect()
}

proptest! {
    #[test]
    fn laguerre_matches_generating_function(x in 0.0..6.0f64, ell in 0usize..=4) {
        let series = generating_series(x, ell, 8);
        for (k, c) in series.iter().enumerate() {
            let l = laguerre(k, ell as f64, x);
            prop_assert!((l - c).abs() <= 1e-12 * (1.0 + l.abs()), "k={} ell={} {} vs {}", k, ell, l, c);
        }
    }

    #[test]
    fn laguerre_derivative_rule(k in 1usize..=8, ell in 0i64..=4) {
        let lhs = laguerre_poly(k, ell).derivative();
        let rhs = laguerre_poly(k - 1, ell + 1).scale(&BigRational::from_integer(BigInt::from(-1)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn laguerre_scaling_is_exact(k in 0usize..=8, ell in 0i64..=4, s in 1u32..64, xn in 0u32..256) {
        let sigma = s as f64 / 16.0;
        let x = xn as f64 / 32.0;
        prop_assert_eq!(scaling_residual_exact(k, ell, sigma, x), BigRational::from_integer(BigInt::from(0)));
    }

    #[test]
    fn laguerre_three_point_rules(k in 1usize..=8, ell in 0i64..=4, num in -50i64..50, den in 1i64..20) {
        let x = BigRational::new(BigInt::from(num), BigInt::from(den));
        prop_assert!(verify_three_point_exact(k, ell, &x));
    }

    #[test]
    fn hermite_additivity_at_twice_the_point(k in 0usize..=8, sigma in -2.0..2.0f64, beta in -2.0..2.0f64, x in -2.0..2.0f64) {
        let h = |k: usize, s: f64, x: f64| eval_hermite(&HermiteSpec { k, sigma: s }, x);
        let mut binom = 1.0;
        let mut sum = 0.0;
        for j in 0..=k {
            sum += binom * h(j, sigma, x) * h(k - j, beta, x);
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        let lhs = h(k, sigma + beta, 2.0 * x);
        prop_assert!((lhs - sum).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn wick_scalar_conjugation(k in 0usize..=4, ell in 0usize..=4, re in -3.0..3.0f64, im in -3.0..3.0f64, sigma in 0.1..4.0f64) {
        let z = Complex64::new(re, im);
        let a = wick_scalar(k, ell, z, sigma).conj();
        let b = wick_scalar(ell, k, z, sigma);
        prop_assert!((a - b).norm() <= 1e-10 * (1.0 + a.norm()));
    }

    #[test]
    fn partition_of_unity(n in 1usize..=64, n1 in -64i64..=64, n2 in -64i64..=64) {
        let top = j_max(n);
        let r = ((n1 * n1 + n2 * n2) as f64).sqrt();
        let total: f64 = (0..=top).map(|j| lp_multiplier(j, top, r)).sum();
        prop_assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lp_blocks_reconstruct(n in 1usize..=12, vals in coeffs()) {
        let f = field_from(n, 2 * n + 1, &vals);
        let sum = (0..=j_max(n)).fold(SpectralField::zeros(n, f.grid_size()), |acc, j| &acc + &lp_block(&f, j));
        prop_assert!(sum.max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn parseval(n in 0usize..=10, vals in coeffs()) {
        let f = field_from(n, dealias_floor(1, n), &vals);
        let grid = f.to_grid().lp_norm(2.0).powi(2);
        prop_assert!((grid - f.l2_norm_sq()).abs() <= 1e-12 * (1.0 + f.l2_norm_sq()));
    }

    #[test]
    fn dealiased_product_matches_convolution(n in 1usize..=3, a in coeffs(), b in coeffs(), conj_b in any::<bool>()) {
        let grid = dealias_floor(2, n);
        let f = field_from(n, grid, &a);
        let g = field_from(n, grid, &b);
        let fast = dealiased_product(&[&f, &g], &[false, conj_b]).unwrap();
        let ni = n as i64;
        let mut brute = SpectralField::zeros(n, grid);
        for (p1, p2, x) in f.modes() {
            for (q1, q2, y) in g.modes() {
                let (k1, k2, y) = if conj_b { (p1 - q1, p2 - q2, y.conj()) } else { (p1 + q1, p2 + q2, y) };
                if k1.abs() <= ni && k2.abs() <= ni {
                    brute.set(k1, k2, brute.get(k1, k2) + x * y);
                }
            }
        }
        prop_assert!(fast.max_abs_diff(&brute) < 1e-12);
    }

    #[test]
    fn sharp_projection_is_idempotent(n in 1usize..=8, cut in 0usize..=8, vals in coeffs()) {
        let f = field_from(n, 2 * n + 1, &vals);
        let once = project(&f, &CutoffSpec::sharp(), cut.min(n));
        prop_assert_eq!(project(&once, &CutoffSpec::sharp(), cut.min(n)), once);
    }

    #[test]
    fn snapshot_round_trip(n in 0usize..=6, vals in coeffs()) {
        let f = field_from(n, 2 * n + 1, &vals);
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &f).unwrap();
        let back = read_snapshot(buf.as_slice()).unwrap();
        prop_assert_eq!(back.coeffs(), f.coeffs());
    }

    #[test]
    fn algebraic_identities_pointwise(n in 1usize..=5, vals in coeffs()) {
        let f = field_from(n, 2 * n + 1, &vals);
        for r in identity_residuals(&f) {
            prop_assert!(r < 1e-10, "{}", r);
        }
    }

    #[test]
    fn ou_transitions_compose(n1 in -6i64..=6, n2 in -6i64..=6, dt1 in 1e-4..0.5f64, dt2 in 1e-4..0.5f64, a2 in -2.0..2.0f64) {
        let p = PhysicsParams { a2, ..PhysicsParams::default() };
        let cut = CutoffSpec::sharp();
        let (d1, s1) = ou_transition((n1, n2), dt1, 8, &cut, &p);
        let (d2, s2) = ou_transition((n1, n2), dt2, 8, &cut, &p);
        let (d, s) = ou_transition((n1, n2), dt1 + dt2, 8, &cut, &p);
        prop_assert!((d1 * d2 - d).norm() < 1e-14);
        let var = s1 * s1 * d2.norm_sqr() + s2 * s2;
        prop_assert!((var - s * s).abs() < 1e-14 * (1.0 + s * s));
    }

    #[test]
    fn spearman_is_rank_invariant(xs in prop::collection::vec(-10.0..10.0f64, 3..30), shift in -5.0..5.0f64) {
        let ys: Vec<f64> = xs.iter().map(|x| (x * 0.7).sin()).collect();
        let zs: Vec<f64> = ys.iter().map(|y| (y + shift).exp()).collect();
        prop_assert!((spearman(&xs, &ys) - spearman(&xs, &zs)).abs() < 1e-12);
    }

    #[test]
    fn streams_are_deterministic(seed in any::<u64>(), idx in any::<u64>()) {
        use rand::Rng;
        let a: Vec<u64> = (0..8).scan(stream(seed, idx), |r, _| Some(r.random())).collect();
        let b: Vec<u64> = (0..8).scan(stream(seed, idx), |r, _| Some(r.random())).collect();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Positive semidefiniteness of the form matrix is equivalent to
    /// non-negative trace and determinant.
    #[test]
    fn positivity_iff_trace_and_determinant(p in 2.0..40.0f64, eta in 0.0..0.25f64, a1 in 0.05..5.0f64, a2 in -5.0..5.0f64) {
        let params = PhysicsParams { a1, a2, ..PhysicsParams::default() };
        let [[a, b], [_, d]] = form_matrix(p, eta, &params);
        let (tr, det) = (a + d, a * d - b * b);
        let scale = a.abs().max(d.abs()).max(b.abs()).powi(2);
        prop_assume!(det.abs() > 1e-9 * scale);
        prop_assert_eq!(min_eigenvalue(p, eta, &params) >= 0.0, tr >= 0.0 && det >= 0.0);
    }

    /// At `η = 0` the determinant vanishes at the upper window endpoint.
    #[test]
    fn determinant_vanishes_at_window_edge(a1 in 0.05..5.0f64, a2 in prop_oneof![-5.0..-0.05f64, 0.05..5.0f64]) {
        let params = PhysicsParams { a1, a2, ..PhysicsParams::default() };
        let p_max = positivity_window(&params, 0.0).p_max;
        prop_assert!((p_max - matrix_bound((a1 / a2).abs())).abs() <= 1e-9 * p_max);
        let [[a, b], [_, d]] = form_matrix(p_max, 0.0, &params);
        prop_assert!((a * d - b * b).abs() <= 1e-9 * (a * d).abs().max(b * b));
    }
}

#[test]
fn rat_poly_is_exact_under_laguerre_recursion() {
    // (k+1) L_{k+1} = (2k+1+ℓ-x) L_k - (k+ℓ) L_{k-1} at ℓ = 2
    let x = RatPoly::x();
    for k in 1..8usize {
        let r = |v: i64| BigRational::from_integer(BigInt::from(v));
        let lhs = laguerre_poly(k + 1, 2).scale(&r(k as i64 + 1));
        let mid = &laguerre_poly(k, 2).scale(&r(2 * k as i64 + 3)) - &(&x * &laguerre_poly(k, 2));
        let rhs = &mid - &laguerre_poly(k - 1, 2).scale(&r(k as i64 + 2));
        assert_eq!(lhs, rhs, "k = {k}");
    }
}

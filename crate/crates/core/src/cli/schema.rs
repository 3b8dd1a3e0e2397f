use std::fmt::Write as _;

const COLUMNS: &[(&str, &[(&str, &str)])] = &[
    (
        "trajectory.csv",
        &[
            ("t", "time"),
            ("L2", "‖v(t)‖_{L²(T²)}"),
            ("Linf", "grid maximum of |v(t)|"),
            ("Lp", "‖v(t)‖_{L^p} with the configured p"),
            ("C_s0", "Besov B^{s₀}_{∞,∞} norm of v(t)"),
            ("weighted_C_2eps", "t^{(2ε-s₀)/2} ‖v(t)‖_{C^{2ε}}"),
        ],
    ),
    (
        "energy.csv",
        &[
            ("t", "time"),
            ("Lp", "‖v(t)‖_{L^p}"),
            ("A_int", "4ηa₁ ∫₀ᵗ ∫|v|^{p-2}|∇v|²"),
            ("B_int", "∫₀ᵗ ∫|v|^{p+2m-2}"),
            ("F0_int", "∫₀ᵗ |⟨F₀(v, Ψ), |v|^{p-2}v⟩|"),
            ("slack", "F0_int - [(‖v(t)‖_p^p - ‖v(0)‖_p^p)/p + c₁ B_int + A_int]"),
        ],
    ),
    (
        "algebra.csv",
        &[
            ("suite", "identity family"),
            ("case", "indices of the case"),
            ("metric", "largest relative error (0 for exact-arithmetic checks)"),
            ("passed", "verdict"),
        ],
    ),
    (
        "mc_ortho.csv",
        &[
            ("k,ell,mprime", "Laguerre indices"),
            ("rho_re,rho_im", "cross-covariance E[f ḡ]"),
            ("target_re,target_im", "closed-form expectation"),
            ("estimate_re,estimate_im", "Monte Carlo mean"),
            ("se_re,se_im", "standard errors"),
            ("max_abs_z", "larger of the two component z-scores"),
        ],
    ),
    (
        "wick_cauchy.csv",
        &[
            ("N", "coarse cutoff"),
            ("mean_diff_norm", "ensemble mean of ‖W_N - W_{2N}‖_{W^{-ε,∞}}"),
            ("std_error", "standard error of the mean"),
        ],
    ),
    (
        "regime.csv",
        &[
            ("a1,a2,c1,m", "parameters"),
            ("r_a1_over_a2,r_a2_over_a1", "both orientations of the ratio r"),
            ("p_min,p_max", "positivity window of A_{p,0} from its matrix"),
            ("p_max_stated", "2+2(r²+2r√(1+r²)) with r = |a₁/a₂|"),
            ("p_max_stated_alt", "the same expression with r = |a₂/a₁|"),
            ("degree", "2m-1"),
            ("margin", "p_max - (2m-1)"),
            ("admissible", "c₁ > 0 and 2m-1 inside the window"),
            ("stated_admissible", "the same verdict against p_max_stated"),
        ],
    ),
    (
        "invariance.csv",
        &[
            ("observable", "name"),
            ("t0_mean", "mean over Gibbs draws at t = 0"),
            ("t1_mean", "mean over evolved members at t_final"),
            ("pooled_se", "√(se₀² + se₁²)"),
            ("z", "(t1_mean - t0_mean)/pooled_se"),
        ],
    ),
    (
        "zn.csv",
        &[
            ("N", "cutoff"),
            ("Z", "mean of independent SMC estimates of Z^N"),
            ("std_error", "standard error across repeats"),
            ("lower,upper", "normal 95% interval"),
        ],
    ),
    (
        "converge.csv",
        &[
            ("N,N_next", "consecutive cutoffs"),
            ("mean_sup_C_s0_distance", "ensemble mean of sup_t ‖v_{N_next} - v_N‖_{C^{s₀}}"),
            ("std_error", "standard error of the mean"),
        ],
    ),
];

/// Column documentation for the CSV files in `files`.
pub fn render(files: &[&str]) -> String {
    let mut s = String::new();
    for (file, cols) in COLUMNS {
        if !files.contains(file) {
            continue;
        }
        let _ = writeln!(s, "[{file}]");
        for (c, d) in *cols {
            let _ = writeln!(s, "{c}: {d}");
        }
        s.push('\n');
    }
    if files.iter().any(|f| f.ends_with(".wcgl")) {
        s.push_str("[*.wcgl]\nmagic \"WCGL\", u32 version, u32 N, u32 grid size, then (2N+1)² little-endian f64 (re, im) pairs, row n₁ = -N..N, column n₂ = -N..N\n");
    }
    s
}

#[cfg(test)]
mod tests {
    #[test]
    fn every_csv_documented() {
        let s = super::render(&["trajectory.csv", "energy.csv", "x.wcgl"]);
        assert!(s.contains("[energy.csv]") && s.contains("slack:") && s.contains("WCGL"));
    }
}

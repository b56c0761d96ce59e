mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skyshare_core::analysis_exact::{
    interference_functional_gg, interference_functional_ug, interference_functional_uu_gu, laplacian_derivatives,
    laplacian_gue, laplacian_u2u, psi_kernel, Evaluation, LaplacianModel, PsiKernel, RingKernel, ServingLink,
};
use skyshare_core::montecarlo::simulate_gue;
use skyshare_core::{Condition, LinkClass, Scenario, ScenarioConfig};
use std::f64::consts::PI;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn psi_differences_match_fading_quadrature() {
    for (v, ra, rb, h, m, alpha) in PSI_CASES {
        let psi = psi_kernel(v, rb, h, m, alpha, 1.0).unwrap() - psi_kernel(v, ra, h, m, alpha, 1.0).unwrap();
        let oracle = psi_difference_2d(v, ra, rb, h, m, alpha);
        assert!(rel(psi, oracle) < 1e-6, "v={v} [{ra},{rb}] h={h} m={m} a={alpha}: {psi} vs {oracle}");
    }
}

#[test]
fn rayleigh_difference_matches_direct_integral() {
    // m = 1, h = 0: 1 − 1/(1 + v r^{−α}) = v/(r^α + v)
    let (v, alpha) = (3e7, 3.3);
    let rule = legendre(30);
    for (ra, rb) in [(100.0f64, 400.0f64), (400.0, 5000.0), (5000.0, 50_000.0)] {
        let pts: Vec<f64> = (0..=20).map(|i| ra * (rb / ra).powf(i as f64 / 20.0)).collect();
        let oracle = composite(|r| v * r / (r.powf(alpha) + v), &pts, 1, &rule);
        let psi = psi_kernel(v, rb, 0.0, 1, alpha, 1.0).unwrap() - psi_kernel(v, ra, 0.0, 1, alpha, 1.0).unwrap();
        assert!(rel(psi, oracle) < 1e-9, "[{ra},{rb}]: {psi} vs {oracle}");
    }
}

#[test]
fn ring_sum_by_parts_matches_difference_form() {
    // Σ p_i [Ψ(r_{i+1}) − Ψ(r_i)] = Σ_{j≥1} [p_{j−1} − p_j] Ψ(r_j) − p_0 Ψ(r_0) + p_last Ψ(r_last)
    let scn = Scenario::new(&ScenarioConfig::default()).unwrap();
    let kernel = RingKernel::new(&scn, LinkClass::Gu, Condition::LoS, 0).unwrap();
    let (m, alpha) = (kernel.psi().m(), kernel.psi().alpha());
    let dh = LinkClass::Gu.height_diff(&scn.heights).abs();
    let kappa = kernel.kappa(0);
    for u in [1e5, 1e8, 1e11] {
        let mut out = [0.0];
        kernel.eval(u, &mut out);
        let edges = kernel.edges();
        let n = kernel.len();
        let psi = |r: f64| psi_kernel(u * kappa, r, dh, m, alpha, 1.0).unwrap();
        let mut by_parts = -kernel.weight(0) * psi(edges[0]) + kernel.weight(n - 1) * psi(edges[n]);
        for j in 1..n {
            by_parts += (kernel.weight(j - 1) - kernel.weight(j)) * psi(edges[j]);
        }
        assert!(rel(out[0], by_parts) < 1e-9, "u={u}: {} vs {by_parts}", out[0]);
    }
}

#[test]
fn single_los_ring_collapses_to_end_points() {
    let psi = PsiKernel::new(5, 2.2, 0).unwrap();
    let kernel = RingKernel::from_parts(psi.clone(), 0.0, vec![0.0, 10_000.0], vec![1.0], vec![1e-4]);
    let u = 1e9;
    let mut out = [0.0];
    kernel.eval(u, &mut out);
    let direct = psi.value(u * 1e-4, 1e8) - psi.value(u * 1e-4, 0.0);
    assert!(rel(out[0], direct) < 1e-13);
    let pts: Vec<f64> = (0..=40).map(|i| 10_000.0 * (i as f64 / 40.0).powi(3)).collect();
    let oracle = composite(|r| r * -(-5.0 * (u * 1e-4 * r.powf(-2.2) / 5.0).ln_1p()).exp_m1(), &pts, 1, &legendre(30));
    assert!(rel(out[0], oracle) < 1e-8, "{} vs {oracle}", out[0]);
}

fn fine_gain(cfg: ScenarioConfig) -> Scenario {
    let mut cfg = cfg;
    cfg.numerics.gain_angle_step_deg = 0.02;
    Scenario::new(&cfg).unwrap()
}

#[test]
fn uav_side_functionals_match_brute_force() {
    let scn = Scenario::new(&ScenarioConfig::default()).unwrap();
    let uav = power_law_with_distance(&ServingLink::u2u(&scn).unwrap(), 4);
    let gue = power_law_with_distance(&ServingLink::gue(&scn).unwrap(), 4);
    let grid = [1e8, 1e10, 1e12];
    for cond in Condition::ALL {
        let want_uu = functional_oracle(&scn, LinkClass::Uu, cond, &grid, &uav, false);
        let want_gu = functional_oracle(&scn, LinkClass::Gu, cond, &grid, &gue, false);
        for (i, &s) in grid.iter().enumerate() {
            let got = interference_functional_uu_gu(s, LinkClass::Uu, cond, &scn).unwrap();
            assert!(rel(got, want_uu[i]) < 1e-4, "uu {cond:?} s={s}: {got} vs {}", want_uu[i]);
            let got = interference_functional_uu_gu(s, LinkClass::Gu, cond, &scn).unwrap();
            assert!(rel(got, want_gu[i]) < 1e-4, "gu {cond:?} s={s}: {got} vs {}", want_gu[i]);
        }
    }
}

#[test]
fn bs_side_functionals_and_laplacians_match_brute_force() {
    let scn = fine_gain(ScenarioConfig::default());
    let uav = power_law_with_distance(&ServingLink::u2u(&scn).unwrap(), 4);
    let gue = power_law_with_distance(&ServingLink::gue(&scn).unwrap(), 4);
    let grid = [1e9, 1e10, 1e11];
    let mut exp_u = [0.0; 3];
    let mut exp_g = [0.0; 3];
    for cond in Condition::ALL {
        let uu = functional_oracle(&scn, LinkClass::Uu, cond, &grid, &uav, false);
        let gu = functional_oracle(&scn, LinkClass::Gu, cond, &grid, &gue, false);
        let ub = functional_oracle(&scn, LinkClass::Ub, cond, &grid, &uav, false);
        let gg = functional_oracle(&scn, LinkClass::Gb, cond, &grid, &gue, true);
        for (i, &s) in grid.iter().enumerate() {
            let got = interference_functional_ug(s, cond, &scn).unwrap();
            assert!(rel(got, ub[i]) < 1e-4, "ub {cond:?} s={s}: {got} vs {}", ub[i]);
            let got = interference_functional_gg(s, cond, &scn).unwrap() * 2.0 * PI * scn.bs_density;
            assert!(rel(got, gg[i]) < 1e-4, "gg {cond:?} s={s}: {got} vs {}", gg[i]);
            exp_u[i] += scn.uav_density_at_uav() * uu[i] + scn.gue_density_at_uav() * gu[i];
            exp_g[i] += scn.uav_density_at_bs() * ub[i] + scn.bs_density * gg[i];
        }
    }
    for (i, &s) in grid.iter().enumerate() {
        let (want_u, want_g) = ((-2.0 * PI * exp_u[i]).exp(), (-2.0 * PI * exp_g[i]).exp());
        let got_u = laplacian_u2u(s, &scn).unwrap().value;
        let got_g = laplacian_gue(s, &scn).unwrap().value;
        assert!(rel(got_u, want_u) < 1e-4, "u2u s={s}: {got_u} vs {want_u}");
        assert!(rel(got_g, want_g) < 1e-4, "gue s={s}: {got_g} vs {want_g}");
    }
}

#[test]
fn derivatives_match_finite_differences_on_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for draw in 0..20 {
        let mut cfg = ScenarioConfig::default();
        cfg.bs_density = rng.random_range(1.0..10.0);
        cfg.uav_density = rng.random_range(0.2..5.0);
        cfg.heights.h_u = rng.random_range(30.0..200.0);
        cfg.power.uav.epsilon = rng.random_range(0.0..1.0);
        cfg.nakagami.gb.los = 5;
        let scn = Scenario::new(&cfg).unwrap();
        let s = 10f64.powf(rng.random_range(8.0..12.0));
        let model = if draw % 2 == 0 {
            LaplacianModel::u2u(&scn, 4, Evaluation::Direct).unwrap()
        } else {
            LaplacianModel::gue(&scn, 4, Evaluation::Direct).unwrap()
        };
        let h = s * f64::EPSILON.cbrt();
        let d = laplacian_derivatives(&model, s, 4).unwrap();
        let up = laplacian_derivatives(&model, s + h, 3).unwrap();
        let down = laplacian_derivatives(&model, s - h, 3).unwrap();
        for n in 1..=4 {
            let fd = (up[n - 1] - down[n - 1]) / (2.0 * h);
            assert!(rel(d[n], fd) < 1e-4, "draw {draw} order {n}: {} vs {fd}", d[n]);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!(sign * d[n] >= 0.0);
        }
    }
}

#[test]
fn gue_laplacian_matches_simulated_transform() {
    let scn = Scenario::new(&ScenarioConfig::default()).unwrap();
    let samples = simulate_gue(&scn, 20_000, 5).unwrap();
    let mut interference: Vec<f64> = samples.iter().map(|x| x.interference_uav + x.interference_gue).collect();
    interference.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let s = 1.0 / interference[interference.len() / 2];
    let vals: Vec<f64> = interference.iter().map(|i| (-s * i).exp()).collect();
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let got = laplacian_gue(s, &scn).unwrap().value;
    assert!((got - mean).abs() < 2.0 * sd / n.sqrt(), "{got} vs {mean} ± {}", sd / n.sqrt());
}

#[test]
fn noise_limited_coverage_matches_independent_evaluator() {
    let mut cfg = ScenarioConfig::default();
    cfg.bs_density = 0.0;
    cfg.uav_density = 0.0;
    let scn = Scenario::new(&cfg).unwrap();
    let link = ServingLink::u2u(&scn).unwrap();
    let thresholds = [-10.0, 0.0, 10.0, 20.0, 30.0, 40.0];
    let curve = skyshare_core::analysis_exact::coverage_u2u_exact(&scn, &thresholds).unwrap();
    for (t, c) in thresholds.iter().zip(&curve.coverage) {
        let want = noise_only_coverage(&link, scn.noise_mw, *t);
        assert!((c - want).abs() < 1e-6, "T={t}: {c} vs {want}");
    }
}

//! Independent numerical oracles shared by the integration tests. Nothing here
//! calls into the quadrature or kernel code it is used to check.

#![allow(dead_code)]

use skyshare_core::analysis_exact::ServingLink;
use skyshare_core::channel::{total_gain, zenith_angle};
use skyshare_core::{Condition, LinkClass, Scenario};
use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Composite Gauss-Legendre over consecutive `points`, each gap split into `panels` pieces.
pub fn composite<F: FnMut(f64) -> f64>(mut f: F, points: &[f64], panels: usize, rule: &[(f64, f64)]) -> f64 {
    let mut total = 0.0;
    for w in points.windows(2) {
        let h = (w[1] - w[0]) / panels as f64;
        for p in 0..panels {
            let a = w[0] + p as f64 * h;
            for &(x, wt) in rule {
                total += 0.5 * h * wt * f(a + 0.5 * h * (x + 1.0));
            }
        }
    }
    total
}

/// Unit-mean Gamma(m, 1/m) density.
pub fn gamma_density(w: f64, m: u32) -> f64 {
    let mf = m as f64;
    let lg: f64 = (1..m).map(|k| (k as f64).ln()).sum();
    (mf * mf.ln() + (mf - 1.0) * w.ln() - mf * w - lg).exp()
}

/// CDF of unit-mean Gamma(m, 1/m) power for integer m.
pub fn gamma_cdf(w: f64, m: u32) -> f64 {
    let y = m as f64 * w;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..m {
        term *= y / k as f64;
        sum += term;
    }
    1.0 - (-y).exp() * sum
}

/// Sorted, deduplicated breakpoints in [0, upper] with the ends included.
pub fn with_ends(mut pts: Vec<f64>, upper: f64) -> Vec<f64> {
    pts.push(0.0);
    pts.push(upper);
    pts.retain(|&x| (0.0..=upper).contains(&x));
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    pts
}

/// LoS probability of the ring containing r, written out as the building-blockage product.
pub fn los_product(scn: &Scenario, r: f64, h_tx: f64, h_rx: f64) -> f64 {
    let p = scn.los;
    let k = (r * (p.a1 * p.a2).sqrt() / 1000.0 - 1.0).floor();
    if k < 0.0 {
        return 1.0;
    }
    let mut prod = 1.0;
    for j in 0..=(k as i64) {
        let h = h_tx - (j as f64 + 0.5) * (h_tx - h_rx) / (k + 1.0);
        prod *= 1.0 - (-h * h / (2.0 * p.a3 * p.a3)).exp();
    }
    prod
}

pub fn cond_prob(cond: Condition, p_los: f64) -> f64 {
    match cond {
        Condition::LoS => p_los,
        Condition::NLoS => 1.0 - p_los,
    }
}

/// Brute-force ∫ p^ξ(r) E_P[1 − (1 + s P κ(r) d^{−α}/m)^{−m}] r dr out to the
/// truncation radius for interferers of `class` in condition `cond`. With
/// `exclusion`, an interferer at serving distance x only counts for r > x, as
/// for GUEs around the typical BS; the r-integral is then nested inside the
/// x-integral so the exclusion edge is a quadrature break point.
pub fn functional_oracle(scn: &Scenario, class: LinkClass, cond: Condition, s: &[f64], powers: &[(f64, f64, f64)], exclusion: bool) -> Vec<f64> {
    let link = scn.table.get(class, cond);
    let (h_tx, h_rx) = class.heights(&scn.heights);
    let dh = h_tx - h_rx;
    let m = link.nakagami_m as f64;
    let width = 1000.0 / (scn.los.a1 * scn.los.a2).sqrt();
    let big_r = scn.truncation_radius;
    let mut pts: Vec<f64> = (1..).map(|i| i as f64 * width).take_while(|&r| r < big_r).collect();
    if class.has_bs() {
        // array nulls give kinks in the gain
        pts.extend(skyshare_core::analysis_exact::array_null_radii(h_rx, h_tx, &scn.antenna, big_r));
    }
    let rule = legendre(24);
    // p^ξ(r)·r and the attenuation κ(r) d^{−α}
    let weight_atten = |r: f64| {
        let p = cond_prob(cond, los_product(scn, r, h_tx, h_rx));
        let gain = total_gain(class, zenith_angle(r, h_rx, h_tx), &scn.antenna);
        let d2 = r * r + dh * dh;
        (p * r, gain / (link.ref_path_loss * d2.powf(0.5 * link.alpha)))
    };
    let one = |sv: f64, power: f64, atten: f64| -(-m * (sv * power * atten / m).ln_1p()).exp_m1();
    s.iter()
        .map(|&sv| {
            if !exclusion {
                let all = with_ends(pts.clone(), big_r);
                return composite(
                    |r| {
                        let (pr, atten) = weight_atten(r);
                        pr * powers.iter().map(|&(w, power, _)| w * one(sv, power, atten)).sum::<f64>()
                    },
                    &all,
                    2,
                    &rule,
                );
            }
            let mut total = 0.0;
            for &(w, power, x) in powers {
                let mut own: Vec<f64> = pts.iter().copied().filter(|&r| r > x).collect();
                own.push(x);
                own.push(big_r);
                own.sort_by(|a, b| a.partial_cmp(b).unwrap());
                own.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
                total += w * composite(
                    |r| {
                        let (pr, atten) = weight_atten(r);
                        pr * one(sv, power, atten)
                    },
                    &own,
                    1,
                    &rule,
                );
            }
            total
        })
        .collect()
}

/// Power law with the serving distance kept, for the exclusion rule.
pub fn power_law_with_distance(link: &ServingLink, panels: usize) -> Vec<(f64, f64, f64)> {
    let rule = legendre(12);
    let pts = with_ends(link.breaks().to_vec(), link.upper());
    let mut out = Vec::new();
    for w in pts.windows(2) {
        let h = (w[1] - w[0]) / panels as f64;
        for p in 0..panels {
            let a = w[0] + p as f64 * h;
            for &(x, wt) in &rule {
                let r = a + 0.5 * h * (x + 1.0);
                let f = link.pdf(r) * 0.5 * h * wt;
                for cond in Condition::ALL {
                    let q = link.prob(cond, r);
                    if q > 0.0 && f > 0.0 {
                        out.push((f * q, link.power(cond, r), r));
                    }
                }
            }
        }
    }
    out
}

/// Noise-only coverage Σ_ν ∫ f(r) p^ν(r) P[ψ > m T N₀ ζ/P / m] dr of a serving link.
pub fn noise_only_coverage(link: &ServingLink, noise: f64, t_db: f64) -> f64 {
    let t = 10f64.powf(t_db / 10.0);
    let rule = legendre(20);
    let pts = with_ends(link.breaks().to_vec(), link.upper());
    composite(
        |r| {
            let mut acc = 0.0;
            for cond in Condition::ALL {
                let q = link.prob(cond, r);
                if q == 0.0 {
                    continue;
                }
                let m = link.nakagami_m(cond);
                let omega = t * noise * link.zeta(cond, r) / link.power(cond, r);
                acc += q * (1.0 - gamma_cdf(omega, m));
            }
            link.pdf(r) * acc
        },
        &pts,
        16,
        &rule,
    )
}

/// E_ψ ∫_{ra}^{rb} (1 − e^{−v d^{−α} ψ}) r dr by 2-D Gauss-Legendre.
pub fn psi_difference_2d(v: f64, ra: f64, rb: f64, h: f64, m: u32, alpha: f64) -> f64 {
    let rule = legendre(40);
    // geometric points resolve the boundary layer of width 1/μ near ψ = 0
    let mut w_pts: Vec<f64> = (-12..0).map(|k| 10f64.powi(k)).collect();
    w_pts.insert(0, 0.0);
    w_pts.extend([0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 40.0 / m as f64 + 16.0]);
    let r_pts: Vec<f64> = (0..=16).map(|i| ra + (rb - ra) * (i as f64 / 16.0).powi(2)).collect();
    composite(
        |r| {
            let mu = v * (r * r + h * h).powf(-0.5 * alpha);
            composite(|w| gamma_density(w, m) * -(-mu * w).exp_m1(), &w_pts, 2, &rule) * r
        },
        &r_pts,
        1,
        &rule,
    )
}

/// (v, r_a, r_b, h, m, α) spanning near and far rings, Rayleigh to m = 5 and
/// exponents close to 2.
pub const PSI_CASES: [(f64, f64, f64, f64, u32, f64); 6] = [
    (1e3, 0.0, 50.0, 0.0, 1, 3.5),
    (1e6, 20.0, 300.0, 98.5, 3, 2.8),
    (5e7, 81.6, 163.3, 75.0, 5, 2.2),
    (2e4, 500.0, 2000.0, 0.0, 2, 4.1),
    (1e9, 0.0, 100.0, 23.5, 1, 3.2),
    (3e5, 163.3, 244.9, 0.0, 5, 2.05),
];

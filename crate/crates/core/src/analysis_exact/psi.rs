//! The Ψ interference kernel and its derivatives in the composite variable v = s·P.
//!
//! Ψ(v, d) = (d²/2)[1 − (1 + μ/m)^{−m}] − K·₂F₁(1+m, 1−β; 2−β; −μ/m),
//! μ = v d^{−α}, K = v d^{2−α} / (2(1−β)), β = 2/α.
//!
//! Every hypergeometric call has c = b + 1, so the Pfaff image has a unit
//! parameter and a positive-term series. Far from the origin the connection
//! formula for z → 1/z is used, whose second series collapses to 1.

use crate::error::{Error, Result};
use crate::specfun::{gamma_fn, gauss_2f1, pochhammer, FunctionAccuracy};

const SERIES_TOL: f64 = 1e-16;
const SERIES_MAX: usize = 2000;

/// Σ_k (a)_k/(c)_k w^k for 0 ≤ w ≤ 1/2.
fn unit_series(a: f64, c: f64, w: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..SERIES_MAX {
        let kf = k as f64;
        let ratio = (a + kf) / (c + kf) * w;
        term *= ratio;
        sum += term;
        // geometric bound on the remaining tail once the ratio has settled below 1
        let bound = ratio.max(w);
        if bound < 0.9 && term <= SERIES_TOL * (1.0 - bound) * sum {
            break;
        }
    }
    sum
}

/// Constants for ₂F₁(a, b; b+1; z) at one derivative order.
#[derive(Debug, Clone, Copy)]
struct ShiftedF {
    a: f64,
    b: f64,
    /// Γ(b+1)Γ(a−b)/Γ(a)
    conn: f64,
}

impl ShiftedF {
    fn new(a: f64, b: f64) -> Result<Self> {
        let conn = gamma_fn(b + 1.0)? * gamma_fn(a - b)? / gamma_fn(a)?;
        Ok(Self { a, b, conn })
    }

    /// x^n · ₂F₁(a, b; b+1; −x) for x ≥ 0, computed in log space where needed.
    fn scaled(&self, n: usize, x: f64) -> f64 {
        let (a, b) = (self.a, self.b);
        if x == 0.0 {
            return if n == 0 { 1.0 } else { 0.0 };
        }
        let lx = x.ln();
        let l1 = x.ln_1p();
        if x <= 1.0 {
            // Pfaff: (1+x)^{-a} Σ (a)_k/(b+1)_k w^k, w = x/(1+x)
            let w = x / (1.0 + x);
            (n as f64 * lx - a * l1).exp() * unit_series(a, b + 1.0, w)
        } else {
            // z → 1/z connection; the first series is Pfaff-mapped to w = 1/(1+x)
            let w = 1.0 / (1.0 + x);
            let first = b / (b - a) * (n as f64 * lx - a * l1).exp() * unit_series(a, a - b + 1.0, w);
            let second = self.conn * ((n as f64 - b) * lx).exp();
            first + second
        }
    }
}

/// Ψ and its scaled v-derivatives for one (m, α) pair, up to a fixed order.
#[derive(Debug, Clone)]
pub struct PsiKernel {
    m: u32,
    alpha: f64,
    beta: f64,
    max_order: usize,
    f: Vec<ShiftedF>,
    /// (m+1)_n (1−β)_n / (2−β)_n
    fcoef: Vec<f64>,
    /// (m)_n
    mpoch: Vec<f64>,
    /// Ψ(v, 0) = −limit · v^β
    limit: f64,
}

impl PsiKernel {
    pub fn new(m: u32, alpha: f64, max_order: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::domain("psi_kernel", "Nakagami m must be at least 1"));
        }
        if !(alpha > 2.0) || (alpha - 2.0).abs() < 1e-9 {
            return Err(Error::domain(
                "psi_kernel",
                format!("path loss exponent {alpha} gives beta = 2/alpha >= 1; perturb alpha above 2"),
            ));
        }
        let mf = m as f64;
        let beta = 2.0 / alpha;
        let mut f = Vec::with_capacity(max_order + 1);
        let mut fcoef = Vec::with_capacity(max_order + 1);
        let mut mpoch = Vec::with_capacity(max_order + 1);
        for n in 0..=max_order {
            let nf = n as f64;
            f.push(ShiftedF::new(1.0 + mf + nf, 1.0 - beta + nf)?);
            fcoef.push(pochhammer(mf + 1.0, n) * pochhammer(1.0 - beta, n) / pochhammer(2.0 - beta, n));
            mpoch.push(pochhammer(mf, n));
        }
        let limit = mf.powf(-beta) * gamma_fn(1.0 - beta)? * gamma_fn(mf + beta)? / (2.0 * gamma_fn(mf)?);
        Ok(Self { m, alpha, beta, max_order, f, fcoef, mpoch, limit })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Writes v^n ∂ⁿΨ/∂vⁿ (v, d) for n = 0..out.len() given d² = r² + h².
    pub fn eval_scaled(&self, v: f64, d2: f64, out: &mut [f64]) {
        let order = out.len().saturating_sub(1);
        assert!(order <= self.max_order, "derivative order above kernel capacity");
        if v == 0.0 {
            out.iter_mut().for_each(|o| *o = 0.0);
            return;
        }
        let mf = self.m as f64;
        if d2 == 0.0 {
            let base = -self.limit * v.powf(self.beta);
            let mut falling = 1.0;
            for (n, o) in out.iter_mut().enumerate() {
                *o = base * falling;
                falling *= self.beta - n as f64;
            }
            return;
        }
        let half_alpha = self.alpha / 2.0;
        let l1 = d2.powf(-half_alpha);
        let x = v * l1 / mf;
        let k = v * d2 * l1 / (2.0 * (1.0 - self.beta));
        let lx = x.ln();
        let l1p = x.ln_1p();
        let mut prev_s = 0.0;
        for (n, o) in out.iter_mut().enumerate() {
            let nf = n as f64;
            let term1 = if n == 0 {
                -0.5 * d2 * (-mf * l1p).exp_m1()
            } else {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                -0.5 * d2 * sign * self.mpoch[n] * (nf * lx - (mf + nf) * l1p).exp()
            };
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let s = sign * self.fcoef[n] * self.f[n].scaled(n, x);
            let term2 = k * (s + nf * prev_s);
            prev_s = s;
            *o = term1 - term2;
        }
    }

    /// Ψ(v, d) only.
    pub fn value(&self, v: f64, d2: f64) -> f64 {
        let mut out = [0.0];
        self.eval_scaled(v, d2, &mut out);
        out[0]
    }
}

/// Ψ(s, r) with transmit power P, height offset h, Nakagami m and exponent α.
pub fn psi_kernel(s: f64, r: f64, h: f64, m: u32, alpha: f64, tx_power: f64) -> Result<f64> {
    if !(s >= 0.0) || !(r >= 0.0) || !(tx_power >= 0.0) {
        return Err(Error::domain("psi_kernel", "s, r and tx_power must be non-negative"));
    }
    let kernel = PsiKernel::new(m, alpha, 0)?;
    Ok(kernel.value(s * tx_power, r * r + h * h))
}

/// Reference evaluation of Ψ through the general hypergeometric routine.
pub fn psi_reference(v: f64, d2: f64, m: u32, alpha: f64) -> Result<f64> {
    let mf = m as f64;
    let beta = 2.0 / alpha;
    let mu = v * d2.powf(-alpha / 2.0);
    let k = v * d2.powf(1.0 - alpha / 2.0) / (2.0 * (1.0 - beta));
    let f = gauss_2f1(1.0 + mf, 1.0 - beta, 2.0 - beta, -mu / mf, &FunctionAccuracy::default())?;
    Ok(-0.5 * d2 * (-mf * (mu / mf).ln_1p()).exp_m1() - k * f)
}

//! The parameter `h ∈ (0, 1/4]` attached to `λ ∈ (0, λ_c]`, and the
//! generating functions of Boltzmann triangulations of polygons.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::EnumError;

/// `1 / (12√3)`.
pub const LAMBDA_C: f64 = 0.048112522432468816;

const ROOT_TOL: f64 = 1e-12;

pub fn lambda_of_h(h: f64) -> f64 {
    h / (1.0 + 8.0 * h).powf(1.5)
}

fn bisect(mut lo: f64, mut hi: f64, below: impl Fn(f64) -> bool) -> f64 {
    // invariant: below(lo) holds, below(hi) fails
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Solves `λ = h / (1 + 8h)^{3/2}` on `(0, 1/4]`.
///
/// The map is increasing with a critical point at `1/4`, so near `λ_c` the
/// root is only determined to about the square root of machine precision.
pub fn h_of_lambda(lambda: f64) -> Result<f64, EnumError> {
    if !(lambda > 0.0) || lambda > LAMBDA_C * (1.0 + 1e-14) {
        return Err(EnumError::Domain(format!("λ = {lambda} not in (0, λ_c]")));
    }
    let slack = lambda * (1.0 + 1e-14);
    if lambda_of_h(0.25) <= slack {
        return Ok(0.25);
    }
    let h = bisect(0.0, 0.25, |h| lambda_of_h(h) <= slack);
    if (lambda_of_h(h) - lambda).abs() > ROOT_TOL * lambda.max(1e-300) {
        return Err(EnumError::Convergence(format!("h for λ = {lambda}")));
    }
    Ok(h)
}

/// `2 atanh(s) / s`, with its series near `s = 0`.
fn two_atanh_over(s: f64) -> f64 {
    if s < 1e-3 {
        let s2 = s * s;
        2.0 * (1.0 + s2 / 3.0 + s2 * s2 / 5.0 + s2 * s2 * s2 / 7.0)
    } else {
        2.0 * s.atanh() / s
    }
}

/// Expected inverse root degree as a function of `h`.
pub fn d_of_h(h: f64) -> f64 {
    let s = (1.0 - 4.0 * h).max(0.0).sqrt();
    h * two_atanh_over(s) / (1.0 + 8.0 * h)
}

pub fn d_of_lambda(lambda: f64) -> Result<f64, EnumError> {
    Ok(d_of_h(h_of_lambda(lambda)?))
}

/// The `λ` with `d(λ) = (1 − 2θ)/6`.
pub fn lambda_of_theta(theta: f64) -> Result<f64, EnumError> {
    if !(0.0..0.5).contains(&theta) {
        return Err(EnumError::Domain(format!("θ = {theta} not in [0, 1/2)")));
    }
    let target = (1.0 - 2.0 * theta) / 6.0;
    if d_of_h(0.25) <= target {
        return Ok(LAMBDA_C);
    }
    let h = bisect(0.0, 0.25, |h| d_of_h(h) <= target);
    if (d_of_h(h) - target).abs() > 1e-10 {
        return Err(EnumError::Convergence(format!("λ for θ = {theta}")));
    }
    Ok(lambda_of_h(h))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaParams {
    pub lambda: f64,
    pub h: f64,
    /// `8 + 1/h`.
    pub beta_hyp: f64,
    /// `32h + 4`.
    pub beta_sub: f64,
}

impl LambdaParams {
    pub fn from_lambda(lambda: f64) -> Result<Self, EnumError> {
        let h = h_of_lambda(lambda)?;
        Ok(Self::with(lambda, h))
    }

    pub fn from_h(h: f64) -> Result<Self, EnumError> {
        if !(h > 0.0 && h <= 0.25) {
            return Err(EnumError::Domain(format!("h = {h} not in (0, 1/4]")));
        }
        Ok(Self::with(lambda_of_h(h), h))
    }

    pub fn critical() -> Self {
        Self::with(LAMBDA_C, 0.25)
    }

    fn with(lambda: f64, h: f64) -> Self {
        LambdaParams { lambda, h, beta_hyp: 8.0 + 1.0 / h, beta_sub: 32.0 * h + 4.0 }
    }

    /// `log w_λ(p)` for `p ≥ 1`.
    pub fn ln_w(&self, p: usize) -> f64 {
        if p == 1 {
            return self.w1().ln();
        }
        self.ln_w_real(p as f64)
    }

    /// The closed form of `log w_λ(p)` read as a smooth function of real `p ≥ 2`.
    pub fn ln_w_real(&self, pf: f64) -> f64 {
        pf * (4.0 + 32.0 * self.h).ln() + self.ln_w_reduced(pf)
    }

    /// `log w_λ(p) − p log(4 + 32h)`, free of cancellation for large `p`.
    pub fn ln_w_reduced(&self, pf: f64) -> f64 {
        let h = self.h;
        ln_gamma_ratio(pf, -1.5, 1.0) - 2.0 * std::f64::consts::LN_2
            - 0.5 * std::f64::consts::PI.ln()
            + ((1.0 - 4.0 * h) * pf + 6.0 * h).ln()
            - (4.0 * (1.0 + 8.0 * h).powf(1.5)).ln()
    }

    fn w1(&self) -> f64 {
        let h = self.h;
        let r = (1.0 + 8.0 * h).sqrt();
        // 1/2 − (1+2h)/(2r), rewritten to avoid cancellation for small h
        let num = r * r - (1.0 + 2.0 * h) * (1.0 + 2.0 * h);
        num / (2.0 * r * (r + 1.0 + 2.0 * h))
    }

    /// Partition function of Boltzmann triangulations of the `p`-gon.
    pub fn w(&self, p: usize) -> f64 {
        assert!(p >= 1, "w is defined for p ≥ 1");
        if p == 1 {
            self.w1()
        } else {
            self.ln_w(p).exp()
        }
    }

    /// Closed form of `Σ_p w(p) x^p`, valid for `0 ≤ x ≤ 1/(4(1+8h))`.
    pub fn big_w(&self, x: f64) -> Result<f64, EnumError> {
        let h = self.h;
        let r = 1.0 - 4.0 * (1.0 + 8.0 * h) * x;
        if x < 0.0 || r < -1e-15 {
            return Err(EnumError::Domain(format!("x = {x} outside the disk of convergence")));
        }
        let l = self.lambda;
        Ok(0.5 * l * ((1.0 - (1.0 + 8.0 * h) / h * x) * r.max(0.0).sqrt() - 1.0 + x / l))
    }

    /// `log C_p(λ)`; `C_p = λ⁻¹ (8 + 1/h)^{p−1} Σ_{q<p} binom(2q, q) h^q`.
    pub fn ln_c(&self, p: usize) -> f64 {
        assert!(p >= 1);
        let mut term = 1.0;
        let mut sum = 1.0;
        for q in 1..p {
            term *= (2 * q * (2 * q - 1)) as f64 / ((q * q) as f64) * self.h;
            sum += term;
        }
        -self.lambda.ln() + (p as f64 - 1.0) * self.beta_hyp.ln() + sum.ln()
    }

    pub fn c(&self, p: usize) -> f64 {
        self.ln_c(p).exp()
    }

    /// `(32h + 4) / β`: the geometric rate of the terms `β^{−i} w(i+1)`.
    pub fn gamma(&self, beta: f64) -> f64 {
        (4.0 + 32.0 * self.h) / beta
    }

    /// Right-hand side of `βλ + 2βW(1/β) = 1 + λβ(1 − (1+8h)/(hβ))√(1 − 4(1+8h)/β)`.
    pub fn relation_rhs(&self, beta: f64) -> f64 {
        let h = self.h;
        let s = (1.0 - 4.0 * (1.0 + 8.0 * h) / beta).max(0.0).sqrt();
        1.0 + self.lambda * beta * (1.0 - (1.0 + 8.0 * h) / (h * beta)) * s
    }
}

/// Precomputed `w(1..=max)` and `C(1..=max)` in log space.
#[derive(Clone, Debug)]
pub struct WTable {
    pub params: LambdaParams,
    ln_w: Vec<f64>,
    ln_c: Vec<f64>,
}

impl WTable {
    pub fn new(params: LambdaParams, max_p: usize) -> Self {
        let mut ln_w = vec![f64::NEG_INFINITY; max_p + 2];
        for (p, x) in ln_w.iter_mut().enumerate().skip(1) {
            *x = params.ln_w(p);
        }
        let mut ln_c = vec![f64::NEG_INFINITY; max_p + 2];
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        for p in 1..=max_p + 1 {
            if p >= 2 {
                let q = (p - 1) as f64;
                term *= 2.0 * q * (2.0 * q - 1.0) / (q * q) * params.h;
                sum += term;
            }
            ln_c[p] = -params.lambda.ln() + (p as f64 - 1.0) * params.beta_hyp.ln() + sum.ln();
        }
        WTable { params, ln_w, ln_c }
    }

    pub fn max_p(&self) -> usize {
        self.ln_w.len() - 2
    }

    pub fn ln_w(&self, p: usize) -> f64 {
        self.ln_w.get(p).copied().unwrap_or_else(|| self.params.ln_w(p))
    }

    pub fn w(&self, p: usize) -> f64 {
        self.ln_w(p).exp()
    }

    pub fn ln_c(&self, p: usize) -> f64 {
        self.ln_c.get(p).copied().unwrap_or_else(|| self.params.ln_c(p))
    }
}

/// `log Γ(x + a) − log Γ(x + b)`, by the Stirling series once `x` is large.
pub fn ln_gamma_ratio(x: f64, a: f64, b: f64) -> f64 {
    if x < 1e3 {
        return ln_gamma(x + a) - ln_gamma(x + b);
    }
    let b2 = |t: f64| t * t - t + 1.0 / 6.0;
    let b3 = |t: f64| t * t * t - 1.5 * t * t + 0.5 * t;
    let b4 = |t: f64| t.powi(4) - 2.0 * t.powi(3) + t * t - 1.0 / 30.0;
    (a - b) * x.ln() + (b2(a) - b2(b)) / (2.0 * x) - (b3(a) - b3(b)) / (6.0 * x * x)
        + (b4(a) - b4(b)) / (12.0 * x.powi(3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_values() {
        assert!((LAMBDA_C - 1.0 / (12.0 * 3f64.sqrt())).abs() < 1e-17);
        assert_eq!(h_of_lambda(LAMBDA_C).unwrap(), 0.25);
        assert!((d_of_lambda(LAMBDA_C).unwrap() - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(lambda_of_theta(0.0).unwrap(), LAMBDA_C);
        let p = LambdaParams::critical();
        assert_eq!(p.beta_hyp, 12.0);
        assert_eq!(p.beta_sub, 12.0);
        assert!((p.w(1) - (0.5 - 3f64.sqrt() / 4.0)).abs() < 1e-15);
        assert!(h_of_lambda(LAMBDA_C * 1.001).is_err());
    }

    #[test]
    fn h_round_trip() {
        for k in 1..100 {
            let lambda = LAMBDA_C * k as f64 / 100.0;
            let h = h_of_lambda(lambda).unwrap();
            assert!((lambda_of_h(h) - lambda).abs() < 1e-12 * lambda);
            let back = lambda_of_theta((1.0 - 6.0 * d_of_h(h)) / 2.0).unwrap();
            assert!((back - lambda).abs() < 1e-8 * lambda);
        }
    }

    #[test]
    fn d_is_increasing() {
        let mut prev = 0.0;
        for k in 1..=1000 {
            let d = d_of_lambda(LAMBDA_C * k as f64 / 1000.0).unwrap();
            assert!(d > prev);
            prev = d;
        }
    }

    #[test]
    fn c_one_is_inverse_lambda() {
        let p = LambdaParams::from_lambda(LAMBDA_C / 3.0).unwrap();
        assert!((p.c(1) * p.lambda - 1.0).abs() < 1e-14);
        let t = WTable::new(p, 50);
        for q in 1..50 {
            assert!((t.ln_c(q) - p.ln_c(q)).abs() < 1e-10);
            assert!(t.ln_c(q + 1) > t.ln_c(q));
        }
    }

    #[test]
    fn tutte_equation_for_w() {
        // root-edge decomposition of a triangulation of the p-gon
        for lambda in [LAMBDA_C, LAMBDA_C / 2.0, LAMBDA_C / 10.0] {
            let pa = LambdaParams::from_lambda(lambda).unwrap();
            for p in 1..30 {
                let mut rhs = lambda * pa.w(p + 1);
                for k in 0..p {
                    rhs += pa.w(k + 1) * pa.w(p - k);
                }
                if p == 2 {
                    rhs += 1.0;
                }
                assert!((rhs - pa.w(p)).abs() < 1e-12 * pa.w(p), "p={p} λ={lambda}");
            }
        }
    }
}

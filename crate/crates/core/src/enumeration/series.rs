//! Certified evaluation of `βλ + 2 Σ_{i≥0} β^{−i} w(i+1)`, the total mass of
//! one half-plane peeling step.
//!
//! The terms behave like `γ^p p^{−3/2}` with `γ = (4 + 32h)/β`, so the tail is
//! bounded on both sides using Kershaw's inequality
//! `(x + 1/4)^{1/2} < Γ(x+1)/Γ(x+1/2) < (x − 1/2 + √3/2)^{1/2}`.

use super::params::LambdaParams;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassReport {
    /// `βλ + 2 Σ_{p=1}^{terms} β^{1−p} w(p)`.
    pub partial: f64,
    /// Certified bounds on the omitted part `2 Σ_{p>terms} β^{1−p} w(p)`.
    pub tail_lo: f64,
    pub tail_hi: f64,
    pub terms: usize,
}

impl MassReport {
    pub fn lo(&self) -> f64 {
        self.partial + self.tail_lo
    }

    pub fn hi(&self) -> f64 {
        self.partial + self.tail_hi
    }

    /// Whether `x` lies in the certified interval widened by `tol`.
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.lo() - tol <= x && x <= self.hi() + tol
    }

    /// Upper bound on the distance between the full series and `x`.
    pub fn distance_to(&self, x: f64) -> f64 {
        let mid = 0.5 * (self.lo() + self.hi());
        (x - mid).abs() + 0.5 * (self.hi() - self.lo())
    }
}

/// Compensated summation.
#[derive(Default)]
struct Neumaier {
    sum: f64,
    c: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

pub fn peeling_mass(params: &LambdaParams, beta: f64, terms: usize) -> MassReport {
    assert!(terms >= 2);
    let ln_beta = beta.ln();
    let mut acc = Neumaier::default();
    acc.add(beta * params.lambda);
    for p in 1..=terms {
        let t = (params.ln_w(p) - (p as f64 - 1.0) * ln_beta).exp();
        acc.add(2.0 * t);
    }
    let gamma = params.gamma(beta);
    let (tail_lo, tail_hi) = if gamma > 1.0 {
        (0.0, f64::INFINITY)
    } else {
        let h = params.h;
        let a = 1.0 - 4.0 * h;
        let b = 6.0 * h;
        let k = 1.0 / (4.0 * (1.0 + 8.0 * h).powf(1.5));
        let c = beta * k / (4.0 * std::f64::consts::PI.sqrt());
        let m = terms as f64;
        let y = m - 1.5;
        let upper = 2.0 * c * gamma.powf(m + 1.0)
            * (2.0 * a / y.sqrt() + (1.5 * a + b) * (2.0 / 3.0) * y.powf(-1.5));
        let lower = if gamma == 1.0 {
            let z = m + 2.5;
            (2.0 * c * (2.0 * a / z.sqrt() + (b - 1.5 * a) * (2.0 / 3.0) * z.powf(-1.5))).max(0.0)
        } else {
            0.0
        };
        (lower, upper)
    };
    MassReport { partial: acc.value(), tail_lo, tail_hi, terms }
}

/// Certified bound on `|a_{p,v} − Σ_steps|` for `a_{p,v} = β^p λ^v`, where the
/// one-step decomposition divided by `a_{p,v}` is exactly the peeling mass.
/// Infinite when the series diverges (`β < 32h + 4`).
pub fn harmonicity_residual(
    params: &LambdaParams,
    beta: f64,
    p: i32,
    v: i32,
    terms: usize,
) -> f64 {
    if params.gamma(beta) > 1.0 {
        return f64::INFINITY;
    }
    let a = beta.powi(p) * params.lambda.powi(v);
    a * peeling_mass(params, beta, terms).distance_to(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::params::LAMBDA_C;

    #[test]
    fn geometric_case_converges_fast() {
        let pa = LambdaParams::from_lambda(LAMBDA_C / 2.0).unwrap();
        let r = peeling_mass(&pa, pa.beta_hyp, 400);
        assert!(r.contains(1.0, 1e-12), "{r:?}");
        assert!(r.hi() - r.lo() < 1e-14);
    }

    #[test]
    fn closed_form_matches_series() {
        for lambda in [LAMBDA_C / 2.0, LAMBDA_C / 10.0] {
            let pa = LambdaParams::from_lambda(lambda).unwrap();
            let beta = 0.5 * (pa.beta_hyp + pa.beta_sub);
            let x = 1.0 / beta;
            let closed = beta * lambda + 2.0 * beta * pa.big_w(x).unwrap();
            let r = peeling_mass(&pa, beta, 2000);
            assert!(r.contains(closed, 1e-12));
            assert!((closed - pa.relation_rhs(beta)).abs() < 1e-12);
            assert!(pa.relation_rhs(beta) < 1.0 - 1e-4);
        }
    }

    #[test]
    fn divergent_side_is_infinite() {
        let pa = LambdaParams::critical();
        assert_eq!(harmonicity_residual(&pa, 10.0, 0, 0, 100), f64::INFINITY);
    }
}

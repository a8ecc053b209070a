//! Closed triangulations of genus `g` with `2n` triangles, by a quadratic
//! recursion in `(n, g)`, and the spanning-tree decorated upper count.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::krikun::factorial;
use super::EnumError;

/// Memoised recursion. Its only free constant is the value at `n = −1`,
/// `g = 0`; [`GjRecursion::seeded`] pins it from the number of rooted
/// two-triangle spheres.
#[derive(Clone, Debug, Default)]
pub struct GjRecursion {
    base: Option<BigRational>,
    memo: HashMap<(i64, usize), BigRational>,
}

impl GjRecursion {
    pub fn unseeded() -> Self {
        Self::default()
    }

    pub fn with_base(base: BigRational) -> Self {
        GjRecursion { base: Some(base), memo: HashMap::new() }
    }

    /// The recursion gives `τ(1,0) = −32 c³`; solve for `c` exactly.
    pub fn seeded(tau_1_0: &BigInt) -> Result<Self, EnumError> {
        let target = BigRational::new(-tau_1_0.clone(), BigInt::from(32));
        let num = target.numer().abs().cbrt();
        let den = target.denom().cbrt();
        let mut c = BigRational::new(num, den);
        if target.is_negative() {
            c = -c;
        }
        if &c * &c * &c != target {
            return Err(EnumError::Domain(format!(
                "τ(1,0) = {tau_1_0} has no rational base value"
            )));
        }
        Ok(Self::with_base(c))
    }

    pub fn base(&self) -> Option<&BigRational> {
        self.base.as_ref()
    }

    fn value(&mut self, n: i64, g: usize) -> Result<BigRational, EnumError> {
        if n == -1 {
            return if g == 0 {
                self.base.clone().ok_or(EnumError::BaseCaseMissing { g: 0 })
            } else {
                Ok(BigRational::zero())
            };
        }
        if n < 2 * g as i64 - 1 {
            return Ok(BigRational::zero());
        }
        if let Some(v) = self.memo.get(&(n, g)) {
            return Ok(v.clone());
        }
        let mut acc = BigRational::zero();
        if g >= 1 {
            let f = n * (3 * n - 2) * (3 * n - 4);
            if f != 0 {
                acc += BigRational::from_integer(BigInt::from(f)) * self.value(n - 2, g - 1)?;
            }
        }
        for i in -1..=n - 1 {
            let j = n - 2 - i;
            let w = (3 * i + 2) * (3 * j + 2);
            if w == 0 {
                continue;
            }
            for h in 0..=g {
                let a = self.value(i, h)?;
                if a.is_zero() {
                    continue;
                }
                let b = self.value(j, g - h)?;
                acc += BigRational::from_integer(BigInt::from(w)) * a * b;
            }
        }
        let v = acc * BigRational::new(BigInt::from(4), BigInt::from(n + 1));
        self.memo.insert((n, g), v.clone());
        Ok(v)
    }

    /// `τ(n, g)`, zero when `n < 2g − 1`.
    pub fn tau(&mut self, n: i64, g: usize) -> Result<BigInt, EnumError> {
        if n < 0 && !(n == -1 && g == 0) {
            return Ok(BigInt::zero());
        }
        let v = self.value(n, g)?;
        if !v.is_integer() {
            return Err(EnumError::Domain(format!("τ({n},{g}) = {v} is not an integer")));
        }
        Ok(v.to_integer())
    }
}

pub fn catalan(k: u64) -> BigInt {
    factorial(2 * k) / (factorial(k) * factorial(k + 1))
}

/// Count of triangulations decorated with a spanning tree, an upper bound for `τ(n, g)`.
pub fn tilde_tau(n: u64, g: u64) -> Result<BigInt, EnumError> {
    if n + 1 < 2 * g {
        return Err(EnumError::Domain(format!("n + 1 − 2g < 0 for n = {n}, g = {g}")));
    }
    let num = catalan(n + 1 - 2 * g) * BigInt::from(8 * n + 2 - 4 * g) * factorial(4 * n - 2 * g);
    let den = BigInt::from(12u32).pow(g as u32)
        * factorial(g)
        * factorial(2 * n + 2 - 4 * g)
        * factorial(2 * n - g);
    let q = BigRational::new(num, den);
    if !q.is_integer() {
        return Err(EnumError::Domain(format!("τ̃({n},{g}) is not an integer")));
    }
    Ok(q.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seeded() -> GjRecursion {
        GjRecursion::seeded(&BigInt::from(4)).unwrap()
    }

    #[test]
    fn unseeded_reports_missing_base() {
        let mut r = GjRecursion::unseeded();
        assert_eq!(r.tau(2, 0), Err(EnumError::BaseCaseMissing { g: 0 }));
    }

    #[test]
    fn base_is_minus_one_half() {
        let r = seeded();
        assert_eq!(r.base().unwrap(), &BigRational::new(BigInt::from(-1), BigInt::from(2)));
    }

    #[test]
    fn below_threshold_is_zero() {
        let mut r = seeded();
        for g in 1..6usize {
            for n in -1..(2 * g as i64 - 1) {
                assert_eq!(r.tau(n, g).unwrap(), BigInt::zero());
            }
        }
    }

    #[test]
    fn catalan_small() {
        let c: Vec<BigInt> = (0..6).map(catalan).collect();
        assert_eq!(c, [1, 1, 2, 5, 14, 42].map(BigInt::from));
    }

    #[test]
    fn tilde_tau_integral_grid() {
        for g in 0..=20u64 {
            for n in (2 * g).saturating_sub(1)..=50 {
                if n + 1 < 2 * g {
                    continue;
                }
                assert!(tilde_tau(n, g).unwrap() > BigInt::zero(), "n={n} g={g}");
            }
        }
    }

    proptest! {
        #[test]
        fn recursion_values_are_nonnegative_integers(n in 0i64..18, g in 0usize..5) {
            let mut r = seeded();
            let v = r.tau(n, g).unwrap();
            prop_assert!(v >= BigInt::zero());
        }
    }
}

//! Closed form for planar triangulations of a polygon.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::EnumError;

/// `n!!` with `(−1)!! = 0!! = 1`; `None` below `−1`.
pub fn double_factorial(n: i64) -> Option<BigInt> {
    if n < -1 {
        return None;
    }
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Some(acc)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Rooted planar triangulations of the `p`-gon with `2n − p + 2` triangles
/// (so `n − p + 2` internal vertices).
///
/// The formula needs `(3n − p + 1)!!`, which is undefined for `p = 1, n = −1`;
/// that case has no triangulation and returns `0`.
pub fn tau_planar_polygon(n: i64, p: u64) -> Result<BigInt, EnumError> {
    if p == 0 {
        return Err(EnumError::Domain("perimeter must be at least 1".into()));
    }
    let pi = p as i64;
    if n < pi - 2 {
        return Err(EnumError::Domain(format!("n = {n} < p − 2 = {}", pi - 2)));
    }
    let Some(df_top) = double_factorial(3 * n - pi + 1) else {
        return Ok(BigInt::zero());
    };
    let df_bottom = double_factorial(n + pi + 1).expect("nonnegative");
    let pre = BigInt::from(p) * factorial(2 * p) / (factorial(p) * factorial(p));
    let e = n - pi + 1;
    let mut num = pre * df_top;
    let mut den = factorial((n - pi + 2) as u64) * df_bottom;
    if e >= 0 {
        num *= BigInt::from(4).pow(e as u32);
    } else {
        den *= BigInt::from(4).pow((-e) as u32);
    }
    let q = BigRational::new(num, den);
    if !q.is_integer() {
        return Err(EnumError::Domain(format!("non-integral value at n = {n}, p = {p}")));
    }
    Ok(q.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(tau_planar_polygon(0, 1).unwrap(), BigInt::from(1));
        assert_eq!(tau_planar_polygon(0, 2).unwrap(), BigInt::from(1));
        assert_eq!(tau_planar_polygon(-1, 1).unwrap(), BigInt::from(0));
        assert!(tau_planar_polygon(-1, 2).is_err());
        // a single triangle
        assert_eq!(tau_planar_polygon(1, 3).unwrap(), BigInt::from(1));
    }

    #[test]
    fn values_are_integral_over_a_grid() {
        for p in 1..25u64 {
            for n in (p as i64 - 2).max(-1)..40 {
                let v = tau_planar_polygon(n, p).unwrap();
                assert!(v >= BigInt::zero());
            }
        }
    }

    #[test]
    fn partial_sums_approach_w() {
        use crate::enumeration::params::{LambdaParams, LAMBDA_C};
        use num_traits::ToPrimitive;
        let pa = LambdaParams::from_lambda(LAMBDA_C / 2.0).unwrap();
        for p in 1..=3u64 {
            let mut sum = 0.0;
            for v in 0..150i64 {
                let n = v - 2 + p as i64;
                if n < p as i64 - 2 {
                    continue;
                }
                let t = tau_planar_polygon(n, p).unwrap().to_f64().unwrap();
                sum += t * pa.lambda.powi(v as i32);
            }
            assert!((pa.w(p as usize) - sum).abs() < 1e-6, "p = {p}");
            assert!(sum <= pa.w(p as usize) * (1.0 + 1e-12));
        }
    }
}

//! Exact rational coefficients of the altitude power series.
//!
//! `kappa(s, k)` multiplies `(-h)^s T^(k-1) E^(s/2) / (T - c^2 E)^(k+1/2)` in the
//! expansion of the longitude integrand. Two closed forms are provided and
//! must agree everywhere: a finite binomial sum and a Jacobi-polynomial form.

use crate::error::{GeoError, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Generalized binomial coefficient `C(top, j)` by the product formula.
pub fn binom_rational(top: &BigRational, j: u32) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..j {
        acc *= top - BigRational::from_integer(BigInt::from(i));
        acc /= BigRational::from_integer(BigInt::from(i + 1));
    }
    acc
}

/// `C(-1/2, k)`.
pub fn binom_minus_half(k: u32) -> BigRational {
    binom_rational(&rat(-1, 2), k)
}

fn binom_int(n: i64, j: i64) -> BigRational {
    if j < 0 {
        return BigRational::zero();
    }
    binom_rational(&BigRational::from_integer(BigInt::from(n)), j as u32)
}

fn check_indices(s: u32, k: u32) -> Result<()> {
    if k > s {
        return Err(GeoError::Index(format!(
            "kappa needs 0 <= k <= s, got s = {s}, k = {k}"
        )));
    }
    Ok(())
}

/// Finite-sum form `4^k C(-1/2,k) sum_{l=k}^{min(2k,s)} C(k, l-k) (-1/2)^l`.
pub fn kappa_direct(s: u32, k: u32) -> Result<BigRational> {
    check_indices(s, k)?;
    let mut sum = BigRational::zero();
    let minus_half = rat(-1, 2);
    for l in k..=(2 * k).min(s) {
        let term = binom_int(k as i64, (l - k) as i64) * num_traits::pow(minus_half.clone(), l as usize);
        sum += term;
    }
    let four_k = BigRational::from_integer(num_traits::pow(BigInt::from(4), k as usize));
    Ok(four_k * binom_minus_half(k) * sum)
}

/// Jacobi polynomial `P_n^(alpha, beta)(0)` from its finite hypergeometric sum.
///
/// Integer parameters of either sign are admitted; binomials with negative
/// upper index follow the product formula.
pub fn jacobi_at_zero(n: u32, alpha: i64, beta: i64) -> BigRational {
    let n_i = n as i64;
    let mut sum = BigRational::zero();
    for j in 0..=n_i {
        let term = binom_int(n_i + alpha, n_i - j) * binom_int(n_i + beta, j);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum / BigRational::from_integer(num_traits::pow(BigInt::from(2), n as usize))
}

/// Closed form with the Jacobi polynomial; the polynomial term is absent when `2k - s - 1 < 0`.
pub fn kappa_jacobi(s: u32, k: u32) -> Result<BigRational> {
    check_indices(s, k)?;
    let bh = binom_minus_half(k);
    let sign_k = if k % 2 == 0 { BigRational::one() } else { -BigRational::one() };
    let mut value = sign_k * &bh;
    let degree = 2 * k as i64 - s as i64 - 1;
    if degree >= 0 {
        let sign_s = if s % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        let pow2 = BigRational::from_integer(num_traits::pow(BigInt::from(2), degree as usize));
        let p = jacobi_at_zero(degree as u32, 1 + s as i64 - k as i64, -(k as i64));
        value += sign_s * pow2 * bh * p;
    }
    Ok(value)
}

/// Triangular table of `kappa(s, k)` for `0 <= k <= s <= s_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaTable {
    rows: Vec<Vec<BigRational>>,
}

impl KappaTable {
    pub fn s_max(&self) -> u32 {
        (self.rows.len() - 1) as u32
    }

    pub fn get(&self, s: u32, k: u32) -> Option<&BigRational> {
        self.rows.get(s as usize)?.get(k as usize)
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Entries in row-major order as `(s, k, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &BigRational)> {
        self.rows.iter().enumerate().flat_map(|(s, row)| {
            row.iter()
                .enumerate()
                .map(move |(k, v)| (s as u32, k as u32, v))
        })
    }

    /// Floating-point copy, rounded once per entry.
    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }
}

pub fn kappa_table(s_max: u32) -> KappaTable {
    let rows = (0..=s_max)
        .map(|s| {
            (0..=s)
                .map(|k| {
                    let v = kappa_direct(s, k).expect("indices in range");
                    debug_assert_eq!(v, kappa_jacobi(s, k).expect("indices in range"));
                    v
                })
                .collect()
        })
        .collect();
    KappaTable { rows }
}

/// `sum_{i=0}^{min(k, s-k)} C(k, i) 2^(k-i) (-1)^(k+i)` in exact integers.
fn kappa_integer_sum(s: u32, k: u32) -> i128 {
    let mut c: i128 = 1;
    let mut sum: i128 = 0;
    for i in 0..=k.min(s - k) {
        let term = c << (k - i);
        sum += if (k + i) % 2 == 0 { term } else { -term };
        c = c * (k - i) as i128 / (i + 1) as i128;
    }
    sum
}

/// Shared floating-point coefficients for the series evaluators, each rounded once.
pub(crate) fn kappa_f64() -> &'static [Vec<f64>] {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let s_max = crate::model::MAX_ORDER as u32 + 1;
        let bh: Vec<f64> = (0..=s_max).map(binom_minus_half_f64).collect();
        (0..=s_max)
            .map(|s| {
                (0..=s)
                    .map(|k| bh[k as usize] * kappa_integer_sum(s, k) as f64)
                    .collect()
            })
            .collect()
    })
}

/// `C(-1/2, k)` as a float, exact for the orders used here.
pub(crate) fn binom_minus_half_f64(k: u32) -> f64 {
    binom_minus_half(k).to_f64().unwrap_or(f64::NAN)
}

/// Numerator and denominator of a reduced rational, sign on the numerator.
pub fn parts(v: &BigRational) -> (BigInt, BigInt) {
    let (n, d) = (v.numer().clone(), v.denom().clone());
    if d.is_negative() {
        (-n, -d)
    } else {
        (n, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selected_entries() {
        assert_eq!(kappa_direct(2, 2).unwrap(), rat(3, 2));
        assert_eq!(kappa_direct(4, 3).unwrap(), rat(-5, 4));
        assert_eq!(kappa_direct(9, 9).unwrap(), rat(12155, 128));
        assert_eq!(kappa_jacobi(3, 2).unwrap(), rat(0, 1));
        assert_eq!(kappa_jacobi(5, 4).unwrap(), rat(-35, 8));
        assert_eq!(kappa_direct(8, 4).unwrap(), rat(35, 128));
    }

    #[test]
    fn lower_columns_reduce_to_single_binomial() {
        for s in 0..14u32 {
            for k in 0..=s / 2 {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let expect = binom_minus_half(k) * rat(sign, 1);
                assert_eq!(kappa_jacobi(s, k).unwrap(), expect, "s={s} k={k}");
            }
        }
    }

    #[test]
    fn index_errors() {
        assert!(matches!(kappa_direct(2, 3), Err(GeoError::Index(_))));
        assert!(kappa_jacobi(0, 1).is_err());
    }

    #[test]
    fn trivial_table() {
        let t = kappa_table(0);
        assert_eq!(t.len(), 1);
        assert_eq!(t.get(0, 0), Some(&rat(1, 1)));
    }

    #[test]
    fn columns_become_constant() {
        let t = kappa_table(12);
        for k in 0..=6u32 {
            for s in 2 * k..=12 {
                assert_eq!(t.get(s, k), t.get(2 * k, k), "s={s} k={k}");
            }
        }
    }

    #[test]
    fn jacobi_small_degrees() {
        // P_0 = 1, P_1^(a,b)(0) = (a - b)/2
        assert_eq!(jacobi_at_zero(0, 3, -2), rat(1, 1));
        assert_eq!(jacobi_at_zero(1, 1, -2), rat(3, 2));
        assert_eq!(jacobi_at_zero(1, 4, 1), rat(3, 2));
    }

    #[test]
    fn float_table_matches_exact_values() {
        let t = kappa_table(MAX_CHECK);
        let f = kappa_f64();
        for (s, k, v) in t.iter() {
            let want = v.to_f64().unwrap();
            let got = f[s as usize][k as usize];
            assert!((got - want).abs() <= 4.0 * f64::EPSILON * want.abs(), "s={s} k={k}");
        }
    }

    const MAX_CHECK: u32 = 24;

    #[test]
    fn parts_keep_sign_on_numerator() {
        let (n, d) = parts(&rat(-19305, 128));
        assert_eq!(n, BigInt::from(-19305));
        assert_eq!(d, BigInt::from(128));
    }
}

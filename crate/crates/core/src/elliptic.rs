//! Incomplete Legendre elliptic integrals through Carlson's symmetric forms.
//!
//! Conventions: `k` is the modulus (not the parameter `m = k^2`) and the
//! third kind is
//!
//! ```text
//! Pi(xi, n, k) = int_0^xi dt / ((1 - n sin^2 t) sqrt(1 - k^2 sin^2 t))
//! ```
//!
//! All duplication loops stop once the Taylor remainder is below
//! [`TOLERANCE`] relative.

use crate::error::{GeoError, Result};
use std::f64::consts::FRAC_PI_2;

/// Relative truncation tolerance of the duplication iterations.
pub const TOLERANCE: f64 = 1e-16;

const MAX_DUPLICATIONS: usize = 200;

/// Carlson's integral of the first kind, `R_F(x, y, z)`.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || z < 0.0 || !(x + y + z).is_finite() {
        return Err(GeoError::domain(format!(
            "R_F needs nonnegative finite arguments, got ({x}, {y}, {z})"
        )));
    }
    if [x, y, z].iter().filter(|v| **v == 0.0).count() > 1 {
        return Err(GeoError::domain("R_F admits at most one zero argument"));
    }
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let q = (3.0 * TOLERANCE).powf(-1.0 / 6.0) * max_dev(a0, &[x, y, z]);
    let mut a = a0;
    let mut scale = 1.0;
    for _ in 0..MAX_DUPLICATIONS {
        if q * scale < a.abs() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let xx = (a - x) / a;
    let yy = (a - y) / a;
    let zz = -(xx + yy);
    let e2 = xx * yy - zz * zz;
    let e3 = xx * yy * zz;
    Ok((1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt())
}

fn max_dev(a: f64, vals: &[f64]) -> f64 {
    vals.iter().map(|v| (a - v).abs()).fold(0.0, f64::max)
}

/// `R_C(1, 1 + t)`.
fn rc_one(t: f64) -> f64 {
    if t.abs() < 1e-3 {
        // atan(sqrt t)/sqrt t = 1 - t/3 + t^2/5 - t^3/7 + ...
        let mut sum = 0.0;
        let mut pow = 1.0;
        for j in 0..12 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * pow / (2 * j + 1) as f64;
            pow *= t;
        }
        sum
    } else if t > 0.0 {
        let r = t.sqrt();
        r.atan() / r
    } else {
        let r = (-t).sqrt();
        r.atanh() / r
    }
}

/// Carlson's integral of the second kind, `R_D(x, y, z)`, symmetric in `x` and `y`.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || !(z > 0.0) || !(x + y + z).is_finite() {
        return Err(GeoError::domain(format!(
            "R_D needs x, y >= 0 and z > 0, got ({x}, {y}, {z})"
        )));
    }
    if x == 0.0 && y == 0.0 {
        return Err(GeoError::domain("R_D admits at most one zero among x, y"));
    }
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + 3.0 * z) / 5.0;
    let q = (0.25 * TOLERANCE).powf(-1.0 / 6.0) * max_dev(a0, &[x, y, z]);
    let mut a = a0;
    let mut scale = 1.0;
    let mut sum = 0.0;
    for _ in 0..MAX_DUPLICATIONS {
        if q * scale < a.abs() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        sum += scale / (sz * (z + lambda));
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
    }
    let xx = (a - x) / a;
    let yy = (a - y) / a;
    let zz = -(xx + yy) / 3.0;
    let xy = xx * yy;
    let z2 = zz * zz;
    let e2 = xy - 6.0 * z2;
    let e3 = (3.0 * xy - 8.0 * z2) * zz;
    let e4 = 3.0 * (xy - z2) * z2;
    let e5 = xy * z2 * zz;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    Ok(scale * series / (a * a.sqrt()) + 3.0 * sum)
}

/// Carlson's integral of the third kind, `R_J(x, y, z, p)` for `p > 0`, symmetric in `x, y, z`.
pub fn carlson_rj(x: f64, y: f64, z: f64, p: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || z < 0.0 || !(p > 0.0) || !(x + y + z + p).is_finite() {
        return Err(GeoError::domain(format!(
            "R_J needs x, y, z >= 0 and p > 0, got ({x}, {y}, {z}, {p})"
        )));
    }
    if [x, y, z].iter().filter(|v| **v == 0.0).count() > 1 {
        return Err(GeoError::domain("R_J admits at most one zero among x, y, z"));
    }
    let (mut x, mut y, mut z, mut p) = (x, y, z, p);
    let a0 = (x + y + z + 2.0 * p) / 5.0;
    let delta = (p - x) * (p - y) * (p - z);
    let q = (0.25 * TOLERANCE).powf(-1.0 / 6.0) * max_dev(a0, &[x, y, z, p]);
    let mut a = a0;
    let mut scale = 1.0;
    let mut scale3 = 1.0;
    let mut sum = 0.0;
    for _ in 0..MAX_DUPLICATIONS {
        if q * scale < a.abs() {
            break;
        }
        let (sx, sy, sz, sp) = (x.sqrt(), y.sqrt(), z.sqrt(), p.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        let d = (sp + sx) * (sp + sy) * (sp + sz);
        let e = scale3 * delta / (d * d);
        sum += scale * rc_one(e) / d;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        p = 0.25 * (p + lambda);
        a = 0.25 * (a + lambda);
        scale *= 0.25;
        scale3 *= 1.0 / 64.0;
    }
    let xx = (a - x) / a;
    let yy = (a - y) / a;
    let zz = (a - z) / a;
    let pp = -(xx + yy + zz) / 2.0;
    let e2 = xx * yy + xx * zz + yy * zz - 3.0 * pp * pp;
    let e3 = xx * yy * zz + 2.0 * e2 * pp + 4.0 * pp * pp * pp;
    let e4 = (2.0 * xx * yy * zz + e2 * pp + 3.0 * pp * pp * pp) * pp;
    let e5 = xx * yy * zz * pp * pp;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    Ok(scale * series / (a * a.sqrt()) + 6.0 * sum)
}

fn check_amplitude(xi: f64, k: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2 + 4.0 * f64::EPSILON).contains(&xi) {
        return Err(GeoError::domain(format!(
            "amplitude must satisfy 0 <= xi <= pi/2, got {xi}"
        )));
    }
    if !(0.0..1.0).contains(&k) {
        return Err(GeoError::domain(format!(
            "modulus must satisfy 0 <= k < 1, got {k}"
        )));
    }
    Ok(())
}

/// `(sin, cos^2, 1 - k^2 sin^2)` for the Carlson reductions.
fn reduction_args(xi: f64, k: f64) -> (f64, f64, f64) {
    let (s, c) = xi.sin_cos();
    let ks = k * s;
    (s, c * c, (1.0 - ks) * (1.0 + ks))
}

/// Incomplete elliptic integral of the first kind `F(xi, k)`.
pub fn ellip_f(xi: f64, k: f64) -> Result<f64> {
    check_amplitude(xi, k)?;
    if xi == 0.0 {
        return Ok(0.0);
    }
    let (s, c2, d2) = reduction_args(xi, k);
    Ok(s * carlson_rf(c2, d2, 1.0)?)
}

/// Incomplete elliptic integral of the second kind `E(xi, k)`.
pub fn ellip_e(xi: f64, k: f64) -> Result<f64> {
    check_amplitude(xi, k)?;
    if xi == 0.0 {
        return Ok(0.0);
    }
    let (s, c2, d2) = reduction_args(xi, k);
    let rf = carlson_rf(c2, d2, 1.0)?;
    if k == 0.0 {
        return Ok(s * rf);
    }
    let rd = carlson_rd(c2, d2, 1.0)?;
    Ok(s * rf - k * k * s * s * s * rd / 3.0)
}

/// `F(xi, k) - E(xi, k)` without subtracting the two integrals.
///
/// Stays accurate as `k -> 0`, where the difference is `O(k^2)`.
pub fn ellip_f_minus_e(xi: f64, k: f64) -> Result<f64> {
    check_amplitude(xi, k)?;
    if xi == 0.0 || k == 0.0 {
        return Ok(0.0);
    }
    let (s, c2, d2) = reduction_args(xi, k);
    Ok(k * k * s * s * s * carlson_rd(c2, d2, 1.0)? / 3.0)
}

/// Incomplete elliptic integral of the third kind `Pi(xi, n, k)`.
pub fn ellip_pi(xi: f64, n: f64, k: f64) -> Result<f64> {
    check_amplitude(xi, k)?;
    if xi == 0.0 {
        return Ok(0.0);
    }
    let (s, c2, d2) = reduction_args(xi, k);
    let p = 1.0 - n * s * s;
    if !(p > 0.0) {
        return Err(GeoError::domain(format!(
            "characteristic must satisfy n sin^2(xi) < 1, got n = {n}, xi = {xi}"
        )));
    }
    let rf = carlson_rf(c2, d2, 1.0)?;
    if n == 0.0 {
        return Ok(s * rf);
    }
    Ok(s * rf + n * s * s * s * carlson_rj(c2, d2, 1.0, p)? / 3.0)
}

/// Legendre integrals at the amplitude with `sin(xi) = s`, `cos^2(xi) = c2`.
///
/// Callers that know `cos^2` more accurately than `1 - s^2` use this entry.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LegendreAt {
    pub f: f64,
    pub e: f64,
    pub f_minus_e: f64,
}

pub(crate) fn legendre_at(s: f64, c2: f64, k: f64) -> Result<LegendreAt> {
    if s == 0.0 {
        return Ok(LegendreAt { f: 0.0, e: 0.0, f_minus_e: 0.0 });
    }
    let ks = k * s;
    let d2 = (1.0 - ks) * (1.0 + ks);
    let f = s * carlson_rf(c2, d2, 1.0)?;
    let f_minus_e = if k == 0.0 {
        0.0
    } else {
        k * k * s * s * s * carlson_rd(c2, d2, 1.0)? / 3.0
    };
    Ok(LegendreAt { f, e: f - f_minus_e, f_minus_e })
}

/// `Pi` at the amplitude with `sin(xi) = s`, `cos^2(xi) = c2`, given `p = 1 - n s^2 > 0`.
pub(crate) fn pi_at(s: f64, c2: f64, n: f64, p: f64, k: f64) -> Result<f64> {
    if s == 0.0 {
        return Ok(0.0);
    }
    let ks = k * s;
    let d2 = (1.0 - ks) * (1.0 + ks);
    let rf = carlson_rf(c2, d2, 1.0)?;
    if n == 0.0 {
        return Ok(s * rf);
    }
    Ok(s * rf + n * s * s * s * carlson_rj(c2, d2, 1.0, p)? / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rf_symmetric_point() {
        for x in [0.3, 1.0, 7.5] {
            let v = carlson_rf(x, x, x).unwrap();
            assert!((v * x.sqrt() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rf_zero_modulus_complete() {
        let v = carlson_rf(0.0, 1.0, 1.0).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn rd_and_rj_symmetric_points() {
        for x in [0.25_f64, 1.0, 3.0] {
            let expect = x.powf(-1.5);
            assert!((carlson_rd(x, x, x).unwrap() / expect - 1.0).abs() < 1e-15);
            assert!((carlson_rj(x, x, x, x).unwrap() / expect - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn carlson_symmetry() {
        let (x, y, z, p) = (0.7, 2.1, 0.3, 1.4);
        let rf = carlson_rf(x, y, z).unwrap();
        assert!((carlson_rf(z, x, y).unwrap() - rf).abs() < 1e-15);
        assert!((carlson_rf(y, z, x).unwrap() - rf).abs() < 1e-15);
        let rd = carlson_rd(x, y, z).unwrap();
        assert!((carlson_rd(y, x, z).unwrap() - rd).abs() < 1e-14);
        let rj = carlson_rj(x, y, z, p).unwrap();
        assert!((carlson_rj(z, y, x, p).unwrap() - rj).abs() < 1e-14);
        assert!((carlson_rj(y, z, x, p).unwrap() - rj).abs() < 1e-14);
    }

    #[test]
    fn carlson_domain_errors() {
        assert!(carlson_rf(-1.0, 1.0, 1.0).is_err());
        assert!(carlson_rf(0.0, 0.0, 1.0).is_err());
        assert!(carlson_rd(1.0, 1.0, 0.0).is_err());
        assert!(carlson_rj(1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn zero_modulus_reduces_to_amplitude() {
        assert_eq!(ellip_f(0.7, 0.0).unwrap(), 0.7);
        assert!((ellip_e(0.7, 0.0).unwrap() - 0.7).abs() < 1e-16);
        assert_eq!(ellip_f_minus_e(0.7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn zero_characteristic_is_first_kind() {
        for (xi, k) in [(0.3, 0.1), (1.2, 0.8), (1.5, 0.005)] {
            let pi = ellip_pi(xi, 0.0, k).unwrap();
            let f = ellip_f(xi, k).unwrap();
            assert!((pi - f).abs() < 1e-15);
        }
    }

    #[test]
    fn legendre_relation() {
        // E K' + E' K - K K' = pi / 2
        for k in [0.1_f64, 0.5, 0.8, 0.95] {
            let kp = (1.0 - k * k).sqrt();
            let (kk, ee) = (ellip_f(FRAC_PI_2, k).unwrap(), ellip_e(FRAC_PI_2, k).unwrap());
            let (kkp, eep) = (
                ellip_f(FRAC_PI_2, kp).unwrap(),
                ellip_e(FRAC_PI_2, kp).unwrap(),
            );
            let lhs = ee * kkp + eep * kk - kk * kkp;
            assert!((lhs - PI / 2.0).abs() < 1e-12, "k = {k}: {lhs}");
        }
    }

    #[test]
    fn first_kind_derivative() {
        let (xi, k, step) = (0.9, 0.6, 1e-5);
        let fd = (ellip_f(xi + step, k).unwrap() - ellip_f(xi - step, k).unwrap()) / (2.0 * step);
        let s = xi.sin();
        let exact = 1.0 / (1.0 - k * k * s * s).sqrt();
        assert!((fd - exact).abs() < 1e-8);
    }

    #[test]
    fn pole_is_rejected() {
        assert!(ellip_pi(FRAC_PI_2, 1.0, 0.1).is_err());
        assert!(ellip_f(2.0, 0.1).is_err());
        assert!(ellip_f(1.0, 1.0).is_err());
    }
}

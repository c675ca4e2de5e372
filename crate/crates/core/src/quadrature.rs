//! Adaptive Gauss-Kronrod quadrature of the raw geodesic integrands.
//!
//! This is the reference the series evaluators are tested against. It works
//! directly in `tau` on the unreduced integrands, with the prime-vertical
//! radius `N = 1/sqrt(1 - e^2 tau^2)` and the meridional radius
//! `M = (1 - e^2) N^3` written out.

use crate::error::{GeoError, Result};
use crate::model::{Ellipsoid, GeodesicSpec, IntegralContext};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Tolerances and subdivision cap of the adaptive rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_subdivisions: 4000,
        }
    }
}

impl Quadrature {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && rel_tol > 0.0) || max_subdivisions == 0 {
            return Err(GeoError::domain(format!(
                "quadrature tolerances must be positive, got abs = {abs_tol}, rel = {rel_tol}"
            )));
        }
        Ok(Quadrature {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }
}

struct Piece {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Piece {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Piece {
        lo,
        hi,
        value: kronrod * half,
        err: ((kronrod - gauss) * half).abs(),
    }
}

/// Integral of `f` over `[lo, hi]` with its error estimate.
///
/// Intervals are bisected globally, the one with the largest local error
/// first, until the summed estimate meets `max(abs_tol, rel_tol |value|)`.
pub fn adaptive_quad<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, q: &Quadrature) -> Result<(f64, f64)> {
    if lo == hi {
        return Ok((0.0, 0.0));
    }
    let first = kronrod21(&f, lo, hi);
    let mut value = first.value;
    let mut err = first.err;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 1;
    while err > q.abs_tol.max(q.rel_tol * value.abs()) {
        if !value.is_finite() {
            return Err(GeoError::Quadrature {
                subdivisions,
                value,
                err_estimate: err,
            });
        }
        if subdivisions >= q.max_subdivisions {
            return Err(GeoError::Quadrature {
                subdivisions,
                value,
                err_estimate: err,
            });
        }
        let worst = heap.pop().expect("heap holds every piece");
        let mid = 0.5 * (worst.lo + worst.hi);
        let left = kronrod21(&f, worst.lo, mid);
        let right = kronrod21(&f, mid, worst.hi);
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        // the running sums drift; resum occasionally
        if subdivisions % 64 == 0 {
            value = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.err).sum();
        }
    }
    let value = heap.iter().map(|p| p.value).sum();
    Ok((value, err))
}

fn radii(e2: f64, tau: f64) -> (f64, f64, f64) {
    let e_sub = 1.0 - e2 * tau * tau;
    let n = 1.0 / e_sub.sqrt();
    let m = (1.0 - e2) * n * n * n;
    (e_sub, n, m)
}

/// Longitude difference by direct quadrature of `c (M + h) / ((N + h)^2 cos^2 phi sqrt(cos^2 phi - c^2/(N + h)^2))`.
pub fn quad_longitude(ellipsoid: &Ellipsoid, spec: &GeodesicSpec, q: &Quadrature) -> Result<(f64, f64)> {
    spec.validate(ellipsoid.e())?;
    let e2 = ellipsoid.e() * ellipsoid.e();
    let (h, c) = (spec.h, spec.c);
    let f = |tau: f64| {
        let (_, n, m) = radii(e2, tau);
        let t = (1.0 - tau) * (1.0 + tau);
        let nh = n + h;
        c * (h + m) / (nh * nh * t * (t - c * c / (nh * nh)).sqrt())
    };
    adaptive_quad(f, spec.tau0, spec.tau1, q)
}

/// Arc length by direct quadrature of `(M + h) / sqrt(cos^2 phi - c^2/(N + h)^2)`.
pub fn quad_distance(ellipsoid: &Ellipsoid, spec: &GeodesicSpec, q: &Quadrature) -> Result<(f64, f64)> {
    spec.validate(ellipsoid.e())?;
    let e2 = ellipsoid.e() * ellipsoid.e();
    let (h, c) = (spec.h, spec.c);
    let f = |tau: f64| {
        let (e_sub, n, _) = radii(e2, tau);
        let t = (1.0 - tau) * (1.0 + tau);
        let nh = n + h;
        (h * e_sub + n * (1.0 - e2)) / (e_sub * (t - c * c / (nh * nh)).sqrt())
    };
    adaptive_quad(f, spec.tau0, spec.tau1, q)
}

/// `I(beta, k)` from 0 to `tau` by quadrature of
/// `(1 - tau^2)^(k-1) (1 - e^2 tau^2)^beta / (1 - tau^2 - c^2 (1 - e^2 tau^2))^(k+1/2)`.
pub fn quad_family(two_beta: i32, k: u32, tau: f64, ctx: &IntegralContext, q: &Quadrature) -> Result<(f64, f64)> {
    if !(tau.abs() < ctx.bp.b) {
        return Err(GeoError::Singularity {
            tau: tau.abs(),
            b: ctx.bp.b,
        });
    }
    let (e2, c2) = (ctx.e2, ctx.c * ctx.c);
    let beta = two_beta as f64 / 2.0;
    let f = |x: f64| {
        let t = (1.0 - x) * (1.0 + x);
        let e_sub = 1.0 - e2 * x * x;
        t.powi(k as i32 - 1) * e_sub.powf(beta) / (t - c2 * e_sub).powf(k as f64 + 0.5)
    };
    adaptive_quad(f, 0.0, tau, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let q = Quadrature::default();
        let (v, _) = adaptive_quad(|_| 1.0, 0.0, 1.0, &q).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        let (v, _) = adaptive_quad(|x| x, 0.0, 1.0, &q).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn arcsine_primitive() {
        let q = Quadrature::default();
        let (v, err) = adaptive_quad(|x| 1.0 / (1.0 - x * x).sqrt(), 0.0, 0.9, &q).unwrap();
        assert!((v - 0.9f64.asin()).abs() < 1e-13);
        assert!(err < 1e-12);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let q = Quadrature::default();
        let (v, _) = adaptive_quad(|x| x.exp(), 1.0, 0.0, &q).unwrap();
        assert!((v + (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn singular_integrand_hits_the_cap() {
        let q = Quadrature::new(1e-14, 1e-14, 50).unwrap();
        let r = adaptive_quad(|x| 1.0 / x, 0.0, 1.0, &q);
        assert!(matches!(r, Err(GeoError::Quadrature { .. })));
    }

    #[test]
    fn equal_limits_give_zero() {
        let ell = Ellipsoid::scaled(0.08182).unwrap();
        let spec = GeodesicSpec::new(0.01, 0.5, 0.3, 0.3);
        assert_eq!(quad_longitude(&ell, &spec, &Quadrature::default()).unwrap().0, 0.0);
        assert_eq!(quad_distance(&ell, &spec, &Quadrature::default()).unwrap().0, 0.0);
    }

    #[test]
    fn sphere_longitude_and_distance() {
        // on the unit sphere tan(dlambda) = c tau / sqrt(1 - c^2 - tau^2) and s = asin(tau / sqrt(1 - c^2))
        let ell = Ellipsoid::scaled(1e-9).unwrap();
        let c: f64 = 0.4;
        let tau: f64 = 0.6;
        let spec = GeodesicSpec::new(0.0, c, 0.0, tau);
        let q = Quadrature::default();
        let (lon, _) = quad_longitude(&ell, &spec, &q).unwrap();
        let expect = (c * tau / (1.0 - c * c - tau * tau).sqrt()).atan();
        assert!((lon - expect).abs() < 1e-12);
        let (dist, _) = quad_distance(&ell, &spec, &q).unwrap();
        assert!((dist - (tau / (1.0 - c * c).sqrt()).asin()).abs() < 1e-12);
    }
}

#![allow(dead_code)]

use geoline::elementary::{b_seq, j_int};
use geoline::elliptic_family::{a_seq, d_seq, jbar_beta0, jbar_halfint};
use geoline::model::IntegralContext;
use geoline::quadrature::{adaptive_quad, Quadrature};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const EARTH_E: f64 = 0.08182;

pub fn rel(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        (got - want).abs() / want.abs()
    }
}

pub fn tight() -> Quadrature {
    Quadrature::new(1e-15, 1e-14, 20_000).unwrap()
}

/// `|lhs - sum(rhs)| / (|lhs| + sum |rhs_i|)`.
pub fn residual(lhs: f64, rhs: &[f64]) -> f64 {
    let scale = lhs.abs() + rhs.iter().map(|x| x.abs()).sum::<f64>();
    let r = lhs - rhs.iter().sum::<f64>();
    if scale == 0.0 {
        r.abs()
    } else {
        r.abs() / scale
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Sample {
    pub e: f64,
    pub c: f64,
    pub tau: f64,
    pub two_beta: i32,
    pub k: u32,
}

/// A point strictly inside `b (1 - margin)` with `beta` in `1/2 ..= 9/2` and `k` in `1 ..= 5`.
pub fn sample(rng: &mut ChaCha8Rng, margin: f64) -> Sample {
    let e = rng.gen_range(0.01..0.6);
    let c = rng.gen_range(0.0..0.95);
    let ctx = IntegralContext::new(e, c).unwrap();
    let tau = rng.gen_range(0.05..1.0) * ctx.bp.b * (1.0 - margin);
    Sample {
        e,
        c,
        tau,
        two_beta: rng.gen_range(1..=9),
        k: rng.gen_range(1..=5),
    }
}

fn jfam(two_beta: i32, k: u32, tau: f64, ctx: &IntegralContext) -> f64 {
    if two_beta % 2 == 0 {
        assert!(two_beta >= 0);
        if k == 0 {
            return 0.0;
        }
        j_int((two_beta / 2) as u32, k, tau, ctx).unwrap()
    } else if k == 0 {
        jbar_beta0(two_beta, tau, ctx).unwrap()
    } else {
        jbar_halfint(two_beta, k, tau, ctx).unwrap()
    }
}

/// Residual of the partial-integration recurrence in `x = tau^2` linking
/// `J(beta, k)` to `J(beta, k +- 1)` and `J(beta - 1, k)`.
pub fn j_recurrence_residual(s: &Sample) -> f64 {
    let ctx = IntegralContext::new(s.e, s.c).unwrap();
    let (a2, b2) = (ctx.bp.a2, ctx.bp.b2);
    let x = s.tau * s.tau;
    let (beta, k) = (s.two_beta as f64 / 2.0, s.k as f64);
    let j = |tb: i32, kk: u32| jfam(tb, kk, s.tau, &ctx);
    let boundary = 2.0 * x.sqrt() * (1.0 - x).powf(k - 1.0) * (a2 - x).powf(beta) / (b2 - x).powf(k + 0.5);
    let lhs = (1.0 + 2.0 * beta + (2.0 * (k - 1.0) * b2 + 2.0 * k + 1.0) / (b2 - 1.0)) * j(s.two_beta, s.k);
    let lower_k = if s.k >= 2 { 2.0 * (k - 1.0) / (b2 - 1.0) * j(s.two_beta, s.k - 1) } else { 0.0 };
    let rhs = [
        boundary,
        lower_k,
        2.0 * a2 * beta * j(s.two_beta - 2, s.k),
        (2.0 * k + 1.0) * b2 / (b2 - 1.0) * j(s.two_beta, s.k + 1),
    ];
    residual(lhs, &rhs)
}

/// Worst residual of `(2v+1)(a^2-b^2) D_(2v+2) = (2v-1) b^2 D_(2v-2) + 2v(a^2-2b^2) D_2v + a sqrt(a^2-tau^2) tan(xi) / cos^2v(xi)`
/// for `v = 1 ..= v_max - 1`, with `D` both from the ladder and from quadrature of its defining integral.
pub fn d_ladder_residual(s: &Sample, v_max: usize) -> (f64, f64) {
    let ctx = IntegralContext::new(s.e, s.c).unwrap();
    let bp = &ctx.bp;
    let t = s.tau;
    let q = tight();
    let lad = d_seq(v_max, t, &ctx).unwrap();
    let quad: Vec<f64> = (0..=v_max)
        .map(|v| {
            let g = |u: f64| 1.0 / (((bp.a2 - u * u) * (bp.b2 - u * u)).sqrt() * (bp.b2 - u * u).powi(v as i32));
            bp.a * bp.b2.powi(v as i32) * adaptive_quad(g, 0.0, t, &q).unwrap().0
        })
        .collect();
    let cos2 = (bp.b2 - t * t) / bp.b2;
    let tan = t / (bp.b2 - t * t).sqrt();
    let check = |d: &[f64]| {
        (1..v_max)
            .map(|v| {
                let fv = v as f64;
                let lhs = (2.0 * fv + 1.0) * bp.a2_minus_b2 * d[v + 1];
                let rhs = [
                    (2.0 * fv - 1.0) * bp.b2 * d[v - 1],
                    2.0 * fv * (bp.a2 - 2.0 * bp.b2) * d[v],
                    bp.a * (bp.a2 - t * t).sqrt() * tan / cos2.powi(v as i32),
                ];
                residual(lhs, &rhs)
            })
            .fold(0.0, f64::max)
    };
    let defining = lad.iter().zip(&quad).map(|(l, q)| rel(*l, *q)).fold(0.0, f64::max);
    (check(&lad).max(check(&quad)), defining)
}

/// Worst residual of `(2l+1) X_(l+1) = a tau^(2l-1) sqrt((a^2-tau^2)(b^2-tau^2)) + 2l(a^2+b^2) X_l - (2l-1) a^2 b^2 X_(l-1)`
/// with `X_l = b^2l A_2l`, plus the worst mismatch against quadrature of the moments.
pub fn a_ladder_residual(s: &Sample, l_max: usize) -> (f64, f64) {
    let ctx = IntegralContext::new(s.e, s.c).unwrap();
    let bp = &ctx.bp;
    let t = s.tau;
    let q = tight();
    let x = a_seq(l_max, t, &ctx).unwrap();
    let k2 = bp.modulus * bp.modulus;
    let xi = (t / bp.b).asin();
    let defining = (0..=l_max)
        .map(|l| {
            let g = |th: f64| th.sin().powi(2 * l as i32) / (1.0 - k2 * th.sin().powi(2)).sqrt();
            rel(x[l], bp.b2.powi(l as i32) * adaptive_quad(g, 0.0, xi, &q).unwrap().0)
        })
        .fold(0.0, f64::max);
    let root = ((bp.a2 - t * t) * (bp.b2 - t * t)).sqrt();
    let rec = (1..l_max)
        .map(|l| {
            let fl = l as f64;
            let lhs = (2.0 * fl + 1.0) * x[l + 1];
            let rhs = [
                bp.a * t.powi(2 * l as i32 - 1) * root,
                2.0 * fl * (bp.a2 + bp.b2) * x[l],
                -(2.0 * fl - 1.0) * bp.a2 * bp.b2 * x[l - 1],
            ];
            residual(lhs, &rhs)
        })
        .fold(0.0, f64::max);
    (rec, defining)
}

/// Worst residual of `B_i = tau/(2i) (b^2 - tau^2)^(i-1/2) + (1 - 1/(2i)) b^2 B_(i-1)`, plus the quadrature mismatch.
pub fn b_ladder_residual(s: &Sample, i_max: u32) -> (f64, f64) {
    let ctx = IntegralContext::new(s.e, s.c).unwrap();
    let b = ctx.bp.b;
    let t = s.tau;
    let q = tight();
    let seq = b_seq(i_max, b, t);
    let rad = b * b - t * t;
    let rec = (1..=i_max as usize)
        .map(|i| {
            let fi = i as f64;
            residual(
                seq[i],
                &[t / (2.0 * fi) * rad.powf(fi - 0.5), (1.0 - 0.5 / fi) * b * b * seq[i - 1]],
            )
        })
        .fold(0.0, f64::max);
    let defining = (0..=i_max as usize)
        .map(|i| {
            let g = |u: f64| (b * b - u * u).powf(i as f64 - 0.5);
            rel(seq[i], adaptive_quad(g, 0.0, t, &q).unwrap().0)
        })
        .fold(0.0, f64::max);
    (rec, defining)
}

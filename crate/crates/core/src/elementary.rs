//! Members `I(beta, k)` with integer `beta >= 0`, all in elementary functions.
//!
//! With `x = tau^2` the integral becomes `J(beta, k)(x)`, the integral of
//! `(1 - x)^(k-1) (a^2 - x)^beta / (sqrt(x) (b^2 - x)^(k+1/2))`. The
//! substitution `z = 1/(b^2 - x)` turns it into a double binomial sum over
//! integrals of `z^t / sqrt(b^2 z - 1)`, with `t` between `-beta` and `k - 1`.
//! Every value below is a definite integral from 0; the primitives all vanish
//! at `z = 1/b^2`, so no constant has to be subtracted.

use crate::error::{GeoError, Result};
use crate::model::IntegralContext;
use std::f64::consts::PI;

/// Binomial coefficient `C(n, j)` in floating point; exact for the sizes used here.
pub(crate) fn binom(n: u32, j: u32) -> f64 {
    if j > n {
        return 0.0;
    }
    let j = j.min(n - j);
    let mut acc = 1.0;
    for i in 0..j {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// `atan(y sqrt(q)) / sqrt(q)`, continued to `y` at `q = 0`.
pub fn atan_over_sqrt(y: f64, q: f64) -> f64 {
    if q == 0.0 {
        return y;
    }
    let r = q.sqrt();
    (y * r).atan() / r
}

/// Antiderivative of `z^t / sqrt(coef z - 1)` that vanishes at `z = 1/coef`.
pub fn antider_zpow(t_exp: i32, coef: f64, z: f64) -> Result<f64> {
    let w = coef * z - 1.0;
    if !(w >= 0.0) || !(coef > 0.0) {
        return Err(GeoError::domain(format!(
            "z-power primitive needs coef z >= 1, got coef = {coef}, z = {z}"
        )));
    }
    let u = w.sqrt();
    Ok(primitive(t_exp, coef, z, u))
}

fn primitive(t_exp: i32, coef: f64, z: f64, u: f64) -> f64 {
    let u2 = u * u;
    if t_exp >= 0 {
        let t = t_exp as u32;
        let mut sum = 0.0;
        let mut up = 1.0;
        for l in 0..=t {
            sum += binom(t, l) * up / (2 * l + 1) as f64;
            up *= u2;
        }
        return 2.0 * u * sum / coef.powi(t_exp + 1);
    }
    // t = -(n + 1): Gamma-weighted sum plus the arctangent
    let n = (-t_exp - 1) as u32;
    let cz = coef * z;
    let mut sum = 0.0;
    let mut r = PI.sqrt();
    let mut czp = cz;
    for l in 0..n {
        sum += 1.0 / ((l as f64 + 0.5) * r * czp);
        r *= (l as f64 + 0.5) / (l + 1) as f64;
        czp *= cz;
    }
    coef.powi(n as i32) * r * (u * sum + 2.0 / PI.sqrt() * u.atan())
}

/// `J(beta, k)` from 0 to `x = tau^2` with `k >= 1`.
pub fn j_int(beta: u32, k: u32, tau: f64, ctx: &IntegralContext) -> Result<f64> {
    let bp = &ctx.bp;
    j_sum(beta, k, tau, ctx, |m| bp.a2_minus_b2.powi(m as i32))
}

/// Double sum over `C(k-1, s) C(beta, m) (1 - b^2)^s w(m)` of the z-power primitives.
fn j_sum(beta: u32, k: u32, tau: f64, ctx: &IntegralContext, weight: impl Fn(u32) -> f64) -> Result<f64> {
    if k == 0 {
        return Err(GeoError::Index("J(beta, k) needs k >= 1".into()));
    }
    let root = ctx.root_b(tau)?;
    if tau == 0.0 {
        return Ok(0.0);
    }
    let bp = &ctx.bp;
    let z = 1.0 / (root * root);
    let u = tau.abs() / root;
    let t_min = -(beta as i32);
    let prims: Vec<f64> = (t_min..=k as i32 - 1)
        .map(|t| primitive(t, bp.b2, z, u))
        .collect();
    let mut total = 0.0;
    let mut q = 1.0;
    for s in 0..k {
        for m in 0..=beta {
            let t = s as i32 + m as i32 - beta as i32;
            total += binom(k - 1, s) * binom(beta, m) * q * weight(m) * prims[(t - t_min) as usize];
        }
        q *= bp.one_minus_b2;
    }
    Ok(total)
}

/// `J(0, k)` at `x` by its single-sum form.
pub fn j0k(k: u32, x: f64, ctx: &IntegralContext) -> Result<f64> {
    if k == 0 {
        return Err(GeoError::Index("J(0, k) needs k >= 1".into()));
    }
    let bp = &ctx.bp;
    if !(x >= 0.0 && x < bp.b2) {
        return Err(GeoError::domain(format!(
            "J(0, k) needs 0 <= x < b^2 = {}, got x = {x}",
            bp.b2
        )));
    }
    let root = (bp.b2 - x).sqrt();
    let u = x.sqrt() / root;
    let w = bp.one_minus_b2 * u * u;
    let mut sum = 0.0;
    let mut wp = 1.0;
    for l in 0..k {
        sum += binom(k - 1, l) * wp / (2 * l + 1) as f64;
        wp *= w;
    }
    Ok(2.0 * u * sum / bp.b2.powi(k as i32))
}

/// `B_i`, the integrals of `(b^2 - tau^2)^(i - 1/2)` from 0 to `tau`, for `i = 0..=i_max`.
pub fn b_seq(i_max: u32, b: f64, tau: f64) -> Vec<f64> {
    let b2 = b * b;
    let rad = ((b - tau) * (b + tau)).max(0.0);
    let mut out = Vec::with_capacity(i_max as usize + 1);
    out.push((tau / b).clamp(-1.0, 1.0).asin());
    let mut pow = rad.sqrt();
    for i in 1..=i_max {
        let fi = i as f64;
        let prev = out[i as usize - 1];
        out.push(tau * pow / (2.0 * fi) + (1.0 - 1.0 / (2.0 * fi)) * b2 * prev);
        pow *= rad;
    }
    out
}

/// `I(beta, 0)` from 0 to `tau`.
///
/// Expands `(a^2 - tau^2)^beta` in powers of `1 - tau^2`; the `l = 0` term is
/// the arctangent integral of `1/((1 - tau^2) sqrt(b^2 - tau^2))` and the
/// others reduce to the `B_i`.
pub fn i_beta0_int(beta: u32, tau: f64, ctx: &IntegralContext) -> Result<f64> {
    let root = ctx.root_b(tau)?;
    if tau == 0.0 {
        return Ok(0.0);
    }
    let bp = &ctx.bp;
    let x = tau.abs();
    let one_minus_e2 = (1.0 - ctx.e) * (1.0 + ctx.e);
    let bs = b_seq(beta.saturating_sub(1), bp.b, x);
    // e^(2 beta) (a^2 - 1)^(beta - l) = e^(2l) (1 - e^2)^(beta - l)
    let mut total = one_minus_e2.powi(beta as i32) * atan_over_sqrt(x / root, bp.one_minus_b2);
    for l in 1..=beta {
        let mut inner = 0.0;
        for i in 0..l {
            inner += binom(l - 1, i) * bp.one_minus_b2.powi((l - 1 - i) as i32) * bs[i as usize];
        }
        total += binom(beta, l) * ctx.e2.powi(l as i32) * one_minus_e2.powi((beta - l) as i32) * inner;
    }
    Ok(tau.signum() * total / bp.prefactor_base.sqrt())
}

/// `I(beta, k)` from 0 to `tau` for integer `beta >= 0`.
pub fn i_int(beta: u32, k: u32, tau: f64, ctx: &IntegralContext) -> Result<f64> {
    if k == 0 {
        return i_beta0_int(beta, tau, ctx);
    }
    let bp = &ctx.bp;
    let one_minus_e2b2 = 1.0 - ctx.e2 * bp.b2;
    // e^(2 beta) (a^2 - b^2)^m = e^(2(beta - m)) (1 - e^2 b^2)^m
    let j = j_sum(beta, k, tau, ctx, |m| {
        ctx.e2.powi((beta - m) as i32) * one_minus_e2b2.powi(m as i32)
    })?;
    Ok(tau.signum() * 0.5 * j / bp.prefactor_base.powf(k as f64 + 0.5))
}

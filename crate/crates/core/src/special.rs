//! The three members below `beta = -1/2` needed by the arc-length series:
//! `I(-3/2, 0)`, `I(-1, 0)` and `I(-1, 1)`.
//!
//! Each follows from a partial-fraction split of `1/((1 - tau^2)(a^2 - tau^2))`
//! or `1/((a^2 - tau^2)(b^2 - tau^2))`. The common factor `a^2 / (a^2 - 1)` is
//! `1 / (1 - e^2)`.

use crate::elementary::atan_over_sqrt;
use crate::elliptic_family::EllipticLadder;
use crate::error::Result;
use crate::model::IntegralContext;

/// `atan((tau/a) sqrt((a^2 - b^2)/(b^2 - tau^2))) / (a sqrt(a^2 - b^2))`.
fn outer_atan(t: f64, root_b: f64, ctx: &IntegralContext) -> f64 {
    let bp = &ctx.bp;
    let r = bp.a2_minus_b2.sqrt();
    (t / bp.a * (r / root_b)).atan() / (bp.a * r)
}

/// `I(-3/2, 0)` from 0 to `tau`.
pub fn i_m32_0(tau: f64, ctx: &IntegralContext) -> Result<f64> {
    let root_b = ctx.root_b(tau)?;
    if tau == 0.0 {
        return Ok(0.0);
    }
    let lad = EllipticLadder::new(tau, ctx)?;
    Ok(tau.signum() * i_m32_0_at(&lad, root_b, ctx))
}

pub(crate) fn i_m32_0_at(lad: &EllipticLadder, root_b: f64, ctx: &IntegralContext) -> f64 {
    let bp = &ctx.bp;
    let t = lad.amp.tau;
    let one_minus_e2 = (1.0 - ctx.e) * (1.0 + ctx.e);
    let root_a = ((bp.a - t) * (bp.a + t)).sqrt();
    let inner = lad.e - t / bp.a * root_b / root_a;
    (lad.pi - inner / bp.a2_minus_b2) / (one_minus_e2 * bp.prefactor_base.sqrt())
}

/// `I(-1, 0)` from 0 to `tau`; the `c = 0` limit of the first arctangent is its argument.
pub fn i_m1_0(tau: f64, ctx: &IntegralContext) -> Result<f64> {
    let root_b = ctx.root_b(tau)?;
    if tau == 0.0 {
        return Ok(0.0);
    }
    let bp = &ctx.bp;
    let t = tau.abs();
    let one_minus_e2 = (1.0 - ctx.e) * (1.0 + ctx.e);
    let first = atan_over_sqrt(t / root_b, bp.one_minus_b2);
    let v = (first - outer_atan(t, root_b, ctx)) / (one_minus_e2 * bp.prefactor_base.sqrt());
    Ok(tau.signum() * v)
}

/// `I(-1, 1)` from 0 to `tau`.
pub fn i_m1_1(tau: f64, ctx: &IntegralContext) -> Result<f64> {
    let root_b = ctx.root_b(tau)?;
    if tau == 0.0 {
        return Ok(0.0);
    }
    let bp = &ctx.bp;
    let t = tau.abs();
    let inner = t / (bp.b2 * root_b) - outer_atan(t, root_b, ctx);
    // a^2 / (a^2 - b^2) = 1 / (1 - e^2 b^2)
    let v = inner / ((1.0 - ctx.e2 * bp.b2) * bp.prefactor_base.powf(1.5));
    Ok(tau.signum() * v)
}

//! Altitude power series for the longitude difference, the arc length and
//! the derivative of the longitude difference with respect to `c`.
//!
//! With `T = 1 - tau^2` and `E = 1 - e^2 tau^2`, every series term is a
//! multiple of
//!
//! ```text
//! I(beta, k) = integral of T^(k-1) E^beta / (T - c^2 E)^(k+1/2)
//! ```
//!
//! between the two latitude limits, evaluated as the difference of the values
//! from 0 at each limit.

use crate::elementary;
use crate::elliptic_family::{self, EllipticLadder};
use crate::error::{GeoError, Result};
use crate::kappa::{binom_minus_half_f64, kappa_f64};
use crate::model::{Ellipsoid, GeodesicSpec, IntegralContext};
use crate::special;
use std::collections::HashMap;
use std::fmt;

/// Ratio `|last term / first term|` above which a series is flagged as slowly converging.
pub const WARN_RATIO: f64 = 1e-3;

/// An integer or half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// `self + s/2`.
    pub fn add_halves(self, s: i32) -> Self {
        HalfInt(self.0 + s)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// `I(beta, k)` from 0 to `tau`, routed to the family that evaluates it.
pub fn i_beta_k(beta: HalfInt, k: u32, tau: f64, ctx: &IntegralContext) -> Result<f64> {
    let tb = beta.twice();
    match (tb, k) {
        (tb, _) if tb >= 0 && tb % 2 == 0 => elementary::i_int((tb / 2) as u32, k, tau, ctx),
        (tb, _) if tb >= -1 && tb % 2 != 0 => elliptic_family::i_halfint(tb, k, tau, ctx),
        (-3, 0) => special::i_m32_0(tau, ctx),
        (-2, 0) => special::i_m1_0(tau, ctx),
        (-2, 1) => special::i_m1_1(tau, ctx),
        _ => Err(GeoError::Unsupported { two_beta: tb, k }),
    }
}

/// Members `I(beta, k)` at one latitude, computed once and reused across orders.
pub struct PointIntegrals<'a> {
    ctx: &'a IntegralContext,
    tau: f64,
    ladder: Option<EllipticLadder>,
    cache: HashMap<(i32, u32), f64>,
}

impl<'a> PointIntegrals<'a> {
    pub fn new(tau: f64, ctx: &'a IntegralContext) -> Result<Self> {
        ctx.root_b(tau)?;
        Ok(PointIntegrals {
            ctx,
            tau,
            ladder: None,
            cache: HashMap::new(),
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn get(&mut self, beta: HalfInt, k: u32) -> Result<f64> {
        if self.tau == 0.0 {
            return Ok(0.0);
        }
        let key = (beta.twice(), k);
        if let Some(v) = self.cache.get(&key) {
            return Ok(self.tau.signum() * v);
        }
        let t = self.tau.abs();
        let tb = beta.twice();
        let v = if tb >= -1 && tb % 2 != 0 {
            if self.ladder.is_none() {
                self.ladder = Some(EllipticLadder::new(t, self.ctx)?);
            }
            let lad = self.ladder.as_mut().expect("ladder just built");
            elliptic_family::i_halfint_at(((tb + 1) / 2) as u32, k, lad, self.ctx)
        } else if (tb, k) == (-3, 0) {
            if self.ladder.is_none() {
                self.ladder = Some(EllipticLadder::new(t, self.ctx)?);
            }
            let lad = self.ladder.as_ref().expect("ladder just built");
            special::i_m32_0_at(lad, self.ctx.root_b(t)?, self.ctx)
        } else {
            i_beta_k(beta, k, t, self.ctx)?
        };
        self.cache.insert(key, v);
        Ok(self.tau.signum() * v)
    }
}

/// Differences of cached members between two latitudes.
pub struct Interval<'a> {
    lo: PointIntegrals<'a>,
    hi: PointIntegrals<'a>,
}

impl<'a> Interval<'a> {
    pub fn new(tau0: f64, tau1: f64, ctx: &'a IntegralContext) -> Result<Self> {
        Ok(Interval {
            lo: PointIntegrals::new(tau0, ctx)?,
            hi: PointIntegrals::new(tau1, ctx)?,
        })
    }

    pub fn member(&mut self, beta: HalfInt, k: u32) -> Result<f64> {
        if self.lo.tau() == self.hi.tau() {
            return Ok(0.0);
        }
        Ok(self.hi.get(beta, k)? - self.lo.get(beta, k)?)
    }
}

/// A truncated power series in `h` and its per-order contributions.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    /// Contribution of `h^j` for `j = 0 ..= orders_used`.
    pub terms: Vec<f64>,
    /// Magnitude of the last retained order; zero when `h = 0` ends the series exactly.
    pub trunc_estimate: f64,
    pub orders_used: usize,
    /// Set when `|last term / first term|` exceeds [`WARN_RATIO`].
    pub slow_convergence: bool,
}

impl IntegralResult {
    fn from_terms(terms: Vec<f64>, h: f64) -> Self {
        let value = terms.iter().sum();
        let last = *terms.last().expect("at least the surface term");
        let first = terms[0];
        let exact = h == 0.0 || terms.len() == 1;
        let trunc_estimate = if exact { 0.0 } else { last.abs() };
        let slow_convergence = !exact && {
            if first == 0.0 {
                last != 0.0
            } else {
                (last / first).abs() > WARN_RATIO
            }
        };
        IntegralResult {
            value,
            orders_used: terms.len() - 1,
            terms,
            trunc_estimate,
            slow_convergence,
        }
    }

    fn scaled(mut self, factor: f64) -> Self {
        self.value *= factor;
        self.trunc_estimate *= factor.abs();
        for t in &mut self.terms {
            *t *= factor;
        }
        self
    }
}

fn effective_order(spec: &GeodesicSpec) -> usize {
    if spec.h == 0.0 {
        0
    } else {
        spec.order
    }
}

fn check_context(spec: &GeodesicSpec, ctx: &IntegralContext) -> Result<()> {
    if spec.c != ctx.c {
        return Err(GeoError::domain(format!(
            "integral context built for c = {}, line has c = {}",
            ctx.c, spec.c
        )));
    }
    spec.validate(ctx.e)?;
    Ok(())
}

/// Raw per-order terms of `sum_s (-h)^s sum_k kappa(s, k) I(alpha + s/2, k)`, `s = 0 ..= order`.
fn i_alpha_terms(alpha: HalfInt, order: usize, h: f64, iv: &mut Interval) -> Result<Vec<f64>> {
    let kappa = kappa_f64();
    let mut terms = Vec::with_capacity(order + 1);
    let mut hp = 1.0;
    for s in 0..=order {
        let beta = alpha.add_halves(s as i32);
        let mut sum = 0.0;
        for k in 0..=s {
            let kap = kappa[s][k];
            if kap != 0.0 {
                sum += kap * iv.member(beta, k as u32)?;
            }
        }
        terms.push(hp * sum);
        hp *= -h;
    }
    Ok(terms)
}

/// `sum_s h^s sum_k C(-1/2, k) C(k, s-k) 2^(2k-s) [(1 - a^2) I(alpha+s/2, k) + a^2 I(alpha+1+s/2, k)]`.
fn s_alpha_terms(alpha: HalfInt, order: usize, h: f64, iv: &mut Interval, ctx: &IntegralContext) -> Result<Vec<f64>> {
    let a2 = ctx.bp.a2;
    let one_minus_a2 = -(1.0 - ctx.e2) * a2;
    let mut terms = Vec::with_capacity(order + 1);
    let mut hp = 1.0;
    for s in 0..=order {
        let beta = alpha.add_halves(s as i32);
        let mut sum = 0.0;
        for k in s.div_ceil(2)..=s {
            let w = binom_minus_half_f64(k as u32)
                * elementary::binom(k as u32, (s - k) as u32)
                * 2f64.powi(2 * k as i32 - s as i32);
            let lower = iv.member(beta, k as u32)?;
            let upper = iv.member(beta.add_halves(2), k as u32)?;
            sum += w * (one_minus_a2 * lower + a2 * upper);
        }
        terms.push(hp * sum);
        hp *= h;
    }
    Ok(terms)
}

/// `c d/dc` of the `I_alpha` series: `sum_s (-h)^s sum_k (2k+1) kappa(s, k) [I(beta, k+1) - I(beta, k)]`.
fn g_alpha_terms(alpha: HalfInt, order: usize, h: f64, iv: &mut Interval) -> Result<Vec<f64>> {
    let kappa = kappa_f64();
    let mut terms = Vec::with_capacity(order + 1);
    let mut hp = 1.0;
    for s in 0..=order {
        let beta = alpha.add_halves(s as i32);
        let mut sum = 0.0;
        for k in 0..=s {
            let kap = kappa[s][k];
            if kap != 0.0 {
                let diff = iv.member(beta, k as u32 + 1)? - iv.member(beta, k as u32)?;
                sum += (2 * k + 1) as f64 * kap * diff;
            }
        }
        terms.push(hp * sum);
        hp *= -h;
    }
    Ok(terms)
}

/// `I_alpha` between the latitude limits of `spec`.
pub fn i_alpha_series(alpha: HalfInt, spec: &GeodesicSpec, ctx: &IntegralContext) -> Result<IntegralResult> {
    check_context(spec, ctx)?;
    let mut iv = Interval::new(spec.tau0, spec.tau1, ctx)?;
    let terms = i_alpha_terms(alpha, effective_order(spec), spec.h, &mut iv)?;
    Ok(IntegralResult::from_terms(terms, spec.h))
}

/// `S_alpha` between the latitude limits of `spec`.
pub fn s_alpha_series(alpha: HalfInt, spec: &GeodesicSpec, ctx: &IntegralContext) -> Result<IntegralResult> {
    check_context(spec, ctx)?;
    let mut iv = Interval::new(spec.tau0, spec.tau1, ctx)?;
    let terms = s_alpha_terms(alpha, effective_order(spec), spec.h, &mut iv, ctx)?;
    Ok(IntegralResult::from_terms(terms, spec.h))
}

/// `terms[j] += factor * h * shifted[j - 1]`.
fn add_shifted(terms: &mut [f64], shifted: &[f64], factor: f64) {
    for (j, v) in shifted.iter().enumerate() {
        if j + 1 < terms.len() {
            terms[j + 1] += factor * v;
        }
    }
}

fn scaled_context(ellipsoid: &Ellipsoid, spec: &GeodesicSpec) -> Result<IntegralContext> {
    spec.validate(ellipsoid.e())?;
    IntegralContext::new(ellipsoid.e(), spec.c)
}

/// `h I_1 + (1 - e^2) I_(-1/2)`, grouped by powers of `h`.
fn longitude_bracket(spec: &GeodesicSpec, ctx: &IntegralContext, iv: &mut Interval) -> Result<Vec<f64>> {
    let order = effective_order(spec);
    let h = spec.h;
    let one_minus_e2 = (1.0 - ctx.e) * (1.0 + ctx.e);
    let mut terms: Vec<f64> = i_alpha_terms(HalfInt::from_twice(-1), order, h, iv)?
        .into_iter()
        .map(|t| one_minus_e2 * t)
        .collect();
    if order >= 1 {
        let upper = i_alpha_terms(HalfInt::int(1), order - 1, h, iv)?;
        add_shifted(&mut terms, &upper, h);
    }
    Ok(terms)
}

/// Longitude difference in radians between the latitude limits.
pub fn longitude_integral(ellipsoid: &Ellipsoid, spec: &GeodesicSpec) -> Result<IntegralResult> {
    let ctx = scaled_context(ellipsoid, spec)?;
    let mut iv = Interval::new(spec.tau0, spec.tau1, &ctx)?;
    let terms = longitude_bracket(spec, &ctx, &mut iv)?;
    Ok(IntegralResult::from_terms(terms, spec.h).scaled(spec.c))
}

/// Arc length between the latitude limits, in units of the equatorial radius.
pub fn distance_integral(ellipsoid: &Ellipsoid, spec: &GeodesicSpec) -> Result<IntegralResult> {
    let ctx = scaled_context(ellipsoid, spec)?;
    let mut iv = Interval::new(spec.tau0, spec.tau1, &ctx)?;
    let order = effective_order(spec);
    let h = spec.h;
    let one_minus_e2 = (1.0 - ctx.e) * (1.0 + ctx.e);
    let mut terms: Vec<f64> = s_alpha_terms(HalfInt::from_twice(-3), order, h, &mut iv, &ctx)?
        .into_iter()
        .map(|t| one_minus_e2 * t)
        .collect();
    if order >= 1 {
        let s0 = s_alpha_terms(HalfInt::int(0), order - 1, h, &mut iv, &ctx)?;
        add_shifted(&mut terms, &s0, h);
        let sm1 = s_alpha_terms(HalfInt::int(-1), order - 1, h, &mut iv, &ctx)?;
        add_shifted(&mut terms, &sm1, h * one_minus_e2);
    }
    if order >= 2 {
        let shalf = s_alpha_terms(HalfInt::from_twice(1), order - 2, h, &mut iv, &ctx)?;
        for (j, v) in shalf.iter().enumerate() {
            terms[j + 2] += h * h * v;
        }
    }
    Ok(IntegralResult::from_terms(terms, h))
}

/// Derivative of the longitude difference with respect to `c` at fixed `h` and latitude limits.
pub fn di_dc(ellipsoid: &Ellipsoid, spec: &GeodesicSpec) -> Result<IntegralResult> {
    let ctx = scaled_context(ellipsoid, spec)?;
    let mut iv = Interval::new(spec.tau0, spec.tau1, &ctx)?;
    Ok(IntegralResult::from_terms(dlambda_dc_terms(spec, &ctx, &mut iv)?, spec.h))
}

fn dlambda_dc_terms(spec: &GeodesicSpec, ctx: &IntegralContext, iv: &mut Interval) -> Result<Vec<f64>> {
    let order = effective_order(spec);
    let h = spec.h;
    let one_minus_e2 = (1.0 - ctx.e) * (1.0 + ctx.e);
    let mut terms = longitude_bracket(spec, ctx, iv)?;
    let g_low = g_alpha_terms(HalfInt::from_twice(-1), order, h, iv)?;
    for (t, g) in terms.iter_mut().zip(&g_low) {
        *t += one_minus_e2 * g;
    }
    if order >= 1 {
        let g_up = g_alpha_terms(HalfInt::int(1), order - 1, h, iv)?;
        add_shifted(&mut terms, &g_up, h);
    }
    Ok(terms)
}

/// Longitude difference and its `c` derivative from one shared cache.
pub fn longitude_with_derivative(ellipsoid: &Ellipsoid, spec: &GeodesicSpec) -> Result<(IntegralResult, IntegralResult)> {
    let ctx = scaled_context(ellipsoid, spec)?;
    let mut iv = Interval::new(spec.tau0, spec.tau1, &ctx)?;
    let lon = IntegralResult::from_terms(longitude_bracket(spec, &ctx, &mut iv)?, spec.h).scaled(spec.c);
    let der = IntegralResult::from_terms(dlambda_dc_terms(spec, &ctx, &mut iv)?, spec.h);
    Ok((lon, der))
}

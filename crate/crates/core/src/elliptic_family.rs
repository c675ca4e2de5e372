//! Members `I(beta, k)` with half-integer `beta >= -1/2`.
//!
//! With `n = beta + 1/2` the numerator `(a^2 - tau^2)^n` is a polynomial, and
//! after expanding both numerator factors around `b^2` every term is one of
//!
//! ```text
//! Q_v = integral of (b^2 - tau^2)^(-v) / sqrt((a^2 - tau^2)(b^2 - tau^2)),   D_2v = a b^2v Q_v
//! ```
//!
//! with `v` running from `1 - n` to `k`. Nonnegative `v` come from the `D`
//! ladder, negative `v` from the moments
//! `A_2l = integral of sin^2l(theta) / sqrt(1 - k^2 sin^2(theta))` over the amplitude
//! `sin(xi) = tau / b` with modulus `k = b/a`.

use crate::elementary::binom;
use crate::elliptic::{legendre_at, pi_at};
use crate::error::{GeoError, Result};
use crate::model::IntegralContext;

const SERIES_EPS: f64 = 1e-17;
const SERIES_MAX_TERMS: usize = 200_000;

/// Amplitude `xi` of one evaluation point, kept as `sin(xi)` and `cos^2(xi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude {
    pub tau: f64,
    pub sin: f64,
    pub cos2: f64,
    /// `b / a`.
    pub modulus: f64,
}

impl Amplitude {
    /// Amplitude at `|tau|`; the sign is reapplied by the callers.
    pub fn new(tau: f64, ctx: &IntegralContext) -> Result<Self> {
        let tau = tau.abs();
        let b = ctx.bp.b;
        if !(tau < b) {
            return Err(GeoError::Singularity { tau, b });
        }
        Ok(Amplitude {
            tau,
            sin: tau / b,
            cos2: (b - tau) * (b + tau) / (b * b),
            modulus: ctx.bp.modulus,
        })
    }

    pub fn xi(&self) -> f64 {
        self.sin.asin()
    }
}

/// Legendre integrals and ladders at one point, extended on demand.
#[derive(Debug, Clone)]
pub struct EllipticLadder {
    pub amp: Amplitude,
    pub f: f64,
    pub e: f64,
    pub f_minus_e: f64,
    /// `Pi(xi, b^2, b/a)`.
    pub pi: f64,
    d: Vec<f64>,
    a: Vec<f64>,
    a2: f64,
    b2: f64,
    a2_minus_b2: f64,
    /// `a tau sqrt(a^2 - tau^2)`.
    edge: f64,
    root_b: f64,
}

impl EllipticLadder {
    pub fn new(tau: f64, ctx: &IntegralContext) -> Result<Self> {
        let amp = Amplitude::new(tau, ctx)?;
        let bp = &ctx.bp;
        let leg = legendre_at(amp.sin, amp.cos2, amp.modulus)?;
        let t = amp.tau;
        let pi = pi_at(amp.sin, amp.cos2, bp.b2, (1.0 - t) * (1.0 + t), amp.modulus)?;
        let root_a = ((bp.a - t) * (bp.a + t)).sqrt();
        Ok(EllipticLadder {
            amp,
            f: leg.f,
            e: leg.e,
            f_minus_e: leg.f_minus_e,
            pi,
            d: Vec::new(),
            a: Vec::new(),
            a2: bp.a2,
            b2: bp.b2,
            a2_minus_b2: bp.a2_minus_b2,
            edge: bp.a * t * root_a,
            root_b: ((bp.b - t) * (bp.b + t)).sqrt(),
        })
    }

    /// `D_0 ..= D_(2 v_max)`.
    pub fn d(&mut self, v_max: usize) -> &[f64] {
        if self.d.is_empty() {
            self.d.push(self.f);
        }
        if v_max >= 1 && self.d.len() < 2 {
            let d2 = if self.amp.tau == 0.0 {
                0.0
            } else {
                self.f_minus_e - self.b2 * self.e / self.a2_minus_b2
                    + self.edge / (self.a2_minus_b2 * self.root_b)
            };
            self.d.push(d2);
        }
        let t2 = self.amp.tau * self.amp.tau;
        let rb2 = self.root_b * self.root_b;
        while self.d.len() <= v_max {
            let v = self.d.len() - 1;
            let fv = v as f64;
            // b^2v tau sqrt(a^2 - tau^2) / (b^2 - tau^2)^(v + 1/2), written with cos^2(xi)
            let boundary = if t2 == 0.0 {
                0.0
            } else {
                self.edge / (self.root_b * (rb2 / self.b2).powi(v as i32))
            };
            let next = ((2.0 * fv - 1.0) * self.b2 * self.d[v - 1]
                + 2.0 * fv * (self.a2 - 2.0 * self.b2) * self.d[v]
                + boundary)
                / ((2.0 * fv + 1.0) * self.a2_minus_b2);
            self.d.push(next);
        }
        &self.d[..=v_max]
    }

    /// `b^2l A_2l` for `l = 0 ..= l_max`.
    ///
    /// The upward three-term recurrence loses about a factor `a^2 / tau^2` per
    /// step, so `l >= 2` comes from the positive power series in `sin(xi)`.
    pub fn a(&mut self, l_max: usize) -> &[f64] {
        if self.a.len() > l_max {
            return &self.a[..=l_max];
        }
        let mut out = vec![self.f];
        if l_max >= 1 {
            out.push(self.a2 * self.f_minus_e);
        }
        if l_max >= 2 {
            let s = self.amp.sin;
            let k2 = self.amp.modulus * self.amp.modulus;
            let sums = moment_series(s, k2, 2, l_max);
            let mut bp = self.b2 * self.b2;
            for sum in sums {
                out.push(bp * sum);
                bp *= self.b2;
            }
        }
        self.a = out;
        &self.a[..=l_max]
    }

    /// `a Q_v = D_2v / b^2v` for any integer `v`.
    pub(crate) fn a_q(&mut self, v: i32) -> f64 {
        if v >= 0 {
            let d = self.d(v as usize)[v as usize];
            return d / self.b2.powi(v);
        }
        let np = (-v) as u32;
        let moments = self.a(np as usize).to_vec();
        let mut sum = 0.0;
        let mut bp = self.b2.powi(np as i32);
        for (j, m) in moments.iter().enumerate() {
            let term = binom(np, j as u32) * bp * m;
            sum += if j % 2 == 0 { term } else { -term };
            bp /= self.b2;
        }
        sum
    }
}

/// `sum_N c_N s^(2l + 2N + 1) / (2l + 2N + 1)` for `l = l_lo ..= l_hi`, where
/// `c_N` are the coefficients of `(1 - x)^(-1/2) (1 - k^2 x)^(-1/2)`.
fn moment_series(s: f64, k2: f64, l_lo: usize, l_hi: usize) -> Vec<f64> {
    let s2 = s * s;
    // w_q k^2q, truncated once negligible
    let mut wk = vec![1.0];
    while wk.len() < SERIES_MAX_TERMS {
        let q = wk.len() as f64;
        let next = wk[wk.len() - 1] * (q - 0.5) / q * k2;
        if next < SERIES_EPS * 1e-3 {
            break;
        }
        wk.push(next);
    }
    let mut w = vec![1.0];
    let mut sums = vec![0.0; l_hi - l_lo + 1];
    let mut sp = s.powi(2 * l_lo as i32 + 1);
    let tail_ratio = if s2 < 1.0 { s2 / (1.0 - s2) } else { f64::INFINITY };
    for n in 0..SERIES_MAX_TERMS {
        if n > 0 {
            let q = n as f64;
            w.push(w[n - 1] * (q - 0.5) / q);
        }
        let mut c = 0.0;
        for (q, wq) in wk.iter().enumerate().take(n + 1) {
            c += wq * w[n - q];
        }
        let mut done = true;
        let mut p = sp;
        for (i, sum) in sums.iter_mut().enumerate() {
            let l = l_lo + i;
            let term = c * p / (2 * (l + n) + 1) as f64;
            *sum += term;
            if term * tail_ratio.max(1.0) > SERIES_EPS * *sum {
                done = false;
            }
            p *= s2;
        }
        if done {
            break;
        }
        sp *= s2;
    }
    sums
}

fn check_two_beta(two_beta: i32) -> Result<u32> {
    if two_beta < -1 || two_beta % 2 == 0 {
        return Err(GeoError::Index(format!(
            "half-integer family needs beta in {{-1/2, 1/2, 3/2, ...}}, got 2 beta = {two_beta}"
        )));
    }
    Ok(((two_beta + 1) / 2) as u32)
}

/// `D_0 ..= D_(2 v_max)` at `tau`.
pub fn d_seq(v_max: usize, tau: f64, ctx: &IntegralContext) -> Result<Vec<f64>> {
    let mut lad = EllipticLadder::new(tau, ctx)?;
    let sign = tau.signum();
    Ok(lad.d(v_max).iter().map(|d| sign * d).collect())
}

/// `b^2l A_2l` for `l = 0 ..= l_max` at `tau`.
pub fn a_seq(l_max: usize, tau: f64, ctx: &IntegralContext) -> Result<Vec<f64>> {
    let mut lad = EllipticLadder::new(tau, ctx)?;
    let sign = tau.signum();
    Ok(lad.a(l_max).iter().map(|a| sign * a).collect())
}

fn k_sum(n: u32, k: u32, lad: &mut EllipticLadder, one_minus_b2: f64, weight: impl Fn(u32) -> f64) -> f64 {
    let mut total = 0.0;
    let mut q = 1.0;
    for s in 0..k {
        for m in 0..=n {
            let v = 1 + s as i32 + m as i32 - n as i32;
            total += binom(k - 1, s) * q * binom(n, m) * weight(m) * lad.a_q(v);
        }
        q *= one_minus_b2;
    }
    total
}

fn zero_sum(n: u32, lad: &mut EllipticLadder, weight: impl Fn(u32) -> f64) -> f64 {
    let moments = if n >= 2 { lad.a(n as usize - 1).to_vec() } else { vec![lad.f] };
    let mut total = weight(0) * lad.pi;
    for m in 1..=n {
        let mut inner = 0.0;
        for l in 0..m {
            let term = binom(m - 1, l) * moments[l as usize];
            inner += if l % 2 == 0 { term } else { -term };
        }
        total += binom(n, m) * weight(m) * inner;
    }
    total
}

/// `2` times the integral of `(1 - tau^2)^(k-1) (a^2 - tau^2)^beta / (b^2 - tau^2)^(k+1/2)` from 0 to `tau`, `k >= 1`.
pub fn jbar_halfint(two_beta: i32, k: u32, tau: f64, ctx: &IntegralContext) -> Result<f64> {
    let n = check_two_beta(two_beta)?;
    if k == 0 {
        return Err(GeoError::Index("jbar_halfint needs k >= 1; use jbar_beta0".into()));
    }
    let mut lad = EllipticLadder::new(tau, ctx)?;
    let bp = &ctx.bp;
    let total = k_sum(n, k, &mut lad, bp.one_minus_b2, |m| bp.a2_minus_b2.powi(m as i32));
    Ok(tau.signum() * 2.0 * total / bp.a)
}

/// `2` times the integral of `(a^2 - tau^2)^beta / ((1 - tau^2) sqrt(b^2 - tau^2))` from 0 to `tau`.
pub fn jbar_beta0(two_beta: i32, tau: f64, ctx: &IntegralContext) -> Result<f64> {
    let n = check_two_beta(two_beta)?;
    let mut lad = EllipticLadder::new(tau, ctx)?;
    let bp = &ctx.bp;
    let a2m1 = bp.a2 - 1.0;
    let total = zero_sum(n, &mut lad, |m| a2m1.powi((n - m) as i32));
    Ok(tau.signum() * 2.0 * total / bp.a)
}

/// Half-integer `I(beta, k)` from 0 to `tau`, given as `2 beta`.
pub fn i_halfint(two_beta: i32, k: u32, tau: f64, ctx: &IntegralContext) -> Result<f64> {
    let n = check_two_beta(two_beta)?;
    let mut lad = EllipticLadder::new(tau, ctx)?;
    Ok(tau.signum() * i_halfint_at(n, k, &mut lad, ctx))
}

/// `I(n - 1/2, k)` at `|tau|` of the ladder.
pub(crate) fn i_halfint_at(n: u32, k: u32, lad: &mut EllipticLadder, ctx: &IntegralContext) -> f64 {
    let bp = &ctx.bp;
    let e2 = ctx.e2;
    if k == 0 {
        // e^(2 beta) (a^2 - 1)^(n - m) / a = e^(2m) (1 - e^2)^(n - m)
        let one_minus_e2 = (1.0 - ctx.e) * (1.0 + ctx.e);
        let total = zero_sum(n, lad, |m| {
            e2.powi(m as i32) * one_minus_e2.powi((n - m) as i32)
        });
        return total / bp.prefactor_base.sqrt();
    }
    // e^(2 beta) (a^2 - b^2)^m / a = e^(2(n - m)) (1 - e^2 b^2)^m
    let one_minus_e2b2 = 1.0 - e2 * bp.b2;
    let total = k_sum(n, k, lad, bp.one_minus_b2, |m| {
        e2.powi((n - m) as i32) * one_minus_e2b2.powi(m as i32)
    });
    total / bp.prefactor_base.powf(k as f64 + 0.5)
}

//! Ellipsoid and geodesic parameterization in scaled variables.
//!
//! Every length is divided by the equatorial radius: the altitude `h`, the
//! obliquity parameter `c` and the polar radius are dimensionless here, and
//! the latitude enters only through `tau = sin(phi)`.
//!
//! The two branch parameters satisfy `a^2 = 1/e^2` and
//! `b^2 = (1 - c^2) / (1 - c^2 e^2)`, so that
//! `1 - e^2 tau^2 = e^2 (a^2 - tau^2)` and
//! `1 - tau^2 - c^2 (1 - e^2 tau^2) = (1 - c^2 e^2)(b^2 - tau^2)`.

use crate::error::{GeoError, Result};

/// Default relative distance kept between the integration limits and the branch point `b`.
pub const DEFAULT_MARGIN: f64 = 0.05;

/// Default upper bound of the scaled altitude.
pub const DEFAULT_H_MAX: f64 = 0.1;

/// Default number of powers of `h` beyond the surface term.
pub const DEFAULT_ORDER: usize = 8;

/// Largest series order accepted by the evaluators.
pub const MAX_ORDER: usize = 40;

/// Reference ellipsoid given by its equatorial radius and second eccentricity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipsoid {
    rho_e: f64,
    e: f64,
    rho_p: f64,
}

impl Ellipsoid {
    pub fn new(rho_e: f64, e: f64) -> Result<Self> {
        if !(rho_e.is_finite() && rho_e > 0.0) {
            return Err(GeoError::domain(format!(
                "equatorial radius must be positive and finite, got {rho_e}"
            )));
        }
        check_eccentricity(e)?;
        let rho_p = rho_e * ((1.0 - e) * (1.0 + e)).sqrt();
        Ok(Ellipsoid { rho_e, e, rho_p })
    }

    /// Ellipsoid with unit equatorial radius, the frame all integrals work in.
    pub fn scaled(e: f64) -> Result<Self> {
        Self::new(1.0, e)
    }

    pub fn rho_e(&self) -> f64 {
        self.rho_e
    }

    pub fn e(&self) -> f64 {
        self.e
    }

    pub fn rho_p(&self) -> f64 {
        self.rho_p
    }
}

fn check_eccentricity(e: f64) -> Result<()> {
    if !(e > 0.0 && e < 1.0) {
        return Err(GeoError::domain(format!(
            "eccentricity must satisfy 0 < e < 1, got {e}"
        )));
    }
    Ok(())
}

/// One geodesic line at constant altitude together with the latitude limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSpec {
    /// Altitude divided by the equatorial radius.
    pub h: f64,
    /// Obliquity parameter divided by the equatorial radius.
    pub c: f64,
    /// Sine of the latitude at the lower limit.
    pub tau0: f64,
    /// Sine of the latitude at the upper limit.
    pub tau1: f64,
    /// Highest power of `h` retained.
    pub order: usize,
    /// Relative distance to keep from the branch point.
    pub margin: f64,
    /// Largest admissible `h`.
    pub h_max: f64,
}

impl GeodesicSpec {
    pub fn new(h: f64, c: f64, tau0: f64, tau1: f64) -> Self {
        GeodesicSpec {
            h,
            c,
            tau0,
            tau1,
            order: DEFAULT_ORDER,
            margin: DEFAULT_MARGIN,
            h_max: DEFAULT_H_MAX,
        }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }

    pub fn with_h_max(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    /// Checks every bound of the line parameters and returns the branch parameters on success.
    pub fn validate(&self, e: f64) -> Result<BranchParams> {
        if !(self.margin > 0.0 && self.margin < 1.0) {
            return Err(GeoError::domain(format!(
                "margin must lie in (0, 1), got {}",
                self.margin
            )));
        }
        if !(self.h >= 0.0 && self.h <= self.h_max) {
            return Err(GeoError::domain(format!(
                "altitude must satisfy 0 <= h <= h_max = {}, got h = {}",
                self.h_max, self.h
            )));
        }
        if self.order > MAX_ORDER {
            return Err(GeoError::domain(format!(
                "series order must not exceed {MAX_ORDER}, got {}",
                self.order
            )));
        }
        if !(self.tau0.is_finite() && self.tau1.is_finite()) {
            return Err(GeoError::domain("latitude limits must be finite"));
        }
        let bp = branch_params(e, self.c)?;
        if !validate_domain(self, &bp, self.margin) {
            return Err(GeoError::domain(format!(
                "latitude limits must satisfy max(|tau0|, |tau1|) <= b (1 - margin) = {} (b = {}, margin = {}), got tau0 = {}, tau1 = {}",
                bp.b * (1.0 - self.margin),
                bp.b,
                self.margin,
                self.tau0,
                self.tau1
            )));
        }
        Ok(bp)
    }
}

/// Branch parameters derived from `(e, c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchParams {
    /// `1/e`, the square root of `a^2 = 1/e^2`.
    pub a: f64,
    /// `1/e^2`.
    pub a2: f64,
    pub b: f64,
    /// `(1 - c^2) / (1 - c^2 e^2)`.
    pub b2: f64,
    /// Elliptic modulus `b/a`.
    pub modulus: f64,
    /// `1 - c^2 e^2`.
    pub prefactor_base: f64,
    /// `1 - b^2 = c^2 (1 - e^2) / (1 - c^2 e^2)`, evaluated without cancellation.
    pub one_minus_b2: f64,
    /// `a^2 - b^2`.
    pub a2_minus_b2: f64,
}

pub fn branch_params(e: f64, c: f64) -> Result<BranchParams> {
    check_eccentricity(e)?;
    if !(c >= 0.0 && c < 1.0) {
        return Err(GeoError::domain(format!(
            "obliquity parameter must satisfy 0 <= c < 1, got {c}"
        )));
    }
    let e2 = e * e;
    let prefactor_base = 1.0 - c * c * e2;
    let b2 = (1.0 - c) * (1.0 + c) / prefactor_base;
    let b = b2.sqrt();
    let a = 1.0 / e;
    let a2 = 1.0 / e2;
    Ok(BranchParams {
        a,
        a2,
        b,
        b2,
        modulus: b * e,
        prefactor_base,
        one_minus_b2: c * c * (1.0 - e) * (1.0 + e) / prefactor_base,
        a2_minus_b2: a2 - b2,
    })
}

/// True iff both latitude limits keep the relative distance `margin` from the branch point.
pub fn validate_domain(spec: &GeodesicSpec, bp: &BranchParams, margin: f64) -> bool {
    spec.tau0.abs().max(spec.tau1.abs()) <= bp.b * (1.0 - margin)
}

/// Substitution variables at one latitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub tau: f64,
    /// `1 - tau^2`.
    pub t: f64,
    /// `1 - e^2 tau^2`.
    pub e_sub: f64,
    /// `tau^2`.
    pub x: f64,
    /// `1 / (b^2 - x)`.
    pub z: f64,
}

pub fn eval_point(tau: f64, e: f64, bp: &BranchParams) -> Result<EvalPoint> {
    let x = tau * tau;
    if !(x < bp.b2) {
        return Err(GeoError::Singularity { tau: tau.abs(), b: bp.b });
    }
    Ok(EvalPoint {
        tau,
        t: (1.0 - tau) * (1.0 + tau),
        e_sub: 1.0 - e * e * x,
        x,
        z: 1.0 / (bp.b2 - x),
    })
}

/// Parameters shared by every member of the integral families for one geodesic line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralContext {
    pub e: f64,
    pub e2: f64,
    pub c: f64,
    pub bp: BranchParams,
}

impl IntegralContext {
    pub fn new(e: f64, c: f64) -> Result<Self> {
        let bp = branch_params(e, c)?;
        Ok(IntegralContext { e, e2: e * e, c, bp })
    }

    /// `sqrt(b^2 - tau^2)`, failing at or beyond the branch point.
    pub(crate) fn root_b(&self, tau: f64) -> Result<f64> {
        let tau = tau.abs();
        if !(tau < self.bp.b) {
            return Err(GeoError::Singularity { tau, b: self.bp.b });
        }
        Ok(((self.bp.b - tau) * (self.bp.b + tau)).sqrt())
    }
}

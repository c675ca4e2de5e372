//! Recovery of the obliquity parameter `c` from a longitude difference.
//!
//! Newton's method on `dlambda(c) - target` with the analytic derivative
//! series, kept inside a bisection bracket `[0, c_upper]`. `c_upper` is the
//! largest `c` whose branch point still clears both latitude limits by the
//! domain margin.

use crate::error::{GeoError, Result};
use crate::model::{Ellipsoid, GeodesicSpec, DEFAULT_H_MAX, DEFAULT_MARGIN, DEFAULT_ORDER};
use crate::series::{longitude_integral, longitude_with_derivative};

const MONOTONE_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseProblem {
    /// Longitude difference in radians.
    pub target_dlambda: f64,
    pub tau0: f64,
    pub tau1: f64,
    pub h: f64,
    /// Accepted `|dlambda(c) - target|` in radians.
    pub tolerance: f64,
    pub max_iter: usize,
    pub order: usize,
    pub margin: f64,
    pub h_max: f64,
}

impl InverseProblem {
    pub fn new(target_dlambda: f64, tau0: f64, tau1: f64, h: f64) -> Self {
        InverseProblem {
            target_dlambda,
            tau0,
            tau1,
            h,
            tolerance: 1e-13,
            max_iter: 25,
            order: DEFAULT_ORDER,
            margin: DEFAULT_MARGIN,
            h_max: DEFAULT_H_MAX,
        }
    }

    fn spec(&self, c: f64) -> GeodesicSpec {
        GeodesicSpec::new(self.h, c, self.tau0, self.tau1)
            .with_order(self.order)
            .with_margin(self.margin)
            .with_h_max(self.h_max)
    }

    /// Largest admissible `c`: `b(c) (1 - margin) = max |tau|` solved for `c`.
    pub fn c_upper(&self, e: f64) -> Result<f64> {
        let beta = self.tau0.abs().max(self.tau1.abs()) / (1.0 - self.margin);
        if !(beta < 1.0) {
            return Err(GeoError::domain(format!(
                "latitude limits {} and {} leave no admissible c at margin {}",
                self.tau0, self.tau1, self.margin
            )));
        }
        let b2 = beta * beta;
        let c2 = (1.0 - b2) / (1.0 - b2 * e * e);
        // stay on the admissible side of the rounding in validate
        Ok(c2.sqrt() * (1.0 - 1e-12))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseSolution {
    pub c: f64,
    pub iterations: usize,
    pub residual: f64,
    pub c_upper: f64,
}

/// Solves `dlambda(c) = target` for `c` in `[0, c_upper]`.
pub fn solve_c(problem: &InverseProblem, ellipsoid: &Ellipsoid) -> Result<InverseSolution> {
    let e = ellipsoid.e();
    if !(problem.tolerance > 0.0) || problem.max_iter == 0 {
        return Err(GeoError::domain("inverse solver needs a positive tolerance and max_iter >= 1"));
    }
    if !problem.target_dlambda.is_finite() {
        return Err(GeoError::domain("target longitude difference must be finite"));
    }
    let c_upper = problem.c_upper(e)?;
    problem.spec(0.0).validate(e)?;
    let dir = (problem.tau1 - problem.tau0).signum();
    let target = problem.target_dlambda * if dir == 0.0 { 1.0 } else { dir };
    if target == 0.0 {
        return Ok(InverseSolution {
            c: 0.0,
            iterations: 0,
            residual: 0.0,
            c_upper,
        });
    }
    let g = |c: f64| -> Result<f64> { Ok(dir * longitude_integral(ellipsoid, &problem.spec(c))?.value) };
    let attainable = g(c_upper)?;
    if dir == 0.0 || target < 0.0 || target > attainable {
        return Err(GeoError::NoBracket {
            target: problem.target_dlambda,
            attainable: dir * attainable,
            c_upper,
        });
    }
    let mut prev = 0.0;
    for i in 1..MONOTONE_SAMPLES {
        let v = g(c_upper * i as f64 / MONOTONE_SAMPLES as f64)?;
        if !(v > prev) {
            return Err(GeoError::NonMonotone { c_upper });
        }
        prev = v;
    }
    if !(attainable > prev) {
        return Err(GeoError::NonMonotone { c_upper });
    }

    let (mut lo, mut hi) = (0.0, c_upper);
    let mut c = c_upper * target / attainable;
    let mut residual = f64::INFINITY;
    for iteration in 1..=problem.max_iter {
        let (lon, der) = longitude_with_derivative(ellipsoid, &problem.spec(c))?;
        residual = dir * lon.value - target;
        if residual.abs() <= problem.tolerance {
            return Ok(InverseSolution {
                c,
                iterations: iteration,
                residual,
                c_upper,
            });
        }
        if residual < 0.0 {
            lo = c;
        } else {
            hi = c;
        }
        let slope = dir * der.value;
        let newton = c - residual / slope;
        let next = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - c).abs() <= 2.0 * f64::EPSILON * c {
            return Ok(InverseSolution {
                c: next,
                iterations: iteration,
                residual,
                c_upper,
            });
        }
        c = next;
    }
    Err(GeoError::NoConvergence {
        iterations: problem.max_iter,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: f64 = 0.08182;

    fn earth() -> Ellipsoid {
        Ellipsoid::scaled(E).unwrap()
    }

    #[test]
    fn zero_target_gives_zero() {
        let p = InverseProblem::new(0.0, 0.0, 0.4, 1e-3);
        let sol = solve_c(&p, &earth()).unwrap();
        assert_eq!(sol.c, 0.0);
        assert_eq!(sol.iterations, 0);
    }

    #[test]
    fn round_trip() {
        let ell = earth();
        for c in [0.05, 0.5, 0.9] {
            let spec = GeodesicSpec::new(1e-3, c, 0.0, 0.4);
            let target = longitude_integral(&ell, &spec).unwrap().value;
            let sol = solve_c(&InverseProblem::new(target, 0.0, 0.4, 1e-3), &ell).unwrap();
            assert!((sol.c - c).abs() < 1e-10, "c={c}: {}", sol.c);
            assert!(sol.iterations <= 25);
        }
    }

    #[test]
    fn descending_limits() {
        let ell = earth();
        let spec = GeodesicSpec::new(0.0, 0.3, 0.4, -0.1);
        let target = longitude_integral(&ell, &spec).unwrap().value;
        assert!(target < 0.0);
        let sol = solve_c(&InverseProblem::new(target, 0.4, -0.1, 0.0), &ell).unwrap();
        assert!((sol.c - 0.3).abs() < 1e-10);
    }

    #[test]
    fn unreachable_target() {
        let p = InverseProblem::new(10.0, 0.0, 0.4, 0.0);
        assert!(matches!(solve_c(&p, &earth()), Err(GeoError::NoBracket { .. })));
        let p = InverseProblem::new(-0.1, 0.0, 0.4, 0.0);
        assert!(matches!(solve_c(&p, &earth()), Err(GeoError::NoBracket { .. })));
        let p = InverseProblem::new(0.1, 0.3, 0.3, 0.0);
        assert!(matches!(solve_c(&p, &earth()), Err(GeoError::NoBracket { .. })));
    }

    #[test]
    fn upper_bound_sits_on_the_margin() {
        let p = InverseProblem::new(0.1, 0.0, 0.6, 0.0);
        let cu = p.c_upper(E).unwrap();
        let b = crate::model::branch_params(E, cu).unwrap().b;
        assert!((b * 0.95 - 0.6).abs() < 1e-10);
        assert!(p.spec(cu).validate(E).is_ok());
        assert!(InverseProblem::new(0.1, 0.0, 0.96, 0.0).c_upper(E).is_err());
    }
}

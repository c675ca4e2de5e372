//! Curves of `I(beta, k)` from 0 to `tau` over a latitude grid, one per `(c, k)`.

use crate::error::Result;
use crate::model::{branch_params, IntegralContext};
use crate::series::{HalfInt, PointIntegrals};
use serde::Serialize;

/// Obliquity values used when none are given.
pub const DEFAULT_C_LIST: [f64; 3] = [0.1, 0.5, 0.9];
pub const DEFAULT_K_LIST: [u32; 3] = [0, 1, 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileRow {
    pub c: f64,
    pub k: u32,
    pub tau: f64,
    pub value: f64,
}

/// `tau_steps` equally spaced points from 0 to `b(c) (1 - margin)` for every `c`, each evaluated for every `k`.
pub fn profile(e: f64, c_list: &[f64], k_list: &[u32], beta: HalfInt, tau_steps: usize, margin: f64) -> Result<Vec<ProfileRow>> {
    let mut rows = Vec::with_capacity(c_list.len() * k_list.len() * tau_steps);
    for &c in c_list {
        let bp = branch_params(e, c)?;
        let ctx = IntegralContext::new(e, c)?;
        let tau_max = bp.b * (1.0 - margin);
        let taus: Vec<f64> = (0..tau_steps)
            .map(|i| {
                if tau_steps == 1 {
                    0.0
                } else {
                    tau_max * i as f64 / (tau_steps - 1) as f64
                }
            })
            .collect();
        let mut points = taus
            .iter()
            .map(|&t| PointIntegrals::new(t, &ctx))
            .collect::<Result<Vec<_>>>()?;
        for &k in k_list {
            for (p, &tau) in points.iter_mut().zip(&taus) {
                rows.push(ProfileRow {
                    c,
                    k,
                    tau,
                    value: p.get(beta, k)?,
                });
            }
        }
    }
    Ok(rows)
}

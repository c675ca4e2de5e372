//! Longitude difference and arc length of geodesic lines at constant altitude
//! over an oblate ellipsoid, from power series in the altitude whose terms are
//! elementary functions and incomplete elliptic integrals.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod elementary;
pub mod elliptic;
pub mod elliptic_family;
pub mod error;
pub mod inverse;
pub mod kappa;
pub mod model;
pub mod profile;
pub mod quadrature;
pub mod series;
pub mod special;

pub use error::{GeoError, Result};
pub use inverse::{solve_c, InverseProblem, InverseSolution};
pub use kappa::{kappa_direct, kappa_jacobi, kappa_table, KappaTable};
pub use model::{branch_params, BranchParams, Ellipsoid, GeodesicSpec, IntegralContext};
pub use quadrature::{adaptive_quad, quad_distance, quad_longitude, Quadrature};
pub use series::{
    di_dc, distance_integral, i_alpha_series, i_beta_k, longitude_integral, s_alpha_series, HalfInt,
    IntegralResult,
};

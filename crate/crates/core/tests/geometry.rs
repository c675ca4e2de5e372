mod common;

use common::*;
use geoline::model::{branch_params, Ellipsoid, GeodesicSpec};
use geoline::series::{di_dc, distance_integral, longitude_integral};
use geoline::GeoError;

#[test]
fn longitude_and_distance_grow_with_latitude() {
    let ell = Ellipsoid::scaled(EARTH_E).unwrap();
    for h in [0.0, 1e-3] {
        for c in [0.1, 0.5, 0.9] {
            let b = branch_params(EARTH_E, c).unwrap().b;
            let (mut pl, mut pd) = (0.0, 0.0);
            for i in 1..=19 {
                let spec = GeodesicSpec::new(h, c, 0.0, 0.0499 * i as f64 * b);
                let l = longitude_integral(&ell, &spec).unwrap().value;
                let d = distance_integral(&ell, &spec).unwrap().value;
                assert!(l > pl && d > pd, "h={h} c={c} i={i}");
                (pl, pd) = (l, d);
            }
        }
    }
}

#[test]
fn longitude_grows_with_obliquity() {
    let ell = Ellipsoid::scaled(EARTH_E).unwrap();
    for c in [0.1, 0.4, 0.7, 0.9] {
        let d = di_dc(&ell, &GeodesicSpec::new(1e-3, c, 0.0, 0.3)).unwrap().value;
        assert!(d > 0.0);
    }
}

#[test]
fn altitude_moves_the_turning_point_beyond_b() {
    // radicand (1 + h sqrt(E))^2 T - c^2 E is zero at tau = b for h = 0 and positive for h > 0
    for e in [0.08182, 0.3] {
        for c in [0.1, 0.5, 0.9] {
            let b = branch_params(e, c).unwrap().b;
            let rad = |h: f64, tau: f64| {
                let es = 1.0 - e * e * tau * tau;
                (1.0 + h * es.sqrt()).powi(2) * (1.0 - tau * tau) - c * c * es
            };
            assert!(rad(0.0, b).abs() < 1e-15);
            for h in [1e-4, 1e-3, 1e-2] {
                assert!(rad(h, b) > 0.0);
                // the zero of the radicand, by bisection on [b, 1]
                let (mut lo, mut hi) = (b, 1.0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if rad(h, mid) > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                assert!(lo > b);
            }
        }
    }
}

#[test]
fn domain_edges_are_rejected() {
    let ell = Ellipsoid::scaled(EARTH_E).unwrap();
    let b = branch_params(EARTH_E, 0.5).unwrap().b;
    let at_margin = GeodesicSpec::new(0.0, 0.5, 0.0, 0.951 * b);
    assert!(matches!(longitude_integral(&ell, &at_margin), Err(GeoError::Domain(_))));
    let too_high = GeodesicSpec::new(0.2, 0.5, 0.0, 0.3);
    assert!(longitude_integral(&ell, &too_high).unwrap_err().is_domain());
    let bad_c = GeodesicSpec::new(0.0, 1.0, 0.0, 0.1);
    assert!(longitude_integral(&ell, &bad_c).unwrap_err().is_domain());
    assert!(Ellipsoid::scaled(1.0).is_err());
    assert!(Ellipsoid::scaled(0.0).is_err());
}

#[test]
fn surface_series_is_exact() {
    let ell = Ellipsoid::scaled(EARTH_E).unwrap();
    let r = longitude_integral(&ell, &GeodesicSpec::new(0.0, 0.5, 0.0, 0.4)).unwrap();
    assert_eq!(r.terms.len(), 1);
    assert_eq!(r.trunc_estimate, 0.0);
    assert!(!r.slow_convergence);
}

use num_complex::Complex64;

use super::*;
use crate::laughlin::{SphereData, TorusData};
use crate::theta::Modulus;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn torus(b: u32, n: usize, m: usize) -> TorusData {
    TorusData::new(Modulus::new(c(0.0, 1.0)).unwrap(), b, n, m).unwrap()
}

fn sphere_model(n: usize) -> SphereModel {
    SphereModel {
        data: SphereData::new(1, n, 1).unwrap(),
        frozen: Vec::new(),
        chart: Chart::Plane,
    }
}

#[test]
fn single_particle_gram_is_half_of_one_plus_norm() {
    let nodes = [c(0.0, 0.0), c(0.5, -0.3), c(1.2, 0.4)];
    let field = sample_field(&sphere_model(1), &nodes, Budget::new(40_000, 3)).unwrap();
    for (i, w) in nodes.iter().enumerate() {
        let est = field.estimate(i);
        let want = 0.5 * (1.0 + w.norm_sqr());
        assert!((est.h[0][0].re - want).abs() <= 4.0 * est.stderr[0][0], "{w}");
    }
}

#[test]
fn sphere_density_matches_closed_form() {
    let h = 0.05;
    for w in [c(0.0, 0.0), c(0.4, 0.3), c(-0.8, 0.6)] {
        let nodes: Vec<Complex64> = [c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, h), c(0.0, -h)]
            .iter()
            .map(|d| w + d)
            .collect();
        let field = sample_field(&sphere_model(1), &nodes, Budget::new(20_000, 5)).unwrap();
        let f = field.logdets(None).unwrap();
        let got = five_point_density(f[0], [f[1], f[2]], [f[3], f[4]], h, h);
        let want = -1.0 / (std::f64::consts::PI * (1.0 + w.norm_sqr()).powi(2));
        assert!((got - want).abs() < 0.03 * want.abs(), "{w}: {got} vs {want}");
    }
}

#[test]
fn frozen_integrand_has_no_curvature() {
    let grid = TorusGrid::new(6, 1.0);
    let field = torus_grid_field(&FrozenModel { dim: 2 }, &grid, Budget::new(400, 1)).unwrap();
    let flux = grid_flux(&field, &grid, |_| 0.0).unwrap();
    assert_eq!(flux.value, 0.0);
    assert_eq!(flux.stat_error, 0.0);
    let f = field.logdets(None).unwrap();
    assert!((0..6).all(|i| grid.density(&f, i, i, 1) == 0.0));
}

#[test]
fn same_seed_is_bit_identical() {
    let model = TorusModel {
        data: torus(2, 2, 1),
        frozen: Vec::new(),
    };
    let nodes = [c(0.3, 0.2), c(0.7, 0.9)];
    let a = sample_field(&model, &nodes, Budget::new(2_000, 11)).unwrap();
    let b = sample_field(&model, &nodes, Budget::new(2_000, 11)).unwrap();
    for i in 0..2 {
        assert_eq!(a.estimate(i).h, b.estimate(i).h);
        assert_eq!(a.estimate(i).stderr, b.estimate(i).stderr);
    }
    let other = sample_field(&model, &nodes, Budget::new(2_000, 12)).unwrap();
    assert_ne!(a.estimate(0).h, other.estimate(0).h);
}

#[test]
fn stderr_scales_as_inverse_root() {
    let model = TorusModel {
        data: torus(1, 2, 1),
        frozen: Vec::new(),
    };
    let nodes = [c(0.3, 0.2)];
    let small = sample_field(&model, &nodes, Budget::new(5_000, 2)).unwrap().estimate(0);
    let large = sample_field(&model, &nodes, Budget::new(20_000, 2)).unwrap().estimate(0);
    let ratio = small.stderr[0][0] / large.stderr[0][0];
    assert!(ratio > 2.0 / 1.5 && ratio < 2.0 * 1.5, "{ratio}");
}

#[test]
fn torus_grams_are_positive_and_hermitian() {
    let one = TorusModel {
        data: torus(1, 3, 2),
        frozen: vec![c(0.2, 0.7)],
    };
    let est = sample_field(&one, &[c(0.4, 0.1)], Budget::new(4_000, 1)).unwrap().estimate(0);
    assert!(est.h[0][0].re > 0.0);
    let two = TorusModel {
        data: torus(2, 2, 1),
        frozen: Vec::new(),
    };
    let field = sample_field(&two, &[c(0.4, 0.1)], Budget::new(4_000, 1)).unwrap();
    let est = field.estimate(0);
    assert!(est.asymmetry <= 3.0 * est.stderr[0][1] + 1e-12 * est.h[0][0].re);
    assert!(est.h[0][1].norm() < (est.h[0][0].re * est.h[1][1].re).sqrt());
    assert_eq!(est.h[0][1], est.h[1][0].conj());
    assert!(field.logdet(0, None).is_ok());
}

#[test]
fn indefinite_gram_reports_undersampling() {
    let model = FrozenModel { dim: 3 };
    let field = sample_field(&model, &[c(0.0, 0.0)], Budget { samples: 2, batches: 2, seed: 0 }).unwrap();
    match field.logdet(0, None) {
        Err(crate::error::BerryError::Undersampled { suggested, .. }) => assert!(suggested > 2),
        other => panic!("expected undersampling, got {other:?}"),
    }
}

#[test]
fn conjugation_laws_small_budget() {
    let data = torus(2, 2, 1);
    let ws = [c(0.31, 0.22), c(0.77, 0.58)];
    let report = conjugation_check(&data, &[], &ws, Budget::new(4_000, 9)).unwrap();
    assert!(report.passed(), "{:?}", report.violations);
}

#[test]
fn analytic_flux_counts_particles() {
    assert!((analytic_h_flux(&torus(1, 2, 2)) + 3.0).abs() < 1e-12);
    assert!((analytic_h_flux(&torus(2, 2, 1)) + 5.0).abs() < 1e-12);
}

#[test]
fn coarse_slices_land_near_prediction() {
    let spec = SliceSpec {
        grid: 8,
        step: 0.05,
        budget: Budget::new(4_000, 21),
    };
    let sphere = Surface::Sphere(SphereData::new(1, 2, 1).unwrap());
    let r = slice_chern_number(&sphere, &[], &spec).unwrap();
    assert!((r.measured + 2.0).abs() < 0.2, "{r:?}");
    let t = Surface::Torus(torus(1, 2, 2));
    let r = slice_chern_number(&t, &default_frozen(2), &spec).unwrap();
    assert!((r.measured + 3.0).abs() < 0.3, "{}", r.measured);
    assert!(r.periodic_flux.unwrap().value.abs() < 0.05);
}

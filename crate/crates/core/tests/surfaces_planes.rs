use std::f64::consts::PI;

use cauchylab::clifford_analysis::{cauchy_kernel, surface_cauchy_integral};
use cauchylab::complex_planes::{
    diagonal, is_lagrangian, random_unitary, special_lagrangian_test, totally_real_coefficient, PlaneBasis,
};
use cauchylab::fixtures::icosphere;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn kernel_is_odd_and_homogeneous_of_degree_one_minus_n() {
    let x = [0.3, -0.7, 1.1];
    let e = cauchy_kernel(&x, &[0.0; 3]).unwrap();
    let minus = cauchy_kernel(&[-0.3, 0.7, -1.1], &[0.0; 3]).unwrap();
    assert!(e.try_add(&minus).unwrap().max_abs() <= 1e-15);
    let doubled = cauchy_kernel(&[0.6, -1.4, 2.2], &[0.0; 3]).unwrap();
    assert!(doubled.scale(4.0).try_sub(&e).unwrap().max_abs() <= 1e-14);
    assert!(e.is_grade(1, 0.0));
    assert!(cauchy_kernel(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]).is_err());
}

#[test]
fn sphere_integral_is_the_same_constant_throughout_the_ball() {
    let sphere = icosphere(4).unwrap();
    let kappa = surface_cauchy_integral(&sphere, &[0.0; 3]).unwrap();
    assert!((kappa.norm() - 4.0 * PI).abs() <= 0.01 * 4.0 * PI, "κ = {}", kappa.norm());
    for x in [[0.2, 0.1, -0.3], [-0.5, 0.0, 0.1], [0.0, 0.6, 0.0]] {
        let v = surface_cauchy_integral(&sphere, &x).unwrap();
        assert!(v.try_sub(&kappa).unwrap().norm() <= 0.01 * kappa.norm());
    }
    for x in [[2.0, 0.0, 0.0], [1.5, -1.5, 0.5]] {
        assert!(surface_cauchy_integral(&sphere, &x).unwrap().norm() <= 0.01 * kappa.norm());
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn coefficient_ignores_the_real_basis_choice() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for m in 2..=4 {
        let vectors: Vec<Vec<Complex64>> = (0..m)
            .map(|_| (0..m).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
            .collect();
        let plane = PlaneBasis::new(vectors).unwrap();
        let change = DMatrix::from_fn(m, m, |i, j| if i == j { 2.0 } else { rng.gen_range(-0.5..0.5) });
        let a = totally_real_coefficient(&plane).unwrap();
        let b = totally_real_coefficient(&plane.rebased(&change).unwrap()).unwrap();
        assert!((0.0..=1.0 + 1e-12).contains(&a));
        assert!((a - b).abs() <= 1e-10, "m = {m}: {a} vs {b}");
    }
}

#[test]
fn unitary_images_of_real_space_are_lagrangian() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for m in 1..=5 {
        let plane = PlaneBasis::standard(m).unwrap().mapped(&random_unitary(m, &mut rng)).unwrap();
        assert!(is_lagrangian(&plane, 1e-10));
        assert!((totally_real_coefficient(&plane).unwrap() - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn special_lagrangian_depends_on_the_determinant_phase() {
    let theta = 0.4;
    let balanced = diagonal(&[Complex64::from_polar(1.0, theta), Complex64::from_polar(1.0, -theta)]);
    let plane = PlaneBasis::standard(2).unwrap().mapped(&balanced).unwrap();
    assert!(special_lagrangian_test(&plane, 1e-10).unwrap().special);

    let tilted = PlaneBasis::standard(2).unwrap().mapped(&diagonal(&[c(0.0, 1.0), c(1.0, 0.0)])).unwrap();
    let t = special_lagrangian_test(&tilted, 1e-10).unwrap();
    assert!(t.lagrangian && !t.special);

    let reversed = PlaneBasis::standard(2).unwrap().mapped(&diagonal(&[c(-1.0, 0.0), c(1.0, 0.0)])).unwrap();
    let t = special_lagrangian_test(&reversed, 1e-10).unwrap();
    assert!(t.special && t.reversed);
}

#[test]
fn degenerate_planes_are_rejected() {
    let v = vec![c(1.0, 0.0), c(0.0, 1.0)];
    assert!(PlaneBasis::new(vec![v.clone(), v]).is_err());
}

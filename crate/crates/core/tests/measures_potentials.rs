use std::f64::consts::PI;

use cauchylab::fixtures;
use cauchylab::measures::{ahlfors_constants, menger_curvature, symmetry_defect, DiscreteMeasure};
use cauchylab::potentials::{
    estimate_operator_norms, norm_band, potential, random_trial, truncated_riesz, truncated_riesz_all, SampleFunction,
    SweepConfig, TrialFamily,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn menger_curvature_is_reciprocal_circumradius() {
    for radius in [0.5, 2.0, 10.0] {
        let p = |t: f64| vec![radius * t.cos(), radius * t.sin()];
        let c = menger_curvature(&p(0.1), &p(1.7), &p(4.0)).unwrap();
        assert!((c - 1.0 / radius).abs() <= 1e-12 / radius);
    }
    assert_eq!(menger_curvature(&[0.0, 0.0], &[1.0, 1.0], &[3.0, 3.0]).unwrap(), 0.0);
    assert!(menger_curvature(&[0.0, 0.0], &[0.0, 0.0], &[1.0, 0.0]).is_err());
}

#[test]
fn grid_is_two_regular_and_symmetric_inside() {
    let mu = fixtures::square_grid(64).unwrap().measure().unwrap();
    let a = ahlfors_constants(&mu, 2.0, 64, (0.0, mu.diameter())).unwrap();
    assert!(a.band() <= 10.0, "band {}", a.band());
    let wrong = ahlfors_constants(&mu, 1.0, 64, (0.0, mu.diameter())).unwrap();
    assert!(wrong.band() > a.band());
    let centre = mu.point(64 * 32 + 32).to_vec();
    let d = symmetry_defect(&mu, &centre, 0.2).unwrap();
    assert!(d.normalized.unwrap() <= 1e-12);
}

#[test]
fn duplicate_atoms_merge_and_keep_mass() {
    let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 0.0]];
    let mu = DiscreteMeasure::new(2, &pts, &[1.0, 2.0, 3.0]).unwrap();
    assert_eq!(mu.len(), 2);
    assert_eq!(mu.merged_count(), 1);
    assert_eq!(mu.weight(0), 4.0);
    assert_eq!(mu.total_mass(), 6.0);
}

#[test]
fn disc_potential_of_one_at_centre_is_two_pi() {
    let set = fixtures::disc(1.0 / 128.0, 1.0).unwrap().regular_set().unwrap();
    let ones = SampleFunction::constant(set.len(), 1.0);
    let p = potential(&set, &ones, &[0.0, 0.0]).unwrap();
    assert!((p - 2.0 * PI).abs() <= 0.02 * 2.0 * PI, "P(1)(0) = {p}");
}

#[test]
fn riesz_all_agrees_with_pointwise_operator() {
    let set = fixtures::lipschitz_graph(16, 1.0).unwrap().regular_set().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = random_trial(&set, TrialFamily::Noise, &mut rng);
    let radii = [0.05, 0.1, 0.3, 0.6];
    let all = truncated_riesz_all(&set, &f, &radii).unwrap();
    for (k, &r) in radii.iter().enumerate() {
        for i in (0..set.len()).step_by(17) {
            let t = truncated_riesz(&set, &f, set.measure.point(i), r).unwrap();
            let norm = t.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((all[k][i] - norm).abs() <= 1e-10 * (1.0 + norm), "r = {r}, atom {i}");
        }
    }
}

#[test]
fn truncated_riesz_norms_are_uniform_on_grid() {
    let set = fixtures::square_grid(64).unwrap().regular_set().unwrap();
    let mu = &set.measure;
    let radii = set.dyadic_radii();
    let est = estimate_operator_norms(&set, &radii, &[2.0], &SweepConfig::default()).unwrap();
    let (lo, hi) = (4.0 * mu.median_spacing(), mu.diameter() / 4.0);
    assert!(radii.iter().filter(|&&r| r >= lo && r <= hi).count() >= 3);
    let band = norm_band(&est, "T_r", 2.0, lo, hi).unwrap();
    assert!(band <= 3.0, "band {band}");
}

use cauchylab::clifford::{blade_product, BladeIndex, Multivector, Paravector};
use proptest::prelude::*;

fn integer_mv(n: usize) -> impl Strategy<Value = Multivector> {
    prop::collection::vec(-4i32..=4, 1 << n).prop_map(move |c| Multivector::from_coeffs(n, c.into_iter().map(f64::from).collect()).unwrap())
}

fn triple() -> impl Strategy<Value = (Multivector, Multivector, Multivector)> {
    (1usize..=5).prop_flat_map(|n| (integer_mv(n), integer_mv(n), integer_mv(n)))
}

proptest! {
    #[test]
    fn product_is_associative_on_integers((a, b, c) in triple()) {
        let left = &(&a * &b) * &c;
        let right = &a * &(&b * &c);
        prop_assert_eq!(left.coeffs(), right.coeffs());
    }

    #[test]
    fn product_distributes_over_sums((a, b, c) in triple()) {
        let left = &a * &(&b + &c);
        let right = &(&a * &b) + &(&a * &c);
        prop_assert_eq!(left.coeffs(), right.coeffs());
    }

    #[test]
    fn vector_squares_to_minus_norm(v in prop::collection::vec(-5i32..=5, 1..=5)) {
        let v: Vec<f64> = v.into_iter().map(f64::from).collect();
        let x = Multivector::vector(&v).unwrap();
        let sq = &x * &x;
        let expected = -v.iter().map(|c| c * c).sum::<f64>();
        prop_assert_eq!(sq.scalar_part(), expected);
        prop_assert!(sq.is_grade(0, 0.0));
    }

    #[test]
    fn paravector_inverse_round_trips(b0 in -10.0f64..10.0, bs in prop::collection::vec(-10.0f64..10.0, 1..=5)) {
        prop_assume!(b0 * b0 + bs.iter().map(|x| x * x).sum::<f64>() > 1e-6);
        let b = Paravector::new(b0, bs);
        let n = b.n();
        let prod = &b.to_multivector().unwrap() * &b.inverse().unwrap().to_multivector().unwrap();
        let err = prod.try_sub(&Multivector::scalar(n, 1.0).unwrap()).unwrap().max_abs();
        prop_assert!(err <= 1e-12, "round trip error {err}");
    }

    #[test]
    fn paravector_norm_is_multiplicative(a0 in -3.0f64..3.0, a in prop::collection::vec(-3.0f64..3.0, 3), b0 in -3.0f64..3.0, b in prop::collection::vec(-3.0f64..3.0, 3)) {
        let pa = Paravector::new(a0, a);
        let pb = Paravector::new(b0, b);
        let prod = &pa.to_multivector().unwrap() * &pb.to_multivector().unwrap();
        let expected = (pa.norm_sq() * pb.norm_sq()).sqrt();
        prop_assert!((prod.norm() - expected).abs() <= 1e-12 * (1.0 + expected));
    }
}

#[test]
fn blade_signs_follow_generator_reordering() {
    let e12 = BladeIndex::from_generators(&[1, 2]);
    let e1 = BladeIndex::generator(1);
    let e2 = BladeIndex::generator(2);
    assert_eq!(blade_product(e1, e2, 2).unwrap(), (1.0, e12));
    assert_eq!(blade_product(e2, e1, 2).unwrap(), (-1.0, e12));
    assert_eq!(blade_product(e12, e12, 2).unwrap(), (-1.0, BladeIndex(0)));
    assert!(blade_product(e12, e1, 1).is_err());
}

#[test]
fn mismatched_dimensions_are_rejected() {
    let a = Multivector::scalar(2, 1.0).unwrap();
    let b = Multivector::scalar(3, 1.0).unwrap();
    assert!(a.try_mul(&b).is_err());
    assert!(a.try_add(&b).is_err());
}

#[path = "support/props.rs"]
mod props;

use defcoh_core::{AlgebraSpec, CPoly, NCPoly, Scalar};
use proptest::prelude::*;

use props::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coboundary_squares_to_zero(f in (0usize..=2).prop_flat_map(cochain)) {
        delta_squared(&f)?;
    }

    #[test]
    fn one_two_bracket_formula(f1 in cochain(1), f2 in cochain(2), a in poly(3), b in poly(3)) {
        bracket_one_two(&f1, &f2, &a, &b)?;
    }

    #[test]
    fn two_zero_bracket_formula(f2 in cochain(2), c in poly(3), a in poly(3)) {
        bracket_two_zero(&f2, &c, &a)?;
    }

    #[test]
    fn one_zero_bracket_formula(f1 in cochain(1), c in poly(3)) {
        bracket_one_zero(&f1, &c)?;
    }

    #[test]
    fn derivation_bracket_is_leibniz_on_cup(d in vector_field(), f in cochain(1), g in cochain(2)) {
        leibniz(&d, &f, &g)?;
    }

    #[test]
    fn bidegrees_add(f in (0usize..=2).prop_flat_map(homogeneous), g in (0usize..=2).prop_flat_map(homogeneous)) {
        bidegree_additive(&f, &g)?;
    }

    #[test]
    fn cup_of_inner_lifts(c1 in mono(2), c2 in mono(2)) {
        cup_of_lifts(c1, c2)?;
    }

    #[test]
    fn graded_antisymmetry(f in (0usize..=2).prop_flat_map(cochain), g in (0usize..=2).prop_flat_map(cochain)) {
        let (p, q) = (f.arity() as i64, g.arity() as i64);
        let sign = if ((p - 1) * (q - 1)).rem_euclid(2) == 0 { -1 } else { 1 };
        prop_assert_eq!(f.bracket(&g), g.bracket(&f).scale(&Scalar::from_int(sign)));
    }

    #[test]
    fn normal_forms_multiply_associatively(
        a in poly(2), b in poly(2), c in poly(2), qn in 1i64..=5, qd in 1i64..=3, h in -2i64..=2
    ) {
        let alg = AlgebraSpec::new(Scalar::from_ratio(qn, qd), Scalar::from_int(h)).unwrap();
        let (a, b, c) = (NCPoly::from_cpoly(&alg, &a), NCPoly::from_cpoly(&alg, &b), NCPoly::from_cpoly(&alg, &c));
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn commutative_case_is_polynomial_product(a in poly(3), b in poly(3)) {
        let alg = AlgebraSpec::polynomial();
        let p = NCPoly::from_cpoly(&alg, &a).mul(&NCPoly::from_cpoly(&alg, &b)).unwrap();
        prop_assert_eq!(p.to_cpoly(), a.mul(&b));
    }

    #[test]
    fn rational_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
        let _ = CPoly::constant(a);
    }
}

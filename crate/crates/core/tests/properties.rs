//! Property tests for the group actions, the genus character and the Weil representation.

use heegner_lift::genus::{chi_delta, TwistData};
use heegner_lift::greens::GreenEvaluator;
use heegner_lift::lattice::{point_of_vector, LatticeVector, Mat2, UpperHalfPoint};
use heegner_lift::weilrep::{MetaplecticElement, WeilRep};
use num_rational::Rational64;
use proptest::prelude::*;

/// A product of T^{±1} and [[1, 0], [±N, 1]], which lies in Γ₀(N).
fn gamma0_word(level: i64) -> impl Strategy<Value = Mat2> {
    prop::collection::vec(0..4u8, 0..8).prop_map(move |word| {
        word.into_iter().fold(Mat2::IDENTITY, |g, letter| {
            let step = match letter {
                0 => Mat2::new(1, 1, 0, 1),
                1 => Mat2::new(1, -1, 0, 1),
                2 => Mat2::new(1, 0, level, 1),
                _ => Mat2::new(1, 0, -level, 1),
            };
            g * step
        })
    })
}

fn level() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![1i64, 2, 3, 6])
}

fn definite_vector(level: i64) -> impl Strategy<Value = LatticeVector> {
    (1..6i64, -12..12i64, 1..6i64, prop::bool::ANY)
        .prop_map(move |(a, b, c, flip)| {
            let w = LatticeVector::new(a, b, c);
            if flip {
                w.neg()
            } else {
                w
            }
        })
        .prop_filter("positive norm", move |w| w.disc(level) < 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_and_coset_are_gamma0_invariant(
        (n, w, g) in level().prop_flat_map(|n| (Just(n), (-9..9i64, -20..20i64, -9..9i64), gamma0_word(n)))
    ) {
        let w = LatticeVector::new(w.0, w.1, w.2);
        prop_assert_eq!(g.det(), 1);
        prop_assert!(g.in_gamma0(n));
        let gw = w.conjugate(&g, n).expect("Γ₀(N) preserves L♯");
        prop_assert_eq!(gw.quad_value(n), w.quad_value(n));
        prop_assert_eq!(gw.coset(n), w.coset(n));
        let back = gw.conjugate(&g.inverse(), n).unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn heegner_point_is_equivariant(
        (n, w, g) in level().prop_flat_map(|n| (Just(n), definite_vector(n), gamma0_word(n)))
    ) {
        let gw = w.conjugate(&g, n).unwrap();
        let lhs = point_of_vector(&gw, n).unwrap();
        let rhs = point_of_vector(&w, n).unwrap().act(&g);
        prop_assert!((lhs.x - rhs.x).abs() < 1e-9 * (1.0 + rhs.x.abs()));
        prop_assert!((lhs.y - rhs.y).abs() < 1e-9 * (1.0 + rhs.y));
    }

    #[test]
    fn genus_character_is_class_invariant(
        (w, g) in (definite_vector(6), gamma0_word(6)),
        twist_index in 0..2usize,
    ) {
        let twist = [TwistData::new(6, 73, 1).unwrap(), TwistData::new(6, 12, 6).unwrap()][twist_index];
        let gw = w.conjugate(&g, 6).unwrap();
        let (a, b) = (chi_delta(&w, &twist), chi_delta(&gw, &twist));
        prop_assume!(a.is_ok() && b.is_ok());
        prop_assert_eq!(a.unwrap(), b.unwrap());
    }

    #[test]
    fn weil_representation_is_unitary(n in level(), word in prop::collection::vec(0..3u8, 1..12)) {
        let rep = WeilRep::new(n);
        let g = word.into_iter().fold(MetaplecticElement::identity(), |g, k| match k {
            0 => g * MetaplecticElement::s(),
            1 => g * MetaplecticElement::t(),
            _ => g * MetaplecticElement::center(),
        });
        prop_assert!(rep.rho(&g).unitarity_defect() < 1e-10);
    }

    #[test]
    fn weil_representation_is_multiplicative(n in level(), a in prop::collection::vec(0..2u8, 1..6), b in prop::collection::vec(0..2u8, 1..6)) {
        let rep = WeilRep::new(n);
        let word = |w: &[u8]| w.iter().fold(MetaplecticElement::identity(), |g, &k| {
            if k == 0 { g * MetaplecticElement::s() } else { g * MetaplecticElement::t() }
        });
        let (ga, gb) = (word(&a), word(&b));
        let lhs = rep.rho(&(ga * gb));
        let rhs = &rep.rho(&ga) * &rep.rho(&gb);
        prop_assert!(lhs.max_diff(&rhs) < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn green_function_is_gamma0_invariant(
        g in gamma0_word(6),
        x in -0.5..0.5f64,
        y in 0.4..2.0f64,
    ) {
        let twist = TwistData::new(6, 73, 1).unwrap();
        let green = GreenEvaluator::new(twist, Rational64::new(-1, 24), 1, 1.0, 1e-12).unwrap();
        let z = UpperHalfPoint { x, y };
        let gz = z.act(&g);
        prop_assume!(gz.y > 0.05);
        let (a, b) = (green.green_value(z).unwrap(), green.green_value(gz).unwrap());
        prop_assert!((a - b).abs() < 1e-8 * (1.0 + a.abs()), "{} vs {}", a, b);
    }
}

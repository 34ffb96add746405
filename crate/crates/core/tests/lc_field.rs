use lcbayes_core::{LcNumber, Rational, Valuation};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn exponent() -> impl Strategy<Value = Rational> {
    prop_oneof![
        4 => (-2i64..=3).prop_map(|e| Rational::from_integer(e.into())),
        1 => (-3i64..=5).prop_map(|e| Rational::new(e.into(), 2.into())),
    ]
}

/// Exact elements with up to four terms.
fn lc() -> impl Strategy<Value = LcNumber> {
    prop::collection::vec((exponent(), rational()), 0..=4).prop_map(LcNumber::from_terms)
}

/// Exact elements with no negative exponents.
fn near_standard() -> impl Strategy<Value = LcNumber> {
    prop::collection::vec(((0i64..=4).prop_map(|e| Rational::from_integer(e.into())), rational()), 0..=4)
        .prop_map(LcNumber::from_terms)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(a in lc(), b in lc(), c in lc()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&a - &a, LcNumber::zero());
        prop_assert_eq!(&a * LcNumber::one(), a.clone());
    }

    #[test]
    fn order_is_compatible(a in lc(), b in lc(), c in lc()) {
        if a < b {
            prop_assert!(&a + &c < &b + &c);
            if c > LcNumber::zero() {
                prop_assert!(&a * &c < &b * &c);
            }
        }
        // trichotomy through the sign of the difference
        let d = &a - &b;
        prop_assert_eq!(a.cmp(&b), d.signum().cmp(&0));
    }

    #[test]
    fn inverse_agrees_with_one(a in lc()) {
        prop_assume!(!a.is_zero());
        let prod = &a * a.inv().unwrap();
        prop_assert!(prod.agrees_with(&LcNumber::one()), "a = {}, a*inv(a) = {}", a, prod);
        prop_assert_eq!(prod.st().unwrap(), Rational::one());
    }

    #[test]
    fn standard_part_is_a_homomorphism(a in near_standard(), b in near_standard()) {
        let (sa, sb) = (a.st().unwrap(), b.st().unwrap());
        prop_assert_eq!((&a + &b).st().unwrap(), &sa + &sb);
        prop_assert_eq!((&a * &b).st().unwrap(), &sa * &sb);
        prop_assert_eq!((-&a).st().unwrap(), -sa.clone());
        if !sa.is_zero() {
            prop_assert_eq!(a.inv().unwrap().st().unwrap(), sa.recip());
        }
    }

    #[test]
    fn much_greater_witness(x in lc(), y in lc()) {
        prop_assume!(!x.is_zero() && !y.is_zero());
        let (x, y) = (x.abs(), y.abs());
        match x.much_greater_witness(&y) {
            None => prop_assert!(x.much_greater(&y)),
            Some(g) => {
                prop_assert!(!x.much_greater(&y));
                prop_assert!(g > Rational::zero());
                prop_assert!(LcNumber::from_rational(g) * &x <= y);
            }
        }
    }

    #[test]
    fn much_greater_is_valuation_driven(x in lc(), y in lc()) {
        prop_assume!(!x.is_zero() && !y.is_zero());
        let (x, y) = (x.abs(), y.abs());
        let strictly_smaller = match (x.valuation(), y.valuation()) {
            (Valuation::Finite(vx), Valuation::Finite(vy)) => vy > vx,
            _ => unreachable!(),
        };
        prop_assert_eq!(x.much_greater(&y), strictly_smaller);
    }

    #[test]
    fn display_round_trips(a in lc()) {
        let shown = a.to_string();
        let back: LcNumber = shown.parse().unwrap();
        prop_assert_eq!(back, a);
    }
}

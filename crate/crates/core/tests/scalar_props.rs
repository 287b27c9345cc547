use proptest::prelude::*;
use toroidal_core::scalars::{binomial_coeff, int, rat, Cyclotomic, Rational};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..10, 1i64..6).prop_map(|(n, d)| rat(n, d))
}

/// Random element of Q(ω_M) for M drawn from a few small orders.
fn cyclotomic() -> impl Strategy<Value = Cyclotomic> {
    (prop::sample::select(vec![1u32, 3, 4, 5, 6, 8, 12]), prop::collection::vec((small_rational(), 0i64..12), 1..4))
        .prop_map(|(m, terms)| {
            let mut acc = Cyclotomic::zero();
            for (q, k) in terms {
                acc += &(&Cyclotomic::from_rational(q) * &Cyclotomic::root_of_unity(m, k));
            }
            acc
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in cyclotomic(), b in cyclotomic(), c in cyclotomic()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv()).is_one());
        }
    }

    #[test]
    fn integer_pow_is_repeated_mul(a in cyclotomic(), n in 0i64..6) {
        let mut acc = Cyclotomic::one();
        for _ in 0..n {
            acc = &acc * &a;
        }
        prop_assert_eq!(a.pow(n), acc);
    }

    #[test]
    fn binomial_pascal_rule(num in -7i64..8, den in 1i64..5, i in 1u32..7) {
        // C(α+1, i) = C(α, i) + C(α, i-1)
        let alpha = rat(num, den);
        let lhs = binomial_coeff(&(&alpha + int(1)), i);
        let rhs = binomial_coeff(&alpha, i) + binomial_coeff(&alpha, i - 1);
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn roots_of_unity_up_to_default_cap() {
    for m in [1u32, 2, 7, 60, 120, 210, 360] {
        let z = Cyclotomic::root_of_unity(m, 1);
        assert!(z.pow(m as i64).is_one());
        if m > 1 {
            let mut sum = Cyclotomic::zero();
            let mut p = Cyclotomic::one();
            for _ in 0..m {
                sum += &p;
                p = &p * &z;
            }
            assert!(sum.is_zero(), "order {m}");
        }
    }
}

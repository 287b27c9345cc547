use proptest::prelude::*;
use toroidal_core::formal::{binomial_expand, delta_expand, delta_expand_dual, Sign, Window};
use toroidal_core::scalars::{binomial_coeff, int, rat, Cyclotomic, Rational};

fn window_for(alpha: &Rational) -> Window {
    let n = i64::try_from(alpha.denom().clone()).unwrap() as u32;
    Window::new(vec![n, n, 1], &[(-6, 6), (-6, 6), (-2, 6)]).unwrap()
}

#[test]
fn delta_identity_holds_on_visible_window() {
    for alpha in [int(0), rat(1, 2), rat(1, 3), rat(2, 3)] {
        let w = window_for(&alpha);
        let lhs = delta_expand(&alpha, &w).unwrap();
        let rhs = delta_expand_dual(&alpha, &w).unwrap();
        assert!(!lhs.is_empty());
        assert_eq!(lhs.terms(), rhs.terms(), "alpha = {alpha}");
    }
}

#[test]
fn delta_coefficients_match_direct_formula() {
    // coefficient of z0^{-n-1-α} z1^{n+α-i} z2^i is (-1)^i C(n+α, i)
    let alpha = rat(1, 3);
    let w = window_for(&alpha);
    let lhs = delta_expand(&alpha, &w).unwrap();
    for n in -3i64..3 {
        for i in 0u32..4 {
            let na = int(n) + &alpha;
            let e = [-(&na) - int(1), &na - int(i as i64), int(i as i64)];
            let mut c = binomial_coeff(&na, i);
            if i % 2 == 1 {
                c = -c;
            }
            assert_eq!(lhs.coefficient(&e).unwrap(), Cyclotomic::from_rational(c));
        }
    }
}

proptest! {
    #[test]
    fn binomial_expansion_squares(num in -4i64..5, den in prop::sample::select(vec![1i64, 2, 3])) {
        // (x+y)^α (x+y)^β = (x+y)^{α+β} away from the lower edge of the x window
        let a = rat(num, den);
        let b = rat(1, den);
        let w = Window::new(vec![den as u32, 1], &[(-30, 30), (0, 5)]).unwrap();
        let pa = binomial_expand(Sign::Plus, &a, &w).unwrap();
        let pb = binomial_expand(Sign::Plus, &b, &w).unwrap();
        let prod = pa.mul(&pb).unwrap();
        let direct = binomial_expand(Sign::Plus, &(&a + &b), &w).unwrap();
        for (e, c) in direct.terms() {
            prop_assert_eq!(prod.coefficient_scaled(e).unwrap(), c.clone());
        }
    }
}

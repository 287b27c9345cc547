use proptest::prelude::*;
use toroidal_core::repn::{unit, vec_sub, InducedModule};
use toroidal_core::scalars::{rat, Cyclotomic};
use toroidal_core::toroidal::{mode_allows, tau_component, ToroidalElement, Twist};
use toroidal_core::verify::Scenario;

fn sl2() -> Scenario {
    Scenario::sl2_with(&rat(2, 1), 1).unwrap()
}

/// A τ element: components of random algebra elements in random modes, plus a central part.
fn element() -> impl Strategy<Value = Vec<(Vec<i64>, i64, i64, i64)>> {
    prop::collection::vec((prop::collection::vec(-2i64..3, 3), -4i64..5, -2i64..3, -2i64..3), 1..4)
}

fn build(sc: &Scenario, parts: &[(Vec<i64>, i64, i64, i64)]) -> ToroidalElement {
    let mut x = ToroidalElement::zero(sc.alg.n0());
    for (a, t0s, m, c) in parts {
        let a: Vec<Cyclotomic> = a.iter().map(|&v| Cyclotomic::from_int(v)).collect();
        x = x.add(&tau_component(&sc.alg, &a, *t0s, &[*m]));
        x = x.add(&ToroidalElement::central_element(sc.alg.n0(), Cyclotomic::from_int(*c)));
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_is_antisymmetric(x in element(), y in element()) {
        let sc = sl2();
        let (x, y) = (build(&sc, &x), build(&sc, &y));
        let xy = x.bracket(&y, &sc.alg);
        let yx = y.bracket(&x, &sc.alg);
        prop_assert!(xy.add(&yx).is_zero());
    }

    #[test]
    fn bracket_satisfies_jacobi(x in element(), y in element(), z in element()) {
        let sc = sl2();
        let (x, y, z) = (build(&sc, &x), build(&sc, &y), build(&sc, &z));
        let a = x.bracket(&y, &sc.alg).bracket(&z, &sc.alg);
        let b = y.bracket(&z, &sc.alg).bracket(&x, &sc.alg);
        let c = z.bracket(&x, &sc.alg).bracket(&y, &sc.alg);
        prop_assert!(a.add(&b).add(&c).is_zero());
    }

    #[test]
    fn twisted_modes_close_under_bracket(x in element(), y in element()) {
        let sc = sl2();
        let xy = build(&sc, &x).bracket(&build(&sc, &y), &sc.alg);
        for ((t0s, m), coords) in xy.terms() {
            for (i, c) in coords.iter().enumerate() {
                prop_assert!(c.is_zero() || mode_allows(&sc.alg, Twist::Tau, i, *t0s, m));
            }
        }
    }

    #[test]
    fn structure_constants_match_realization(x in element(), y in element()) {
        let sc = sl2();
        let (x, y) = (build(&sc, &x), build(&sc, &y));
        prop_assert_eq!(x.bracket(&y, &sc.alg), x.bracket_oracle(&y, &sc.alg));
    }

    #[test]
    fn twisted_vacuum_is_a_representation(x in element(), y in element(), pick in 0usize..64) {
        let sc = sl2();
        let w: &InducedModule = &sc.w;
        let v = unit(w.basis()[pick % w.basis().len()]);
        let (x, y) = (build(&sc, &x), build(&sc, &y));
        let xyv = w.act(&x, &w.act(&y, &v).vector).vector;
        let yxv = w.act(&y, &w.act(&x, &v).vector).vector;
        let br = w.act(&x.bracket(&y, &sc.alg), &v).vector;
        prop_assert_eq!(vec_sub(&xyv, &yxv), br);
    }
}

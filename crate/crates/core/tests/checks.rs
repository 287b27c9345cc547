use toroidal_core::repn::unit;
use toroidal_core::scalars::rat;
use toroidal_core::toroidal::CommutatorRanges;
use toroidal_core::verify::*;
use toroidal_core::vertexops::SampleWindow;

fn small() -> Scenario {
    Scenario::sl2_with(&rat(2, 1), 1).unwrap()
}

#[test]
fn jacobi_h_with_e_minus_f_on_default_scenario() {
    let sc = Scenario::sl2_default().unwrap();
    let r = check_twisted_jacobi(&sc, &sc.seed(1), &sc.seed(0), &[sc.w.vacuum()]).unwrap();
    assert!(r.passed, "{}", r.to_json_pretty());
    assert!(r.checked > 100);
}

#[test]
fn jacobi_with_vacuum_first_factor() {
    let sc = small();
    let one = unit(sc.vl.vacuum());
    for j in 0..3 {
        let r = check_twisted_jacobi(&sc, &one, &sc.seed(j), &sc.w_samples()).unwrap();
        assert!(r.passed);
    }
}

#[test]
fn jacobi_rejects_inhomogeneous_first_factor() {
    let sc = small();
    let mut u = sc.seed(0);
    u.extend(sc.seed(1));
    assert!(check_twisted_jacobi(&sc, &u, &sc.seed(2), &[sc.w.vacuum()]).is_err());
}

#[test]
fn untwisted_specialization_agrees_with_mode_jacobi() {
    let sc = Scenario::sl2_untwisted(&rat(2, 1), 1).unwrap();
    let ws = sc.w_samples();
    for i in 0..3 {
        for j in 0..3 {
            let a = check_twisted_jacobi(&sc, &sc.seed(i), &sc.seed(j), &ws).unwrap();
            let b = check_jacobi(&sc, &sc.seed(i), &sc.seed(j), &ws).unwrap();
            assert!(a.passed && b.passed, "{i} {j}");
        }
    }
}

#[test]
fn mode_jacobi_needs_trivial_sigma0() {
    let sc = small();
    assert!(check_jacobi(&sc, &sc.seed(0), &sc.seed(0), &[sc.w.vacuum()]).is_err());
}

#[test]
fn weak_commutativity_of_equal_commuting_fields() {
    let sc = small();
    let e = sc.alg.to_homogeneous(&sc.lie.basis_vector(0));
    let ye = sc.la.current_series(&e);
    let win = SampleWindow::low_degree(&sc.vl, 1, 3, 1);
    let (r, k) = check_weak_commutativity(&sc.la, ye, ye, &win, 8, &sc.id).unwrap();
    assert_eq!(k, 0);
    assert!(r.passed);
}

#[test]
fn weak_associativity_e_f_on_vacuum() {
    let sc = Scenario::sl2_default().unwrap();
    let e = sc.alg.to_homogeneous(&sc.lie.basis_vector(0));
    let f = sc.alg.to_homogeneous(&sc.lie.basis_vector(2));
    let to_vec = |c: &[toroidal_core::scalars::Cyclotomic]| {
        let mut v = toroidal_core::repn::Vector::new();
        for (i, x) in c.iter().enumerate() {
            if !x.is_zero() {
                v.insert(sc.vl.seed_elem(i), x.clone());
            }
        }
        v
    };
    let (ev, fv) = (to_vec(&e), to_vec(&f));
    // e mixes both classes, so check each homogeneous part
    for i in [0usize, 2] {
        let part: toroidal_core::repn::Vector = ev.iter().filter(|(id, _)| **id == sc.vl.seed_elem(i)).map(|(a, b)| (*a, b.clone())).collect();
        let r = check_weak_associativity(&sc, &part, &fv, sc.w.vacuum()).unwrap();
        assert!(r.passed, "{}", r.to_json_pretty());
    }
}

#[test]
fn iterate_formula_currents_and_vacuum() {
    let sc = small();
    let one = unit(sc.vl.vacuum());
    let r = check_iterate_formula(&sc, &one, &sc.seed(2), &[sc.w.vacuum()]).unwrap();
    assert!(r.passed);
    for i in 0..3 {
        let r = check_iterate_formula(&sc, &sc.seed(i), &sc.seed((i + 1) % 3), &sc.w_samples()).unwrap();
        assert!(r.passed, "{}", r.to_json_pretty());
    }
}

#[test]
fn equivariance_on_vacuum_and_seeds() {
    let sc = small();
    let mut vs = vec![sc.vl.vacuum()];
    vs.extend((0..3).map(|i| sc.vl.seed_elem(i)));
    let r = check_equivariance(&sc, &vs, 1, &sc.w_samples()).unwrap();
    assert!(r.passed);
    assert!(check_equivariance(&sc, &vs, 2, &sc.w_samples()).is_err());
}

#[test]
fn lifted_chevalley_involution_is_an_automorphism() {
    let sc = small();
    let r = check_va_automorphism(&sc, 0, 50, 3);
    assert!(r.passed, "{}", r.to_json_pretty());
    assert_eq!(r.seed, Some(3));
}

#[test]
fn identity_field_bracket_reading() {
    let sc = small();
    let win = sc.sample_window();
    let b = sc.wa.current_basis(2);
    // 1_W is local with everything at order 0, so every mode j ≥ 0 vanishes
    let r = check_bracket_reading(&sc.wa, sc.wa.identity(), b, &[0], &[], &win, 8, &sc.id).unwrap();
    assert!(r.passed);
}

#[test]
fn wrong_candidate_is_caught() {
    let sc = small();
    let win = sc.sample_window();
    let (a, b) = (sc.wa.current_basis(0), sc.wa.current_basis(2));
    // [e-f, e+f] = 2h, offered as h
    let r = check_bracket_reading(&sc.wa, a, b, &[1], &[sc.wa.current_basis(1)], &win, 8, &sc.id).unwrap();
    assert!(!r.passed);
    assert!(!r.failures.is_empty());
}

#[test]
fn perturbed_constant_breaks_mode_commutator() {
    let sc = Scenario::sl2_perturbed(0, 2, 1, &rat(2, 1), 1).unwrap();
    let r = check_toroidal_brackets(&sc, &CommutatorRanges { mode_bound: 2, spatial_bound: 2, delta_window: 6 }).unwrap();
    assert!(!r.passed);
    assert!(!r.failures[0].exponent.is_empty());
}

#[test]
fn reports_serialize_with_schema_fields() {
    let sc = small();
    let r = check_mode_table(&sc).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json_pretty()).unwrap();
    for key in ["identity", "anchor", "scenario", "checked", "failures", "skipped", "passed"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

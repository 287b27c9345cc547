use std::rc::Rc;

use toroidal_core::formal::Window;
use toroidal_core::repn::{unit, InducedModule};
use toroidal_core::scalars::{rat, Cyclotomic, SparseEchelon};
use toroidal_core::vertexops::{
    find_locality_order, fingerprint, generate_closure, sigma_on_mode, support_violations, ClosureCaps, FieldArena,
    SampleWindow, VertexError,
};
use toroidal_core::verify::Scenario;

fn small() -> Scenario {
    Scenario::sl2_with(&rat(2, 1), 1).unwrap()
}

#[test]
fn loop_locality_orders() {
    let sc = small();
    let win = SampleWindow::low_degree(&sc.vl, 1, 3, 1);
    // e and f in eigenbasis coordinates
    let e = sc.alg.to_homogeneous(&sc.lie.basis_vector(0));
    let f = sc.alg.to_homogeneous(&sc.lie.basis_vector(2));
    let (ye, yf) = (sc.la.current_series(&e), sc.la.current_series(&f));
    assert_eq!(find_locality_order(&sc.la, ye, ye, &win, 8).unwrap(), 0);
    assert_eq!(find_locality_order(&sc.la, ye, yf, &win, 8).unwrap(), 2);
    assert_eq!(find_locality_order(&sc.la, sc.la.identity(), yf, &win, 8).unwrap(), 0);
}

#[test]
fn locality_needs_a_visible_window() {
    let sc = small();
    let win = SampleWindow { mode_bound: 0, spatial: 0, vectors: vec![] };
    let h = sc.wa.current_basis(1);
    assert_eq!(find_locality_order(&sc.wa, h, h, &win, 8), Err(VertexError::WindowTooSmall));
}

#[test]
fn current_coefficients() {
    let sc = small();
    let h = sc.wa.current_basis(1);
    let cols: Vec<u32> = sc.w.basis().to_vec();
    let win = Window::cube(vec![2, 1], 2);
    let s = sc.wa.operator_series(h, &cols, &win);
    // h has class 1, so integral powers of x0 carry nothing
    for (e, m) in s.terms() {
        if e[0] % 2 == 0 {
            assert!(m.entries.is_empty(), "{e:?}");
        }
    }
    let id = sc.wa.operator_series(sc.wa.identity(), &cols, &win);
    for (e, m) in id.terms() {
        if e == &vec![-2, 0] {
            assert_eq!(m.entries.len(), cols.len());
            assert!(m.entries.iter().all(|((r, c), v)| r == c && v.is_one()));
        } else {
            assert!(m.entries.is_empty(), "{e:?} {:?}", m.entries.len());
        }
    }
}

#[test]
fn sigma_scales_by_class() {
    let sc = small();
    let vac = unit(sc.w.vacuum());
    for i in 0..3 {
        let a = sc.wa.current_basis(i);
        let s = sc.alg.class0(i);
        for r in -4..=0 {
            let plain = sc.wa.apply(a, r, &[sc.alg.residue(i)[1] as i64], &vac);
            let twisted = sigma_on_mode(&sc.wa, a, r, &[sc.alg.residue(i)[1] as i64], &vac);
            let sign = if s == 1 { Cyclotomic::from_int(-1) } else { Cyclotomic::one() };
            assert_eq!(twisted, toroidal_core::repn::vec_scale(&plain, &sign));
        }
    }
}

#[test]
fn products_follow_support_law_and_grading() {
    let sc = small();
    let win = sc.sample_window();
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = (sc.wa.current_basis(i), sc.wa.current_basis(j));
            for m0 in -1..2 {
                let p = sc.wa.product_default(a, m0, &[1], b);
                if p == sc.wa.zero() {
                    continue;
                }
                assert_eq!(sc.wa.class(p), Some((sc.alg.class0(i) + sc.alg.class0(j)) % 2));
                assert!(support_violations(&sc.wa, p, &win).is_empty());
            }
            assert_eq!(sc.wa.product_default(a, 2, &[0], b), sc.wa.zero());
        }
    }
}

#[test]
fn closure_contains_brackets_and_central_terms() {
    let sc = small();
    let win = sc.sample_window();
    let gens: Vec<usize> = (0..3).map(|i| sc.wa.current_basis(i)).collect();
    let caps = ClosureCaps { depth: 1, max_members: 24, ..ClosureCaps::default() };
    let cl = generate_closure(&sc.wa, &gens, &caps, &win).unwrap();
    assert_eq!(cl.members[0].label, "1_W");
    let mut ech = SparseEchelon::new();
    for m in &cl.members {
        ech.insert(&fingerprint(&sc.wa, m.node, &win));
        assert!(m.locality.iter().all(|&k| k <= 8));
    }
    for i in 0..3 {
        for j in 0..3 {
            let (bi, bj) = (sc.alg.basis_vector(i), sc.alg.basis_vector(j));
            let br = sc.wa.current_series(&sc.alg.oracle_bracket(&bi, &bj));
            assert!(ech.reduce(&fingerprint(&sc.wa, br, &win)).is_empty());
        }
    }
}

#[test]
fn closure_reports_cap_exhaustion() {
    let sc = small();
    let win = sc.sample_window();
    let gens: Vec<usize> = (0..3).map(|i| sc.wa.current_basis(i)).collect();
    let caps = ClosureCaps { depth: 1, max_members: 3, ..ClosureCaps::default() };
    let cl = generate_closure(&sc.wa, &gens, &caps, &win).unwrap();
    assert!(cl.exhausted);
    assert!(!cl.unclosed.is_empty());
}

#[test]
fn twisted_y_on_small_vectors() {
    let sc = small();
    let one = unit(sc.vl.vacuum());
    assert_eq!(sc.y_w(&one), sc.wa.identity());
    for i in 0..3 {
        assert_eq!(sc.y_w(&sc.seed(i)), sc.wa.current_basis(i));
    }
}

#[test]
fn twisted_y_intertwines_sigma0() {
    let sc = small();
    let win = sc.sample_window();
    let pts = win.spatial_points(1);
    for &v in sc.vl.basis().iter().filter(|&&v| sc.vl.depth(v) <= 2) {
        let vv = unit(v);
        let lifted = sc.vl.lift_automorphism(0, &vv);
        let (a, b) = (sc.y_w(&lifted), sc.y_w(&vv));
        for &w in &win.vectors {
            for r in -4..=4 {
                for n in &pts {
                    assert_eq!(sc.wa.apply(a, r, n, &unit(w)), sigma_on_mode(&sc.wa, b, r, n, &unit(w)));
                }
            }
        }
    }
}

#[test]
fn arena_over_fresh_module_starts_with_identity() {
    let sc = small();
    let m = InducedModule::induce_twisted_vacuum(sc.alg.clone(), Cyclotomic::one(), &rat(1, 1), 1).unwrap();
    let ar = FieldArena::new(Rc::new(m));
    assert_eq!(ar.label(ar.identity()), "1_W");
    assert_eq!(ar.len(), 2);
}

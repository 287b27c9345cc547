//! Identity checkers. Each one expands both sides on a window of exponents, applies them to
//! designated module vectors and compares exactly, producing a [`CheckReport`].

use std::rc::Rc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::liealg::{decompose, unchecked_family, validate_family, AutomorphismFamily, HomogeneousAlgebra, LieAlgebra, LieError};
use crate::report::CheckReport;
use crate::repn::{unit, vec_axpy, vec_scale, InducedModule, RepnError, Vector};
use crate::scalars::{rat, Cyclotomic, Matrix, Rational};
use crate::toroidal::{check_mode_commutator, CommutatorRanges, ModeFamily, Twist};
use crate::vertexops::{
    binom, find_locality_order, generate_closure, locality_residual, sign, Closure, ClosureCaps, FieldArena, NodeId,
    ProductForm, SampleWindow, VertexError,
};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Repn(#[from] RepnError),
    #[error(transparent)]
    Vertex(#[from] VertexError),
    #[error(transparent)]
    Formal(#[from] crate::formal::FormalError),
    #[error("{0}")]
    Input(String),
}

/// Exponent and sample ranges shared by the module-level checks.
#[derive(Clone, Debug)]
pub struct CheckWindow {
    /// `|e| ≤ exponent_bound` for every `x0`-type exponent (before scaling by `N_0`).
    pub exponent_bound: i64,
    /// Spatial exponents in `[-spatial, spatial]`.
    pub spatial: i64,
    /// Sample vectors of `W` have scaled degree at most this.
    pub sample_degree_scaled: i64,
    pub locality_cap: i64,
}

impl Default for CheckWindow {
    fn default() -> Self {
        CheckWindow { exponent_bound: 3, spatial: 1, sample_degree_scaled: 1, locality_cap: 8 }
    }
}

/// Everything a check needs: the algebra, `V_L(ℓ,0)`, the twisted vacuum `W`, and field arenas
/// over both.
pub struct Scenario {
    pub id: String,
    pub lie: LieAlgebra,
    pub family: AutomorphismFamily,
    pub alg: HomogeneousAlgebra,
    pub level: Cyclotomic,
    pub vl: Rc<InducedModule>,
    pub w: Rc<InducedModule>,
    /// Fields on `W`.
    pub wa: FieldArena,
    /// Fields on `V_L(ℓ,0)` itself.
    pub la: FieldArena,
    pub window: CheckWindow,
}

fn c(n: i64) -> Cyclotomic {
    Cyclotomic::from_int(n)
}

/// Chevalley involution and sign automorphism of `sl2` in the basis `(e, h, f)`.
pub fn sl2_default_autos() -> Vec<Matrix> {
    let chev = Matrix::from_rows(vec![vec![c(0), c(0), c(-1)], vec![c(0), c(-1), c(0)], vec![c(-1), c(0), c(0)]]);
    let sgn = Matrix::from_rows(vec![vec![c(-1), c(0), c(0)], vec![c(0), c(1), c(0)], vec![c(0), c(0), c(-1)]]);
    vec![chev, sgn]
}

impl Scenario {
    pub fn new(id: &str, lie: LieAlgebra, family: AutomorphismFamily, level: Cyclotomic, degree_cap: &Rational, weight_bound: i64) -> Result<Self, VerifyError> {
        let dec = decompose(&lie, &family)?;
        let alg = HomogeneousAlgebra::new(&lie, &family, &dec);
        let vl = Rc::new(InducedModule::induce_vacuum(alg.clone(), level.clone(), degree_cap, weight_bound)?);
        let w = Rc::new(InducedModule::induce_twisted_vacuum(alg.clone(), level.clone(), degree_cap, weight_bound)?);
        Ok(Scenario {
            id: id.into(),
            lie,
            family,
            alg,
            level,
            wa: FieldArena::new(w.clone()),
            la: FieldArena::new(vl.clone()),
            vl,
            w,
            window: CheckWindow::default(),
        })
    }

    /// `sl2`, Chevalley involution and sign automorphism, `ℓ = 1`, `D = 3`, `B = 3`.
    pub fn sl2_default() -> Result<Self, VerifyError> {
        Self::sl2_with(&rat(3, 1), 3)
    }

    pub fn sl2_with(degree_cap: &Rational, weight_bound: i64) -> Result<Self, VerifyError> {
        let lie = LieAlgebra::preset("sl2")?;
        let fam = validate_family(&lie, sl2_default_autos(), None)?;
        Self::new("sl2-twisted-default", lie, fam, c(1), degree_cap, weight_bound)
    }

    /// `sl2` with both automorphisms trivial: `W` is then an untwisted module.
    pub fn sl2_untwisted(degree_cap: &Rational, weight_bound: i64) -> Result<Self, VerifyError> {
        let lie = LieAlgebra::preset("sl2")?;
        let fam = validate_family(&lie, vec![Matrix::identity(3), Matrix::identity(3)], None)?;
        Self::new("sl2-untwisted", lie, fam, c(1), degree_cap, weight_bound)
    }

    /// The structure constant `[b_i, b_j]_k` (original basis) raised by 1. The automorphisms are
    /// kept but no longer validated against the corrupted bracket.
    #[allow(clippy::too_many_arguments)]
    pub fn perturbed(
        id: &str,
        mut lie: LieAlgebra,
        family: &AutomorphismFamily,
        (i, j, k): (usize, usize, usize),
        level: Cyclotomic,
        degree_cap: &Rational,
        weight_bound: i64,
    ) -> Result<Self, VerifyError> {
        let v = lie.structure_constant(i, j, k) + &c(1);
        lie.set_structure_constant(i, j, k, v);
        let fam = unchecked_family(family.autos().to_vec(), family.orders().to_vec());
        Self::new(&format!("{id}-perturbed-{i}{j}{k}"), lie, fam, level, degree_cap, weight_bound)
    }

    pub fn sl2_perturbed(i: usize, j: usize, k: usize, degree_cap: &Rational, weight_bound: i64) -> Result<Self, VerifyError> {
        let lie = LieAlgebra::preset("sl2")?;
        let fam = validate_family(&lie, sl2_default_autos(), None)?;
        Self::perturbed("sl2", lie, &fam, (i, j, k), c(1), degree_cap, weight_bound)
    }

    pub fn n0(&self) -> i64 {
        self.w.n0() as i64
    }

    /// `Y_W(v)` on `W`.
    pub fn y_w(&self, v: &Vector) -> NodeId {
        self.wa.twisted_y(&self.vl, v)
    }

    /// `Y(v)` on `V_L(ℓ,0)`.
    pub fn y_l(&self, v: &Vector) -> NodeId {
        self.la.twisted_y(&self.vl, v)
    }

    /// The seed `b_i ∈ g ⊂ V_L(ℓ,0)` for an eigenbasis index.
    pub fn seed(&self, i: usize) -> Vector {
        unit(self.vl.seed_elem(i))
    }

    /// Sample vectors of `W`: the box basis up to the window's sample degree.
    pub fn w_samples(&self) -> Vec<u32> {
        let cap = self.window.sample_degree_scaled;
        self.w.basis().iter().copied().filter(|&id| self.w.degree_scaled(id) <= cap).collect()
    }

    pub fn sample_window(&self) -> SampleWindow {
        SampleWindow { mode_bound: self.window.exponent_bound, spatial: self.window.spatial, vectors: self.w_samples() }
    }

    fn spatial_points(&self) -> Vec<Vec<i64>> {
        SampleWindow { mode_bound: 0, spatial: self.window.spatial, vectors: vec![] }.spatial_points(self.alg.rank())
    }
}

/// Class of a `V_L` vector under `σ̃_0`, if homogeneous.
fn vl_class(vl: &InducedModule, v: &Vector) -> Option<u32> {
    let mut it = v.keys().map(|&id| vl.class0(id));
    let first = it.next()?;
    it.all(|x| x == first).then_some(first)
}

fn vl_degree(vl: &InducedModule, v: &Vector) -> i64 {
    v.keys().map(|&id| vl.degree_scaled(id)).max().unwrap_or(0)
}

fn neg(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| -x).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cy(r: Rational) -> Cyclotomic {
    Cyclotomic::from_rational(r)
}

fn show(m: &InducedModule, v: &Vector) -> String {
    m.vector_label(v)
}

fn fmt_exp(n0: i64, e: i64) -> String {
    if e % n0 == 0 {
        (e / n0).to_string()
    } else {
        format!("{}", rat(e, n0))
    }
}

/// Homogeneous twisted Jacobi identity for `u` (class `s`), `v` in `V_L(ℓ,0)` acting on `w`:
/// the coefficient of `x0^{e_x} y0^{e_y} z0^{e_z} z^{c} y^{d}` of
/// `z0^{-1}δ((x0-y0)/z0) Y_W(u;x0,zy)Y_W(v;y0,y) - z0^{-1}δ((y0-x0)/(-z0)) Y_W(v;y0,y)Y_W(u;x0,zy)`
/// against `x0^{-1}δ((y0+z0)/x0)((y0+z0)/x0)^{s/N} Y_W(Y(u;z0,z)v;y0,y)`.
pub fn check_twisted_jacobi(sc: &Scenario, u: &Vector, v: &Vector, ws: &[u32]) -> Result<CheckReport, VerifyError> {
    let mut rep = CheckReport::new("twisted Jacobi identity", "homogeneous twisted Jacobi identity", &sc.id);
    let Some(s) = vl_class(&sc.vl, u) else {
        return Err(VerifyError::Input("u must be homogeneous".into()));
    };
    let n0 = sc.n0();
    let sv = vl_class(&sc.vl, v);
    let (yu, yv, lu) = (sc.y_w(u), sc.y_w(v), sc.y_l(u));
    let (du, dv) = (vl_degree(&sc.vl, u), vl_degree(&sc.vl, v));
    let e = sc.window.exponent_bound;
    let cap = sc.w.degree_cap_scaled();
    let pts = sc.spatial_points();
    let mut nonzero = 0u64;
    for &w in ws {
        let wv = unit(w);
        let delta = sc.w.degree_scaled(w);
        for ex in -e * n0..=e * n0 {
            if (ex + s as i64).rem_euclid(n0) != 0 {
                continue;
            }
            for ey in -e * n0..=e * n0 {
                if let Some(t) = sv {
                    if (ey + t as i64).rem_euclid(n0) != 0 {
                        continue;
                    }
                }
                for ez in -e..=e {
                    let out = delta + (du + dv) * n0 + ex + ey + ez * n0;
                    if out < 0 {
                        continue;
                    }
                    if out > cap {
                        rep.skip();
                        continue;
                    }
                    for cc in &pts {
                        'tuple: for dd in &pts {
                            let mu = neg(cc);
                            let mv = sub(cc, dd);
                            let n = -ez - 1;
                            let mut lhs = Vector::new();
                            let mut i = 0i64;
                            loop {
                                if n >= 0 && i > n {
                                    break;
                                }
                                let q = (i - 1) * n0 - ey;
                                if q > delta + (dv - 1) * n0 {
                                    break;
                                }
                                let p = (n - i - 1) * n0 - ex;
                                let coef = binom(n, 1, i as u32) * sign(i);
                                let t = sc.wa.apply(yu, p, &mu, &sc.wa.apply(yv, q, &mv, &wv));
                                vec_axpy(&mut lhs, &cy(coef), &t);
                                i += 1;
                            }
                            let mut i = 0i64;
                            loop {
                                if n >= 0 && i > n {
                                    break;
                                }
                                let p = (i - 1) * n0 - ex;
                                if p > delta + (du - 1) * n0 {
                                    break;
                                }
                                let q = (n - i - 1) * n0 - ey;
                                let coef = -(binom(n, 1, i as u32) * sign(i) * sign(n));
                                let t = sc.wa.apply(yv, q, &mv, &sc.wa.apply(yu, p, &mu, &wv));
                                vec_axpy(&mut lhs, &cy(coef), &t);
                                i += 1;
                            }
                            let mut rhs = Vector::new();
                            let mut i = 0i64;
                            loop {
                                let j = i - 1 - ez;
                                if j > du + dv - 1 {
                                    break;
                                }
                                let coef = binom(ex + i * n0, n0, i as u32) * sign(i);
                                let x = sc.la.apply(lu, j, &mu, v);
                                if !x.is_empty() {
                                    if !sc.vl.vector_in_box(&x) {
                                        rep.skip();
                                        continue 'tuple;
                                    }
                                    let yx = sc.y_w(&x);
                                    let q = -ex - ey - (i + 2) * n0;
                                    let t = sc.wa.apply(yx, q, &neg(dd), &wv);
                                    vec_axpy(&mut rhs, &cy(coef), &t);
                                }
                                i += 1;
                            }
                            if !lhs.is_empty() {
                                nonzero += 1;
                            }
                            rep.record(lhs == rhs, || {
                                (
                                    vec![
                                        format!("w={}", sc.w.label(w)),
                                        format!("x0^{}", fmt_exp(n0, ex)),
                                        format!("y0^{}", fmt_exp(n0, ey)),
                                        format!("z0^{ez}"),
                                        format!("z^{cc:?}"),
                                        format!("y^{dd:?}"),
                                    ],
                                    show(&sc.w, &lhs),
                                    show(&sc.w, &rhs),
                                )
                            });
                        }
                    }
                }
            }
        }
    }
    rep.note(format!("{nonzero} coefficients with a nonzero left side"));
    Ok(rep.finish())
}

/// Untwisted Jacobi identity in mode form, for a scenario whose automorphisms are trivial:
/// `Σ_i C(m,i)(u_{(l+i)}v)_{(m+n-i)}w = Σ_i (-1)^i C(l,i)[u_{(m+l-i)}v_{(n+i)}w - (-1)^l v_{(n+l-i)}u_{(m+i)}w]`.
pub fn check_jacobi(sc: &Scenario, u: &Vector, v: &Vector, ws: &[u32]) -> Result<CheckReport, VerifyError> {
    let mut rep = CheckReport::new("Jacobi identity", "untwisted Jacobi identity in mode form", &sc.id);
    if sc.n0() != 1 {
        return Err(VerifyError::Input("untwisted Jacobi needs a trivial σ_0".into()));
    }
    let (yu, yv, lu) = (sc.y_w(u), sc.y_w(v), sc.y_l(u));
    let (du, dv) = (vl_degree(&sc.vl, u), vl_degree(&sc.vl, v));
    let e = sc.window.exponent_bound;
    let cap = sc.w.degree_cap_scaled();
    let pts = sc.spatial_points();
    for &w in ws {
        let wv = unit(w);
        let delta = sc.w.degree_scaled(w);
        for l in -e..=e {
            for m in -e..=e {
                for n in -e..=e {
                    // output degree of u_{(m+l-i)} v_{(n+i)} w
                    let out = delta + du + dv - m - l - n - 2;
                    if out < 0 {
                        continue;
                    }
                    if out > cap {
                        rep.skip();
                        continue;
                    }
                    for a in &pts {
                        'tuple: for b in &pts {
                            let ba = sub(b, a);
                            let mut lhs = Vector::new();
                            let mut i = 0i64;
                            loop {
                                if m >= 0 && i > m {
                                    break;
                                }
                                if l + i > du + dv - 1 {
                                    break;
                                }
                                let x = sc.la.apply(lu, l + i, a, v);
                                if !x.is_empty() {
                                    if !sc.vl.vector_in_box(&x) {
                                        rep.skip();
                                        continue 'tuple;
                                    }
                                    let t = sc.wa.apply(sc.y_w(&x), m + n - i, b, &wv);
                                    vec_axpy(&mut lhs, &cy(binom(m, 1, i as u32)), &t);
                                }
                                i += 1;
                            }
                            let mut rhs = Vector::new();
                            let mut i = 0i64;
                            loop {
                                if l >= 0 && i > l {
                                    break;
                                }
                                let c1 = cy(binom(l, 1, i as u32) * sign(i));
                                let live1 = n + i < delta + dv;
                                let live2 = m + i < delta + du;
                                if !live1 && !live2 {
                                    break;
                                }
                                if live1 {
                                    let t = sc.wa.apply(yu, m + l - i, a, &sc.wa.apply(yv, n + i, &ba, &wv));
                                    vec_axpy(&mut rhs, &c1, &t);
                                }
                                if live2 {
                                    let t = sc.wa.apply(yv, n + l - i, &ba, &sc.wa.apply(yu, m + i, a, &wv));
                                    vec_axpy(&mut rhs, &(-(&c1 * &cy(sign(l)))), &t);
                                }
                                i += 1;
                            }
                            rep.record(lhs == rhs, || {
                                (
                                    vec![format!("w={}", sc.w.label(w)), format!("l={l}"), format!("m={m}"), format!("n={n}"), format!("a={a:?}"), format!("b={b:?}")],
                                    show(&sc.w, &lhs),
                                    show(&sc.w, &rhs),
                                )
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(rep.finish())
}

/// Weak commutativity: `(x0-y0)^k [A(x0,x), B(y0,y)] = 0` at the certified order `k`, with every
/// visible coefficient recorded. The order itself is noted.
pub fn check_weak_commutativity(arena: &FieldArena, a: NodeId, b: NodeId, window: &SampleWindow, cap: i64, scenario: &str) -> Result<(CheckReport, i64), VerifyError> {
    let mut rep = CheckReport::new("weak commutativity", "weak commutativity", scenario);
    let k = find_locality_order(arena, a, b, window, cap)?;
    let m = arena.module();
    let n0 = m.n0() as i64;
    let (ca, cb) = (arena.class(a), arena.class(b));
    let (da, db) = (arena.degree(a), arena.degree(b));
    let pts = window.spatial_points(m.algebra().rank());
    let bound = window.mode_bound * n0;
    for &w in &window.vectors {
        let wv = unit(w);
        let delta = m.degree_scaled(w);
        for ex in -bound..=bound {
            if ca.is_some_and(|c| (ex + c as i64).rem_euclid(n0) != 0) {
                continue;
            }
            for ey in -bound..=bound {
                if cb.is_some_and(|c| (ey + c as i64).rem_euclid(n0) != 0) {
                    continue;
                }
                let out = delta + (da + db - k) * n0 + ex + ey;
                if out < 0 {
                    continue;
                }
                if out > m.degree_cap_scaled() {
                    rep.skip();
                    continue;
                }
                for mm in &pts {
                    for nn in &pts {
                        let r = locality_residual(arena, a, b, k, (ex, mm), (ey, nn), &wv);
                        rep.record(r.is_empty(), || {
                            (vec![format!("w={}", m.label(w)), format!("x0^{}", fmt_exp(n0, ex)), format!("y0^{}", fmt_exp(n0, ey)), format!("{mm:?}"), format!("{nn:?}")], show(m, &r), "0".into())
                        });
                    }
                }
            }
        }
    }
    rep.note(format!("locality order {k}"));
    Ok((rep.finish(), k))
}

/// Twisted weak associativity applied to `w`, with `λ = ℓ + s/N` large enough that
/// `x0^λ Y_W(u;x0,x)w` has no negative powers of `x0`:
/// `(z0+y0)^λ Y_W(u;z0+y0,zy)Y_W(v;y0,y)w = (y0+z0)^λ Y_W(Y(u;z0,z)v;y0,y)w`.
pub fn check_weak_associativity(sc: &Scenario, u: &Vector, v: &Vector, w: u32) -> Result<CheckReport, VerifyError> {
    let mut rep = CheckReport::new("twisted weak associativity", "twisted weak associativity", &sc.id);
    let Some(s) = vl_class(&sc.vl, u) else {
        return Err(VerifyError::Input("u must be homogeneous".into()));
    };
    let n0 = sc.n0();
    let alpha = s as i64;
    let sv = vl_class(&sc.vl, v);
    let (yu, yv, lu) = (sc.y_w(u), sc.y_w(v), sc.y_l(u));
    let (du, dv) = (vl_degree(&sc.vl, u), vl_degree(&sc.vl, v));
    let wv = unit(w);
    let delta = sc.w.degree_scaled(w);
    // u_p w = 0 for p > δ + d_u - 1; need λ ≥ p + 1 on the class of u
    let p_max = delta + (du - 1) * n0;
    let ell = ((p_max + n0 - alpha) as f64 / n0 as f64).ceil().max(0.0) as i64;
    let lam = ell * n0 + alpha;
    rep.note(format!("ℓ = {ell}"));
    let e = sc.window.exponent_bound;
    let cap = sc.w.degree_cap_scaled();
    let pts = sc.spatial_points();
    for ey in -e * n0..=e * n0 {
        if sv.is_some_and(|t| (ey + t as i64).rem_euclid(n0) != 0) {
            continue;
        }
        for ez in -e..=e {
            // degree of Y(u)_p Y(v)_q w with p + q = λ - 2 - e_y - e_z
            let out = delta + (du + dv) * n0 - (lam - ey - ez * n0);
            if out < 0 {
                continue;
            }
            if out > cap {
                rep.skip();
                continue;
            }
            for cc in &pts {
                'tuple: for dd in &pts {
                    let mu = neg(cc);
                    let mv = sub(cc, dd);
                    let mut lhs = Vector::new();
                    let mut i = 0i64;
                    loop {
                        let q = (i - 1) * n0 - ey;
                        if q > delta + (dv - 1) * n0 {
                            break;
                        }
                        let p = lam - (1 + i + ez) * n0;
                        let coef = binom(i + ez, 1, i as u32);
                        if coef != rat(0, 1) {
                            let t = sc.wa.apply(yu, p, &mu, &sc.wa.apply(yv, q, &mv, &wv));
                            vec_axpy(&mut lhs, &cy(coef), &t);
                        }
                        i += 1;
                    }
                    let mut rhs = Vector::new();
                    let mut i = 0i64;
                    loop {
                        let j = i - 1 - ez;
                        if j > du + dv - 1 {
                            break;
                        }
                        let x = sc.la.apply(lu, j, &mu, v);
                        if !x.is_empty() {
                            if !sc.vl.vector_in_box(&x) {
                                rep.skip();
                                continue 'tuple;
                            }
                            let q = lam - (i + 1) * n0 - ey;
                            let t = sc.wa.apply(sc.y_w(&x), q, &neg(dd), &wv);
                            vec_axpy(&mut rhs, &cy(binom(lam, n0, i as u32)), &t);
                        }
                        i += 1;
                    }
                    rep.record(lhs == rhs, || {
                        (vec![format!("y0^{}", fmt_exp(n0, ey)), format!("z0^{ez}"), format!("z^{cc:?}"), format!("y^{dd:?}")], show(&sc.w, &lhs), show(&sc.w, &rhs))
                    });
                }
            }
        }
    }
    Ok(rep.finish())
}

/// Iterate formula: `Y_W(u_{(j,m)}v)` computed from `V_L(ℓ,0)` equals the residue expression
/// in `Y_W(u)` and `Y_W(v)`, and also the variant with `((y0+z0)/x0)^{-s/N}`.
pub fn check_iterate_formula(sc: &Scenario, u: &Vector, v: &Vector, ws: &[u32]) -> Result<CheckReport, VerifyError> {
    let mut rep = CheckReport::new("twisted iterate formula", "twisted iterate formula and its variant", &sc.id);
    if vl_class(&sc.vl, u).is_none() {
        return Err(VerifyError::Input("u must be homogeneous".into()));
    }
    let n0 = sc.n0();
    let (yu, yv, lu) = (sc.y_w(u), sc.y_w(v), sc.y_l(u));
    let win = sc.sample_window();
    let k = find_locality_order(&sc.wa, yu, yv, &win, sc.window.locality_cap)?;
    let e = sc.window.exponent_bound;
    let pts = sc.spatial_points();
    for j in -2..=k {
        for m in &pts {
            let x = sc.la.apply(lu, j, m, v);
            if !sc.vl.vector_in_box(&x) {
                rep.skip();
                continue;
            }
            let yx = sc.y_w(&x);
            let prod = sc.wa.product(yu, j, m, yv, k);
            for &w in ws {
                for r in -e * n0..=e * n0 {
                    for n in &pts {
                        let lhs = sc.wa.apply(yx, r, n, &unit(w));
                        for form in [ProductForm::Residue, ProductForm::IterateVariant] {
                            let rhs = sc.wa.apply_with(prod, r, n, &unit(w), form, true);
                            rep.record(lhs == rhs, || {
                                (vec![format!("{form:?}"), format!("j={j}"), format!("m={m:?}"), format!("r={}", fmt_exp(n0, r)), format!("n={n:?}"), sc.w.label(w)], show(&sc.w, &lhs), show(&sc.w, &rhs))
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(rep.finish())
}

/// Equivariance in the spatial direction `i` (1-based): `Y_W(σ̃_i v)_{(r,n)} = ω_{N_i}^{n_i} Y_W(v)_{(r,n)}`.
pub fn check_equivariance(sc: &Scenario, vs: &[u32], i: usize, ws: &[u32]) -> Result<CheckReport, VerifyError> {
    let mut rep = CheckReport::new("equivariance", "equivariance under spatial automorphisms", &sc.id);
    if i == 0 || i > sc.alg.rank() {
        return Err(VerifyError::Input(format!("spatial index {i} out of range")));
    }
    let ni = sc.alg.orders()[i];
    let n0 = sc.n0();
    let e = sc.window.exponent_bound;
    let pts = sc.spatial_points();
    for &v in vs {
        let vv = unit(v);
        let lifted = sc.vl.lift_automorphism(i, &vv);
        let (ys, y) = (sc.y_w(&lifted), sc.y_w(&vv));
        for &w in ws {
            for r in -e * n0..=e * n0 {
                for n in &pts {
                    let lhs = sc.wa.apply(ys, r, n, &unit(w));
                    let base = sc.wa.apply(y, r, n, &unit(w));
                    let rhs = vec_scale(&base, &Cyclotomic::root_of_unity(ni, n[i - 1]));
                    rep.record(lhs == rhs, || {
                        (vec![sc.vl.label(v), sc.w.label(w), format!("r={}", fmt_exp(n0, r)), format!("n={n:?}")], show(&sc.w, &lhs), show(&sc.w, &rhs))
                    });
                }
            }
        }
    }
    Ok(rep.finish())
}

/// `σ̃_i` is an automorphism of `V_L(ℓ,0)`: `σ̃(1) = 1`, `σ̃(u_{(m0,m)}v) = (σ̃u)_{(m0,m)}σ̃v` on
/// `samples` seeded random valid modes, and `σ̃^{N_i} = id` on the box.
pub fn check_va_automorphism(sc: &Scenario, i: usize, samples: usize, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new("vertex algebra automorphism", "lifted automorphism is a homomorphism", &sc.id);
    rep.seed = Some(seed);
    let vl = &sc.vl;
    let vac = unit(vl.vacuum());
    rep.compare(|| vec!["σ̃(1)".into()], &show(vl, &vl.lift_automorphism(i, &vac)), &show(vl, &vac));
    let ord = sc.alg.orders()[i];
    for &b in vl.basis() {
        let mut x = unit(b);
        for _ in 0..ord {
            x = vl.lift_automorphism(i, &x);
        }
        rep.record(x == unit(b), || (vec![format!("σ̃^{ord}"), vl.label(b)], show(vl, &x), vl.label(b)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<u32> = vl.basis().iter().copied().filter(|&id| vl.depth(id) <= 2 && vl.degree_scaled(id) <= 2).collect();
    let pts = sc.spatial_points();
    let mut valid = 0usize;
    let mut attempts = 0usize;
    while valid < samples && attempts < samples * 50 {
        attempts += 1;
        let u = *pool.choose(&mut rng).expect("nonempty basis");
        let v = *pool.choose(&mut rng).expect("nonempty basis");
        let m0: i64 = rng.gen_range(-2..=2);
        let m = pts.choose(&mut rng).expect("spatial points").clone();
        let (uv, vv) = (unit(u), unit(v));
        let x = sc.la.apply(sc.y_l(&uv), m0, &m, &vv);
        if x.is_empty() || !vl.vector_in_box(&x) {
            continue;
        }
        valid += 1;
        let lhs = vl.lift_automorphism(i, &x);
        let su = vl.lift_automorphism(i, &uv);
        let sv = vl.lift_automorphism(i, &vv);
        let rhs = sc.la.apply(sc.y_l(&su), m0, &m, &sv);
        rep.record(lhs == rhs, || (vec![vl.label(u), format!("({m0},{m:?})"), vl.label(v)], show(vl, &lhs), show(vl, &rhs)));
    }
    rep.note(format!("{valid} valid nonzero product samples"));
    if valid < samples {
        rep.fail(vec!["samples".into()], valid.to_string(), format!(">= {samples}"));
    }
    rep.finish()
}

/// Compares two fields mode by mode on the sample window, recording every `(r, n, w)`.
fn compare_fields(rep: &mut CheckReport, arena: &FieldArena, x: NodeId, y: NodeId, win: &SampleWindow, tag: &str) {
    let m = arena.module();
    let n0 = m.n0() as i64;
    let pts = win.spatial_points(m.algebra().rank());
    for &w in &win.vectors {
        for r in -win.mode_bound * n0..=win.mode_bound * n0 {
            for n in &pts {
                let a = arena.apply_mono(x, r, n, w);
                let b = arena.apply_mono(y, r, n, w);
                rep.record(a == b, || (vec![tag.to_string(), format!("r={}", fmt_exp(n0, r)), format!("n={n:?}"), m.label(w)], show(m, &a), show(m, &b)));
            }
        }
    }
}

/// Reads products off a bracket pattern: `a_{(j,m)}b` must equal `candidates[j]` for
/// `j < candidates.len()` and vanish above.
#[allow(clippy::too_many_arguments)]
pub fn check_bracket_reading(arena: &FieldArena, a: NodeId, b: NodeId, m: &[i64], candidates: &[NodeId], win: &SampleWindow, cap: i64, scenario: &str) -> Result<CheckReport, VerifyError> {
    let mut rep = CheckReport::new("bracket reading", "product modes read off the bracket", scenario);
    let k = match find_locality_order(arena, a, b, win, cap) {
        Ok(k) => k,
        Err(e) => {
            rep.fail(vec![format!("{} with {}", arena.label(a), arena.label(b))], e.to_string(), "certified locality".into());
            return Ok(rep.finish());
        }
    };
    let top = (candidates.len() as i64).max(k) + 1;
    for j in 0..=top {
        let p = arena.product(a, j, m, b, k);
        let want = candidates.get(j as usize).copied().unwrap_or(arena.zero());
        compare_fields(&mut rep, arena, p, want, win, &format!("{}_({j},{m:?}) {}", arena.label(a), arena.label(b)));
    }
    Ok(rep.finish())
}

/// Mode table of currents on `W`: `a_{(0,m)}b = [a,b]^τ`, `a_{(1,m)}b = ⟨a,b⟩ℓ 1_W`, higher modes 0,
/// and every mode 0 when `m` misses the spatial coset of `a`. Candidates use the oracle bracket
/// and form of the realization.
pub fn check_mode_table(sc: &Scenario) -> Result<CheckReport, VerifyError> {
    let mut rep = CheckReport::new("current mode table", "mode table of current products", &sc.id);
    let alg = &sc.alg;
    let win = sc.sample_window();
    let pts = sc.spatial_points();
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let (a, b) = (sc.wa.current_basis(i), sc.wa.current_basis(j));
            let (bi, bj) = (alg.basis_vector(i), alg.basis_vector(j));
            let br = sc.wa.current_series(&alg.oracle_bracket(&bi, &bj));
            let f = &alg.oracle_form(&bi, &bj) * &sc.level;
            let cent = sc.wa.combination(vec![(f, sc.wa.identity())]);
            for m in &pts {
                let cands = if alg.spatial_match(i, m) { vec![br, cent] } else { vec![] };
                let r = check_bracket_reading(&sc.wa, a, b, m, &cands, &win, sc.window.locality_cap, &sc.id)?;
                rep.absorb(r);
            }
        }
    }
    Ok(rep.finish())
}

/// Toroidal bracket check on all ordered pairs of homogeneous basis elements.
pub fn check_toroidal_brackets(sc: &Scenario, ranges: &CommutatorRanges) -> Result<CheckReport, VerifyError> {
    let mut rep = CheckReport::new("toroidal mode commutator", "commutator of twisted current modes", &sc.id);
    for i in 0..sc.alg.dim() {
        for j in 0..sc.alg.dim() {
            let r = check_mode_commutator(&sc.alg, &ModeFamily::basis(&sc.alg, i, Twist::Tau), &ModeFamily::basis(&sc.alg, j, Twist::Tau), ranges, &sc.id)?;
            rep.absorb(r);
        }
    }
    Ok(rep.finish())
}

/// The closure of the generator currents used by the randomized product checks.
pub fn current_closure(sc: &Scenario, caps: &ClosureCaps) -> Result<(Vec<NodeId>, Closure), VerifyError> {
    let gens: Vec<NodeId> = (0..sc.alg.dim()).map(|i| sc.wa.current_basis(i)).collect();
    let cl = generate_closure(&sc.wa, &gens, caps, &sc.sample_window())?;
    Ok((gens, cl))
}

/// Residue and closed forms of `Y_E` agree on `pairs` seeded random pairs of closure members
/// whose degrees sum to at most `max_pair_degree`.
pub fn check_product_forms(sc: &Scenario, closure: &Closure, pairs: usize, max_pair_degree: i64, seed: u64) -> Result<CheckReport, VerifyError> {
    let mut rep = CheckReport::new("product definitions agree", "residue and closed forms of the product", &sc.id);
    rep.seed = Some(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let win = sc.sample_window();
    let n0 = sc.n0();
    let pts = sc.spatial_points();
    let ids: Vec<NodeId> = closure.members.iter().map(|m| m.node).filter(|&n| sc.wa.class(n).is_some()).collect();
    for _ in 0..pairs {
        let a = *ids.choose(&mut rng).expect("nonempty closure");
        let fits: Vec<NodeId> = ids.iter().copied().filter(|&b| sc.wa.degree(a) + sc.wa.degree(b) <= max_pair_degree).collect();
        let Some(&b) = fits.choose(&mut rng) else {
            rep.skip();
            continue;
        };
        let k = find_locality_order(&sc.wa, a, b, &win, sc.window.locality_cap)?;
        let m0 = rng.gen_range(-1..=k.max(0));
        let m = pts.choose(&mut rng).expect("spatial points").clone();
        let p = sc.wa.product(a, m0, &m, b, k);
        let tag = format!("{}_({m0},{m:?}) {} k={k}", sc.wa.label(a), sc.wa.label(b));
        rep.note(tag.clone());
        let dp = sc.wa.degree(p);
        sc.wa.trim_memo(2_000_000);
        for &w in &win.vectors {
            for r in -win.mode_bound * n0..=win.mode_bound * n0 {
                if sc.w.degree_scaled(w) + (dp - 1) * n0 - r > sc.w.degree_cap_scaled() {
                    rep.skip();
                    continue;
                }
                for n in &pts {
                    let closed = sc.wa.apply_with(p, r, n, &unit(w), ProductForm::Closed, true);
                    let resid = sc.wa.apply_with(p, r, n, &unit(w), ProductForm::Residue, true);
                    rep.record(closed == resid, || (vec![tag.clone(), format!("r={}", fmt_exp(n0, r)), format!("n={n:?}"), sc.w.label(w)], show(&sc.w, &closed), show(&sc.w, &resid)));
                }
            }
        }
    }
    Ok(rep.finish())
}

/// Delta substitution identity for each `α`: the expansion of
/// `z0^{-1}δ((z1-z2)/z0)((z1-z2)/z0)^α` against `z1^{-1}δ((z0+z2)/z1)((z0+z2)/z1)^{-α}`,
/// compared at every stored coefficient of either side on the window.
pub fn check_delta_identity(alphas: &[Rational], bound: i64, scenario: &str) -> Result<CheckReport, VerifyError> {
    let mut rep = CheckReport::new("delta substitution identity", "delta substitution identity", scenario);
    for alpha in alphas {
        let n = u32::try_from(alpha.denom().clone()).map_err(|_| VerifyError::Input("denominator too large".into()))?;
        // nonnegative powers of z2 only; the lower bound is just below zero
        let w = crate::formal::Window::new(vec![n, n, 1], &[(-bound, bound), (-bound, bound), (-2, bound)])?;
        let lhs = crate::formal::delta_expand(alpha, &w)?;
        let rhs = crate::formal::delta_expand_dual(alpha, &w)?;
        let keys: std::collections::BTreeSet<&Vec<i64>> = lhs.terms().keys().chain(rhs.terms().keys()).collect();
        let zero = Cyclotomic::zero();
        for e in keys {
            let a = lhs.terms().get(e).unwrap_or(&zero);
            let b = rhs.terms().get(e).unwrap_or(&zero);
            rep.compare(|| vec![format!("α={alpha}"), format!("{e:?}")], a, b);
        }
    }
    Ok(rep.finish())
}

/// Twisted Jacobi identity for every pair of generator seeds, merged. A pair with fewer than
/// `min_per_pair` checked coefficients counts as a failure.
pub fn check_generator_jacobi(sc: &Scenario, min_per_pair: u64, fail_fast: bool) -> Result<CheckReport, VerifyError> {
    let mut rep = CheckReport::new("twisted Jacobi identity", "homogeneous twisted Jacobi identity", &sc.id);
    let ws = sc.w_samples();
    for i in 0..sc.alg.dim() {
        for j in 0..sc.alg.dim() {
            let r = check_twisted_jacobi(sc, &sc.seed(i), &sc.seed(j), &ws)?;
            let (li, lj, n) = (sc.alg.label(i).to_string(), sc.alg.label(j).to_string(), r.checked);
            rep.note(format!("({li}, {lj}): {n} checked"));
            rep.absorb(r);
            rep.record(n >= min_per_pair, || (vec![format!("({li}, {lj})")], format!("{n} checked"), format!(">= {min_per_pair}")));
            if fail_fast && rep.failure_count > 0 {
                return Ok(rep.finish());
            }
        }
    }
    Ok(rep.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_twisted_jacobi_passes() {
        let sc = Scenario::sl2_with(&rat(2, 1), 1).unwrap();
        let vac = [sc.w.vacuum()];
        let r = check_twisted_jacobi(&sc, &sc.seed(1), &sc.seed(0), &vac).unwrap();
        assert!(r.passed, "{}", r.to_json_pretty());
        assert!(r.checked > 0);
    }

    #[test]
    fn vacuum_jacobi_passes() {
        let sc = Scenario::sl2_with(&rat(2, 1), 1).unwrap();
        let one = unit(sc.vl.vacuum());
        let r = check_twisted_jacobi(&sc, &one, &sc.seed(2), &[sc.w.vacuum()]).unwrap();
        assert!(r.passed, "{}", r.to_json_pretty());
    }

    #[test]
    fn untwisted_forms_agree() {
        let sc = Scenario::sl2_untwisted(&rat(2, 1), 1).unwrap();
        let vac = [sc.w.vacuum()];
        let a = check_twisted_jacobi(&sc, &sc.seed(0), &sc.seed(2), &vac).unwrap();
        let b = check_jacobi(&sc, &sc.seed(0), &sc.seed(2), &vac).unwrap();
        assert!(a.passed, "{}", a.to_json_pretty());
        assert!(b.passed, "{}", b.to_json_pretty());
    }
}

//! Truncated PBW induced modules: the twisted vacuum τ-module `W` and the vacuum module
//! `V_L(ℓ,0)` induced from `g ⊕ C`.
//!
//! Vectors are exact sparse combinations of interned PBW monomials. Normal ordering never drops a
//! term; the `(D, B)` box only decides which results count as valid.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use serde::Serialize;

use crate::liealg::HomogeneousAlgebra;
use crate::scalars::{format_rational, rat, Cyclotomic, Rational};
use crate::toroidal::{mode_allows, ToroidalElement, Twist};

/// Sparse vector over interned monomial ids of one module.
pub type Vector = BTreeMap<u32, Cyclotomic>;

/// `acc += c · v`.
pub fn vec_axpy(acc: &mut Vector, c: &Cyclotomic, v: &Vector) {
    if c.is_zero() {
        return;
    }
    for (k, x) in v {
        let term = c * x;
        match acc.get_mut(k) {
            Some(y) => {
                *y += &term;
                if y.is_zero() {
                    acc.remove(k);
                }
            }
            None => {
                if !term.is_zero() {
                    acc.insert(*k, term);
                }
            }
        }
    }
}

pub fn vec_scale(v: &Vector, c: &Cyclotomic) -> Vector {
    if c.is_zero() {
        return Vector::new();
    }
    v.iter().map(|(k, x)| (*k, x * c)).collect()
}

pub fn vec_sub(a: &Vector, b: &Vector) -> Vector {
    let mut out = a.clone();
    vec_axpy(&mut out, &Cyclotomic::from_int(-1), b);
    out
}

pub fn unit(id: u32) -> Vector {
    Vector::from([(id, Cyclotomic::one())])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModuleKind {
    /// Induced from the nonnegative part of τ acting on a line, `c ↦ ℓ`.
    TwistedVacuum,
    /// `V_L(ℓ,0)`, induced from `L^{≥0}` acting on `g ⊕ C`.
    LoopVacuum,
}

/// Mode `b_idx ⊗ t0^{t0/n0} t^t`. The derived order (t0 ascending, then t, then idx) is the PBW
/// order: higher degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub t0: i64,
    pub t: Vec<i64>,
    pub idx: usize,
}

impl Gen {
    pub fn is_creation(&self) -> bool {
        self.t0 < 0
    }
}

/// Inducing vector: the vacuum line, or a copy of a basis element of `g` (only in `V_L(ℓ,0)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Seed {
    One,
    Elem(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub gens: Vec<Gen>,
    pub seed: Seed,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepnError {
    #[error("degree cap {0} is below 1 and cannot hold the degree-1 seed")]
    CapTooSmall(String),
    #[error("weight box must be nonnegative")]
    BadBox,
}

/// Result of acting on a vector, flagged invalid when some output monomial leaves the box.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionResult {
    pub vector: Vector,
    pub valid: bool,
    pub reason: Option<String>,
}

#[derive(Default)]
struct Interner {
    monos: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
}

impl Interner {
    fn intern(&mut self, m: Monomial) -> u32 {
        if let Some(&i) = self.index.get(&m) {
            return i;
        }
        let i = self.monos.len() as u32;
        self.index.insert(m.clone(), i);
        self.monos.push(m);
        i
    }
}

/// An induced module truncated to the box `degree ≤ D`, `|t_i| ≤ B` for every generator.
pub struct InducedModule {
    alg: HomogeneousAlgebra,
    kind: ModuleKind,
    level: Cyclotomic,
    n0: u32,
    degree_cap: i64,
    weight_bound: i64,
    interner: RefCell<Interner>,
    memo: RefCell<HashMap<(Gen, u32), Rc<Vector>>>,
    lift_memo: RefCell<HashMap<(usize, u32), Rc<Vector>>>,
    basis: Vec<u32>,
    generators: Vec<Gen>,
}

impl InducedModule {
    /// `V_L(ℓ,0)` cut to degree `≤ degree_cap` and generator weights `|t_i| ≤ weight_bound`.
    pub fn induce_vacuum(
        alg: HomogeneousAlgebra,
        level: Cyclotomic,
        degree_cap: &Rational,
        weight_bound: i64,
    ) -> Result<Self, RepnError> {
        InducedModule::build(alg, ModuleKind::LoopVacuum, level, degree_cap, weight_bound)
    }

    /// The twisted vacuum τ-module of level `ℓ`, cut to the same kind of box.
    pub fn induce_twisted_vacuum(
        alg: HomogeneousAlgebra,
        level: Cyclotomic,
        degree_cap: &Rational,
        weight_bound: i64,
    ) -> Result<Self, RepnError> {
        InducedModule::build(alg, ModuleKind::TwistedVacuum, level, degree_cap, weight_bound)
    }

    fn build(
        alg: HomogeneousAlgebra,
        kind: ModuleKind,
        level: Cyclotomic,
        degree_cap: &Rational,
        weight_bound: i64,
    ) -> Result<Self, RepnError> {
        if *degree_cap < rat(1, 1) {
            return Err(RepnError::CapTooSmall(format_rational(degree_cap)));
        }
        if weight_bound < 0 {
            return Err(RepnError::BadBox);
        }
        let n0 = match kind {
            ModuleKind::TwistedVacuum => alg.n0(),
            ModuleKind::LoopVacuum => 1,
        };
        // floor(D · n0)
        let scaled = degree_cap * Rational::from_integer((n0 as i64).into());
        let degree_cap_s = crate::scalars::floor_div(
            i64::try_from(scaled.numer()).expect("degree cap fits in i64"),
            i64::try_from(scaled.denom()).expect("degree cap fits in i64"),
        );
        let mut m = InducedModule {
            alg,
            kind,
            level,
            n0,
            degree_cap: degree_cap_s,
            weight_bound,
            interner: RefCell::new(Interner::default()),
            memo: RefCell::new(HashMap::new()),
            lift_memo: RefCell::new(HashMap::new()),
            basis: Vec::new(),
            generators: Vec::new(),
        };
        m.generators = m.box_generators();
        m.basis = m.enumerate_basis();
        Ok(m)
    }

    fn twist(&self) -> Twist {
        match self.kind {
            ModuleKind::TwistedVacuum => Twist::Tau,
            ModuleKind::LoopVacuum => Twist::Loop,
        }
    }

    fn box_generators(&self) -> Vec<Gen> {
        let r = self.alg.rank();
        let b = self.weight_bound;
        let mut points = vec![vec![]];
        for _ in 0..r {
            points = points.into_iter().flat_map(|p| (-b..=b).map(move |x| [p.clone(), vec![x]].concat())).collect();
        }
        let mut gens = Vec::new();
        for t0 in -self.degree_cap..0 {
            for t in &points {
                for idx in 0..self.alg.dim() {
                    if mode_allows(&self.alg, self.twist(), idx, t0, t) {
                        gens.push(Gen { t0, t: t.clone(), idx });
                    }
                }
            }
        }
        gens.sort();
        gens
    }

    fn enumerate_basis(&self) -> Vec<u32> {
        let mut seeds = vec![Seed::One];
        if self.kind == ModuleKind::LoopVacuum {
            seeds.extend((0..self.alg.dim()).map(Seed::Elem));
        }
        let mut out = Vec::new();
        for seed in seeds {
            let budget = self.degree_cap - self.seed_degree(&seed);
            let mut stack = Vec::new();
            self.enumerate_from(0, budget, &mut stack, &seed, &mut out);
        }
        out.sort_by_key(|&id| (self.degree_scaled(id), id));
        out
    }

    fn enumerate_from(&self, start: usize, budget: i64, stack: &mut Vec<Gen>, seed: &Seed, out: &mut Vec<u32>) {
        out.push(self.intern(Monomial { gens: stack.clone(), seed: seed.clone() }));
        for i in start..self.generators.len() {
            let g = &self.generators[i];
            if -g.t0 <= budget {
                stack.push(g.clone());
                self.enumerate_from(i, budget + g.t0, stack, seed, out);
                stack.pop();
            }
        }
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn algebra(&self) -> &HomogeneousAlgebra {
        &self.alg
    }

    pub fn level(&self) -> &Cyclotomic {
        &self.level
    }

    /// Denominator of degrees and `t0` exponents: `N_0` for `W`, 1 for `V_L(ℓ,0)`.
    pub fn n0(&self) -> u32 {
        self.n0
    }

    pub fn degree_cap_scaled(&self) -> i64 {
        self.degree_cap
    }

    pub fn weight_bound(&self) -> i64 {
        self.weight_bound
    }

    /// Box basis ordered by degree.
    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    /// Creation generators inside the box, in PBW order.
    pub fn generators(&self) -> &[Gen] {
        &self.generators
    }

    pub fn intern(&self, m: Monomial) -> u32 {
        self.interner.borrow_mut().intern(m)
    }

    pub fn monomial(&self, id: u32) -> Monomial {
        self.interner.borrow().monos[id as usize].clone()
    }

    pub fn vacuum(&self) -> u32 {
        self.intern(Monomial { gens: vec![], seed: Seed::One })
    }

    /// The seed copy of basis element `idx` of `g` (only meaningful in `V_L(ℓ,0)`).
    pub fn seed_elem(&self, idx: usize) -> u32 {
        assert_eq!(self.kind, ModuleKind::LoopVacuum, "only V_L(ℓ,0) has g as seed");
        self.intern(Monomial { gens: vec![], seed: Seed::Elem(idx) })
    }

    fn seed_degree(&self, s: &Seed) -> i64 {
        match s {
            Seed::One => 0,
            Seed::Elem(_) => self.n0 as i64,
        }
    }

    /// Degree scaled by `n0`.
    pub fn degree_scaled(&self, id: u32) -> i64 {
        let i = self.interner.borrow();
        let m = &i.monos[id as usize];
        m.gens.iter().map(|g| -g.t0).sum::<i64>() + self.seed_degree(&m.seed)
    }

    pub fn degree(&self, id: u32) -> Rational {
        rat(self.degree_scaled(id), self.n0 as i64)
    }

    /// Number of creation factors, counting a `g` seed as one more.
    pub fn depth(&self, id: u32) -> usize {
        let m = self.monomial(id);
        m.gens.len() + usize::from(matches!(m.seed, Seed::Elem(_)))
    }

    /// σ̃_0 class `Σ k_0(factor) mod N_0` of a monomial.
    pub fn class0(&self, id: u32) -> u32 {
        let m = self.monomial(id);
        let n = self.alg.n0();
        let mut s: u32 = m.gens.iter().map(|g| self.alg.class0(g.idx)).sum();
        if let Seed::Elem(b) = m.seed {
            s += self.alg.class0(b);
        }
        s % n
    }

    pub fn in_box(&self, id: u32) -> bool {
        let i = self.interner.borrow();
        let m = &i.monos[id as usize];
        let deg: i64 = m.gens.iter().map(|g| -g.t0).sum::<i64>() + self.seed_degree(&m.seed);
        deg <= self.degree_cap && m.gens.iter().all(|g| g.t.iter().all(|x| x.abs() <= self.weight_bound))
    }

    pub fn vector_in_box(&self, v: &Vector) -> bool {
        v.keys().all(|&id| self.in_box(id))
    }

    /// Dimension of each graded piece of the box, keyed by degree.
    pub fn graded_dimensions(&self) -> BTreeMap<Rational, usize> {
        let mut out = BTreeMap::new();
        for &id in &self.basis {
            *out.entry(self.degree(id)).or_insert(0) += 1;
        }
        out
    }

    pub fn gen_label(&self, g: &Gen) -> String {
        let ts: Vec<String> = g.t.iter().map(i64::to_string).collect();
        format!("({})[t0^{} t^({})]", self.alg.label(g.idx), format_rational(&rat(g.t0, self.n0 as i64)), ts.join(","))
    }

    pub fn label(&self, id: u32) -> String {
        let m = self.monomial(id);
        let mut parts: Vec<String> = m.gens.iter().map(|g| self.gen_label(g)).collect();
        parts.push(match m.seed {
            Seed::One => "1".into(),
            Seed::Elem(b) => format!("<{}>", self.alg.label(b)),
        });
        parts.join(" ")
    }

    pub fn vector_label(&self, v: &Vector) -> String {
        if v.is_empty() {
            return "0".into();
        }
        v.iter().map(|(id, c)| format!("({c}) {}", self.label(*id))).collect::<Vec<_>>().join(" + ")
    }

    /// `[x, y]` for two modes, with the central part already evaluated at the level.
    fn gen_bracket(&self, x: &Gen, y: &Gen) -> (Vec<(Gen, Cyclotomic)>, Cyclotomic) {
        let t0 = x.t0 + y.t0;
        let t: Vec<i64> = x.t.iter().zip(&y.t).map(|(a, b)| a + b).collect();
        let coords = self.alg.bracket_basis(x.idx, y.idx);
        let gens = coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (Gen { t0, t: t.clone(), idx: k }, c.clone()))
            .collect();
        let central = if t0 == 0 && t.iter().all(|&v| v == 0) {
            let f = self.alg.form_basis(x.idx, y.idx);
            &(&Cyclotomic::from_rational(rat(x.t0, self.n0 as i64)) * f) * &self.level
        } else {
            Cyclotomic::zero()
        };
        (gens, central)
    }

    fn seed_action(&self, g: &Gen, seed: &Seed) -> Vector {
        match (self.kind, seed) {
            (_, Seed::One) => Vector::new(),
            (ModuleKind::LoopVacuum, Seed::Elem(b)) => match g.t0 {
                0 => {
                    let mut out = Vector::new();
                    for (k, c) in self.alg.bracket_basis(g.idx, *b).iter().enumerate() {
                        if !c.is_zero() {
                            out.insert(self.intern(Monomial { gens: vec![], seed: Seed::Elem(k) }), c.clone());
                        }
                    }
                    out
                }
                1 => {
                    let c = self.alg.form_basis(g.idx, *b) * &self.level;
                    if c.is_zero() {
                        Vector::new()
                    } else {
                        Vector::from([(self.vacuum(), c)])
                    }
                }
                _ => Vector::new(),
            },
            (ModuleKind::TwistedVacuum, Seed::Elem(_)) => unreachable!("W has no g seed"),
        }
    }

    /// PBW normal form of `g · mono`.
    pub fn act_gen(&self, g: &Gen, mono: u32) -> Rc<Vector> {
        let key = (g.clone(), mono);
        if let Some(v) = self.memo.borrow().get(&key) {
            return v.clone();
        }
        let m = self.monomial(mono);
        let out = if m.gens.is_empty() && !g.is_creation() {
            self.seed_action(g, &m.seed)
        } else if g.is_creation() && m.gens.first().is_none_or(|u1| g <= u1) {
            let mut gens = Vec::with_capacity(m.gens.len() + 1);
            gens.push(g.clone());
            gens.extend(m.gens.iter().cloned());
            unit(self.intern(Monomial { gens, seed: m.seed.clone() }))
        } else {
            // g u1 rest = u1 (g rest) + [g, u1] rest
            let u1 = m.gens[0].clone();
            let rest = self.intern(Monomial { gens: m.gens[1..].to_vec(), seed: m.seed.clone() });
            let g_rest = self.act_gen(g, rest);
            let mut out = self.act_gen_vec(&u1, &g_rest);
            let (terms, central) = self.gen_bracket(g, &u1);
            for (h, c) in terms {
                let v = self.act_gen(&h, rest);
                vec_axpy(&mut out, &c, &v);
            }
            if !central.is_zero() {
                vec_axpy(&mut out, &central, &unit(rest));
            }
            out
        };
        let out = Rc::new(out);
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    pub fn act_gen_vec(&self, g: &Gen, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (id, c) in v {
            let w = self.act_gen(g, *id);
            vec_axpy(&mut out, c, &w);
        }
        out
    }

    /// `Σ_i a_i (b_i ⊗ t0^{t0/n0} t^t)` applied to `v`; no residue filtering.
    pub fn act_coords(&self, a: &[Cyclotomic], t0: i64, t: &[i64], v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (idx, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let g = Gen { t0, t: t.to_vec(), idx };
            let w = self.act_gen_vec(&g, v);
            vec_axpy(&mut out, c, &w);
        }
        out
    }

    /// `x · v` for a loop-algebra element (with `c` acting as the level).
    pub fn act(&self, x: &ToroidalElement, v: &Vector) -> ActionResult {
        assert_eq!(x.n0(), self.n0, "element and module use different t0 scalings");
        let mut out = vec_scale(v, &(x.central() * &self.level));
        for ((t0, t), a) in x.terms() {
            let w = self.act_coords(a, *t0, t, v);
            vec_axpy(&mut out, &Cyclotomic::one(), &w);
        }
        let valid = self.vector_in_box(&out);
        ActionResult {
            reason: (!valid).then(|| "result has monomials outside the degree/weight box".to_string()),
            vector: out,
            valid,
        }
    }

    /// `σ̃_i` on a monomial of `V_L(ℓ,0)`, from `σ̃(1) = 1`, `σ̃(b) = σ_i(b)` and
    /// `σ̃(X·v) = σ_i(X)·σ̃(v)`.
    pub fn lift_automorphism_mono(&self, i: usize, mono: u32) -> Rc<Vector> {
        if let Some(v) = self.lift_memo.borrow().get(&(i, mono)) {
            return v.clone();
        }
        let s = self.alg.auto_matrix(i).clone();
        let m = self.monomial(mono);
        let out = if let Some(u1) = m.gens.first() {
            let rest = self.intern(Monomial { gens: m.gens[1..].to_vec(), seed: m.seed.clone() });
            let lifted_rest = self.lift_automorphism_mono(i, rest);
            self.act_coords(&s.column(u1.idx), u1.t0, &u1.t, &lifted_rest)
        } else {
            match m.seed {
                Seed::One => unit(mono),
                Seed::Elem(b) => {
                    let mut out = Vector::new();
                    for (k, c) in s.column(b).iter().enumerate() {
                        if !c.is_zero() {
                            out.insert(self.intern(Monomial { gens: vec![], seed: Seed::Elem(k) }), c.clone());
                        }
                    }
                    out
                }
            }
        };
        let out = Rc::new(out);
        self.lift_memo.borrow_mut().insert((i, mono), out.clone());
        out
    }

    pub fn lift_automorphism(&self, i: usize, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (id, c) in v {
            vec_axpy(&mut out, c, &self.lift_automorphism_mono(i, *id));
        }
        out
    }

    /// Matrix of `σ̃_i` on the box basis as sparse `(row, col, value)` entries.
    pub fn lift_matrix(&self, i: usize) -> Vec<(usize, usize, Cyclotomic)> {
        let pos: HashMap<u32, usize> = self.basis.iter().enumerate().map(|(k, &id)| (id, k)).collect();
        let mut out = Vec::new();
        for (col, &id) in self.basis.iter().enumerate() {
            for (r, c) in self.lift_automorphism_mono(i, id).iter() {
                let row = *pos.get(r).expect("σ̃ preserves the box");
                out.push((row, col, c.clone()));
            }
        }
        out
    }

    /// Sparse matrix of a loop-algebra element on the box basis; entries leaving the box are
    /// reported separately.
    pub fn operator_matrix(&self, x: &ToroidalElement) -> (Vec<(usize, usize, Cyclotomic)>, usize) {
        let pos: HashMap<u32, usize> = self.basis.iter().enumerate().map(|(k, &id)| (id, k)).collect();
        let mut entries = Vec::new();
        let mut outside = 0;
        for (col, &id) in self.basis.iter().enumerate() {
            let r = self.act(x, &unit(id));
            for (k, c) in r.vector {
                match pos.get(&k) {
                    Some(&row) => entries.push((row, col, c)),
                    None => outside += 1,
                }
            }
        }
        (entries, outside)
    }

    /// JSON dump: graded dimensions and monomial labels in basis order.
    pub fn basis_json(&self) -> serde_json::Value {
        let dims: Vec<serde_json::Value> = self
            .graded_dimensions()
            .into_iter()
            .map(|(d, n)| serde_json::json!({"degree": format_rational(&d), "dim": n}))
            .collect();
        let labels: Vec<serde_json::Value> = self
            .basis
            .iter()
            .map(|&id| serde_json::json!({"degree": format_rational(&self.degree(id)), "monomial": self.label(id)}))
            .collect();
        serde_json::json!({
            "kind": self.kind,
            "level": self.level.to_string(),
            "degree_cap": format_rational(&rat(self.degree_cap, self.n0 as i64)),
            "weight_bound": self.weight_bound,
            "graded_dimensions": dims,
            "basis": labels,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{decompose, validate_family, LieAlgebra};
    use crate::scalars::Matrix;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(n)
    }

    fn sl2_alg() -> HomogeneousAlgebra {
        let g = LieAlgebra::preset("sl2").unwrap();
        let chev = Matrix::from_rows(vec![vec![c(0), c(0), c(-1)], vec![c(0), c(-1), c(0)], vec![c(-1), c(0), c(0)]]);
        let sign = Matrix::from_rows(vec![vec![c(-1), c(0), c(0)], vec![c(0), c(1), c(0)], vec![c(0), c(0), c(-1)]]);
        let fam = validate_family(&g, vec![chev, sign], None).unwrap();
        HomogeneousAlgebra::new(&g, &fam, &decompose(&g, &fam).unwrap())
    }

    #[test]
    fn small_cap_is_rejected() {
        assert!(matches!(
            InducedModule::induce_vacuum(sl2_alg(), c(1), &rat(1, 2), 1),
            Err(RepnError::CapTooSmall(_))
        ));
    }

    #[test]
    fn vacuum_module_grading_and_seed_action() {
        let v = InducedModule::induce_vacuum(sl2_alg(), c(1), &rat(3, 1), 3).unwrap();
        assert_eq!(v.graded_dimensions()[&rat(0, 1)], 1);
        assert_eq!(v.graded_dimensions()[&rat(1, 1)], 3 + 11);
        let one = unit(v.vacuum());
        let alg = v.algebra().clone();
        // (a ⊗ t0 t^m) · 1 = 0
        let x = ToroidalElement::single(1, 1, vec![1], alg.basis_vector(0));
        assert!(v.act(&x, &one).vector.is_empty());
        // (e ⊗ t0) · f = ⟨e, f⟩ ℓ 1 with e, f written in the eigenbasis; spatial index ignored
        let e = alg.to_homogeneous(&[c(1), c(0), c(0)]);
        let f = alg.to_homogeneous(&[c(0), c(0), c(1)]);
        let mut fv = Vector::new();
        for (k, x) in f.iter().enumerate() {
            if !x.is_zero() {
                fv.insert(v.seed_elem(k), x.clone());
            }
        }
        let x = ToroidalElement::single(1, 1, vec![1], e);
        assert_eq!(v.act(&x, &fv).vector, one);
    }

    #[test]
    fn twisted_vacuum_examples() {
        let w = InducedModule::induce_twisted_vacuum(sl2_alg(), c(1), &rat(3, 1), 1).unwrap();
        assert_eq!(w.graded_dimensions()[&rat(1, 2)], 3);
        let vac = unit(w.vacuum());
        let ce = ToroidalElement::central_element(2, c(1));
        let r = w.act(&ce, &vac);
        assert!(r.valid);
        assert_eq!(r.vector, vac);
        let h = ToroidalElement::single(2, 1, vec![0], w.algebra().basis_vector(1));
        assert!(w.act(&h, &vac).vector.is_empty());
        let w3 = InducedModule::induce_twisted_vacuum(sl2_alg(), c(1), &rat(3, 1), 3).unwrap();
        assert_eq!(w3.generators().len(), 33);
    }

    #[test]
    fn central_term_appears_in_commutator() {
        let w = InducedModule::induce_twisted_vacuum(sl2_alg(), c(1), &rat(3, 1), 1).unwrap();
        let alg = w.algebra().clone();
        let h = alg.basis_vector(1);
        let minus = ToroidalElement::single(2, -1, vec![0], h.clone());
        let plus = ToroidalElement::single(2, 1, vec![0], h);
        let v = w.act(&minus, &unit(w.vacuum())).vector;
        // (h ⊗ t0^{1/2}) (h ⊗ t0^{-1/2}) 1 = (1/2)⟨h,h⟩ ℓ 1 = 1
        assert_eq!(w.act(&plus, &v).vector, unit(w.vacuum()));
    }

    #[test]
    fn lift_fixes_vacuum_and_squares_to_identity() {
        let v = InducedModule::induce_vacuum(sl2_alg(), c(1), &rat(2, 1), 1).unwrap();
        assert_eq!(*v.lift_automorphism_mono(0, v.vacuum()), unit(v.vacuum()));
        for &id in v.basis() {
            let once = v.lift_automorphism(0, &unit(id));
            assert_eq!(v.lift_automorphism(0, &once), unit(id));
        }
        // σ̃_0(e) = -f: e = (1/2)(e-f) + (1/2)(e+f)
        let alg = v.algebra().clone();
        let e = alg.to_homogeneous(&[c(1), c(0), c(0)]);
        let seedvec = |a: &[Cyclotomic]| -> Vector {
            a.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (v.seed_elem(k), x.clone())).collect()
        };
        let minus_f = alg.to_homogeneous(&[c(0), c(0), c(-1)]);
        assert_eq!(v.lift_automorphism(0, &seedvec(&e)), seedvec(&minus_f));
    }
}

//! Vertex operators on a truncated module: current series, the `Y_E` product of local pairs,
//! closure generation, and the map `v ↦ Y_W(v)` from `V_L(ℓ,0)`.
//!
//! A field is a node in a [`FieldArena`]; its mode `(r, n)` is the coefficient of
//! `x0^{-r-1} x^{-n}`, applied lazily to module vectors and memoized. Mode indices `r` are scaled
//! by the module's `n0`. A field of degree `d` sends degree `δ` to `δ + d - r - 1`, so a mode whose
//! output degree would be negative is zero without computation.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::formal::{FormalSeries, OperatorMatrix, Window};
use crate::repn::{unit, vec_axpy, vec_scale, InducedModule, ModuleKind, Seed, Vector};
use crate::scalars::{binomial_coeff, rat, Cyclotomic, Rational, SparseEchelon};
use crate::toroidal::{mode_allows, Twist};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    /// `1_W`: only the mode `(-1, 0)` is nonzero and it is the identity.
    Identity,
    /// `a^τ(x0, x)` on `W` or `a^L(x0, x)` on `V_L(ℓ,0)`, for eigenbasis coordinates `a`.
    Current(Vec<Cyclotomic>),
    /// `Y_E(a)_{(m0, m)} b` for a local pair with locality order `k`; `a` is class-homogeneous.
    Product { a: NodeId, m0: i64, m: Vec<i64>, b: NodeId, k: i64 },
    Combination(Vec<(Cyclotomic, NodeId)>),
    Zero,
}

#[derive(Clone, Debug)]
pub struct FieldInfo {
    pub node: Node,
    /// Homogeneity class `s` (modes live in `s/N + Z`); `None` for mixed combinations.
    pub class: Option<u32>,
    /// Degree, or an upper bound for combinations.
    pub degree: i64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VertexError {
    #[error("not local within cap {0}")]
    NotLocal(i64),
    #[error("window too small: no coefficient of the commutator is visible")]
    WindowTooSmall,
    #[error("first factor of a product must be homogeneous")]
    Inhomogeneous,
    #[error("closure cap reached; unclosed products: {0:?}")]
    CapExhausted(Vec<String>),
}

type ModeKey = (NodeId, i64, Vec<i64>, u32);

thread_local! {
    static BINOM: RefCell<HashMap<(i64, i64, u32), Rational>> = RefCell::new(HashMap::new());
}

/// `C(num/den, i)`, cached.
pub(crate) fn binom(num: i64, den: i64, i: u32) -> Rational {
    BINOM.with(|c| {
        if let Some(v) = c.borrow().get(&(num, den, i)) {
            return v.clone();
        }
        let v = binomial_coeff(&rat(num, den), i);
        c.borrow_mut().insert((num, den, i), v.clone());
        v
    })
}

pub(crate) fn sign(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        rat(1, 1)
    } else {
        rat(-1, 1)
    }
}

fn ceil_div(n: i64, d: i64) -> i64 {
    -((-n).div_euclid(d))
}

/// Which formula evaluates a product node at the top level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductForm {
    /// Substitution `x0 = y0 + z0` after multiplying by `(x0-y0)^k x0^{α}`.
    Closed,
    /// Residue definition with both orderings of the two factors.
    Residue,
    /// The iterate variant with `((y0+z0)/x0)^{-α}`.
    IterateVariant,
}

/// Fields over one module, built as a DAG of nodes with memoized mode evaluation.
pub struct FieldArena {
    module: Rc<InducedModule>,
    nodes: RefCell<Vec<Rc<FieldInfo>>>,
    memo: RefCell<HashMap<ModeKey, Rc<Vector>>>,
    interned: RefCell<HashMap<String, NodeId>>,
    y_memo: RefCell<HashMap<u32, NodeId>>,
    y_source: RefCell<Option<*const InducedModule>>,
}

impl FieldArena {
    pub fn new(module: Rc<InducedModule>) -> Self {
        let arena = FieldArena {
            module,
            nodes: RefCell::new(Vec::new()),
            memo: RefCell::new(HashMap::new()),
            interned: RefCell::new(HashMap::new()),
            y_memo: RefCell::new(HashMap::new()),
            y_source: RefCell::new(None),
        };
        arena.push(FieldInfo { node: Node::Zero, class: Some(0), degree: i64::MIN / 4, label: "0".into() });
        arena.push(FieldInfo { node: Node::Identity, class: Some(0), degree: 0, label: "1_W".into() });
        arena
    }

    /// Drops memoized mode values once more than `limit` are stored; the node DAG is kept.
    pub fn trim_memo(&self, limit: usize) {
        let mut m = self.memo.borrow_mut();
        if m.len() > limit {
            m.clear();
        }
    }

    pub fn module(&self) -> &Rc<InducedModule> {
        &self.module
    }

    pub fn zero(&self) -> NodeId {
        0
    }

    pub fn identity(&self) -> NodeId {
        1
    }

    fn n0(&self) -> i64 {
        self.module.n0() as i64
    }

    fn twist(&self) -> Twist {
        match self.module.kind() {
            ModuleKind::TwistedVacuum => Twist::Tau,
            ModuleKind::LoopVacuum => Twist::Loop,
        }
    }

    fn push(&self, info: FieldInfo) -> NodeId {
        let key = format!("{:?}", info.node);
        if let Some(&id) = self.interned.borrow().get(&key) {
            return id;
        }
        let mut nodes = self.nodes.borrow_mut();
        nodes.push(Rc::new(info));
        let id = nodes.len() - 1;
        self.interned.borrow_mut().insert(key, id);
        id
    }

    pub fn info(&self, id: NodeId) -> Rc<FieldInfo> {
        self.nodes.borrow()[id].clone()
    }

    pub fn len(&self) -> usize {
        self.nodes.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn label(&self, id: NodeId) -> String {
        self.info(id).label.clone()
    }

    pub fn class(&self, id: NodeId) -> Option<u32> {
        self.info(id).class
    }

    pub fn degree(&self, id: NodeId) -> i64 {
        self.info(id).degree
    }

    /// Current series of `a` (eigenbasis coordinates). Inhomogeneous `a` becomes a combination of
    /// its homogeneous parts.
    pub fn current_series(&self, a: &[Cyclotomic]) -> NodeId {
        let alg = self.module.algebra();
        let n0 = self.module.n0();
        let mut by_class: BTreeMap<u32, Vec<Cyclotomic>> = BTreeMap::new();
        for (i, x) in a.iter().enumerate() {
            if !x.is_zero() {
                let cls = alg.class0(i) % n0;
                by_class.entry(cls).or_insert_with(|| vec![Cyclotomic::zero(); a.len()])[i] = x.clone();
            }
        }
        let parts: Vec<(Cyclotomic, NodeId)> = by_class
            .into_iter()
            .map(|(cls, v)| {
                let label = format!("Y({})", coords_label(alg.labels(), &v));
                (Cyclotomic::one(), self.push(FieldInfo { node: Node::Current(v), class: Some(cls), degree: 1, label }))
            })
            .collect();
        self.combination(parts)
    }

    pub fn current_basis(&self, idx: usize) -> NodeId {
        self.current_series(&self.module.algebra().basis_vector(idx))
    }

    pub fn combination(&self, parts: Vec<(Cyclotomic, NodeId)>) -> NodeId {
        let mut acc: BTreeMap<NodeId, Cyclotomic> = BTreeMap::new();
        for (c, id) in parts {
            if c.is_zero() || id == self.zero() {
                continue;
            }
            match &self.info(id).node {
                Node::Combination(inner) => {
                    for (d, j) in inner {
                        *acc.entry(*j).or_default() += &(&c * d);
                    }
                }
                _ => *acc.entry(id).or_default() += &c,
            }
        }
        let parts: Vec<(Cyclotomic, NodeId)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (c, j)).collect();
        match parts.len() {
            0 => self.zero(),
            1 if parts[0].0.is_one() => parts[0].1,
            _ => {
                let classes: Vec<Option<u32>> = parts.iter().map(|(_, j)| self.class(*j)).collect();
                let class = if classes.iter().all(|c| *c == classes[0]) { classes[0] } else { None };
                let degree = parts.iter().map(|(_, j)| self.degree(*j)).max().unwrap_or(0);
                let label = parts.iter().map(|(c, j)| format!("({c}){}", self.label(*j))).collect::<Vec<_>>().join(" + ");
                self.push(FieldInfo { node: Node::Combination(parts), class, degree, label })
            }
        }
    }

    /// `Y_E(a)_{(m0, m)} b` with locality order `k`. An inhomogeneous first factor is split by
    /// linearity.
    pub fn product(&self, a: NodeId, m0: i64, m: &[i64], b: NodeId, k: i64) -> NodeId {
        let ia = self.info(a);
        if a == self.zero() || b == self.zero() {
            return self.zero();
        }
        if let (None, Node::Combination(parts)) = (ia.class, &ia.node) {
            let parts = parts.iter().map(|(c, j)| (c.clone(), self.product(*j, m0, m, b, k))).collect();
            return self.combination(parts);
        }
        let (da, db) = (ia.degree, self.degree(b));
        let degree = da + db - m0 - 1;
        if m0 >= k || degree < 0 {
            return self.zero();
        }
        let n0 = self.module.n0();
        let class = match (ia.class, self.class(b)) {
            (Some(x), Some(y)) => Some((x + y) % n0),
            _ => None,
        };
        let ms: Vec<String> = m.iter().map(i64::to_string).collect();
        let label = format!("[{}]_({},{}) [{}]", ia.label, m0, ms.join(","), self.label(b));
        self.push(FieldInfo { node: Node::Product { a, m0, m: m.to_vec(), b, k }, class, degree, label })
    }

    /// `Y_E(a)_{(m0,m)} b` using the trusted locality order `deg a + deg b`.
    pub fn product_default(&self, a: NodeId, m0: i64, m: &[i64], b: NodeId) -> NodeId {
        let k = (self.degree(a) + self.degree(b)).max(0);
        self.product(a, m0, m, b, k)
    }

    /// Mode `(r, n)` of a field applied to `v`.
    pub fn apply(&self, id: NodeId, r: i64, n: &[i64], v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (mono, c) in v {
            let w = self.apply_mono(id, r, n, *mono);
            vec_axpy(&mut out, c, &w);
        }
        out
    }

    /// Mode of a product node computed with the chosen formula at the top level only; children
    /// always use the closed form. `screen = false` skips the class-support shortcut for the node.
    pub fn apply_with(&self, id: NodeId, r: i64, n: &[i64], v: &Vector, form: ProductForm, screen: bool) -> Vector {
        let mut out = Vector::new();
        for (mono, c) in v {
            let w = self.eval(id, r, n, *mono, form, screen);
            vec_axpy(&mut out, c, &w);
        }
        out
    }

    pub fn apply_mono(&self, id: NodeId, r: i64, n: &[i64], mono: u32) -> Rc<Vector> {
        let key = (id, r, n.to_vec(), mono);
        if let Some(v) = self.memo.borrow().get(&key) {
            return v.clone();
        }
        let v = Rc::new(self.eval(id, r, n, mono, ProductForm::Closed, true));
        self.memo.borrow_mut().insert(key, v.clone());
        v
    }

    fn eval(&self, id: NodeId, r: i64, n: &[i64], mono: u32, form: ProductForm, screen: bool) -> Vector {
        let info = self.info(id);
        let n0 = self.n0();
        let delta = self.module.degree_scaled(mono);
        if delta + info.degree * n0 - r - n0 < 0 {
            return Vector::new();
        }
        if screen {
            if let Some(s) = info.class {
                if r.rem_euclid(n0) != s as i64 {
                    return Vector::new();
                }
            }
        }
        match &info.node {
            Node::Zero => Vector::new(),
            Node::Identity => {
                if r == -n0 && n.iter().all(|&x| x == 0) {
                    unit(mono)
                } else {
                    Vector::new()
                }
            }
            Node::Current(a) => {
                let alg = self.module.algebra();
                let kept: Vec<Cyclotomic> = a
                    .iter()
                    .enumerate()
                    .map(|(i, x)| if mode_allows(alg, self.twist(), i, r, n) { x.clone() } else { Cyclotomic::zero() })
                    .collect();
                self.module.act_coords(&kept, r, n, &unit(mono))
            }
            Node::Combination(parts) => {
                let mut out = Vector::new();
                for (c, j) in parts {
                    let w = if screen { (*self.apply_mono(*j, r, n, mono)).clone() } else { self.eval(*j, r, n, mono, form, false) };
                    vec_axpy(&mut out, c, &w);
                }
                out
            }
            Node::Product { a, m0, m, b, k } => {
                let w = unit(mono);
                match form {
                    ProductForm::Closed => self.closed_form(*a, *m0, m, *b, *k, r, n, &w),
                    ProductForm::Residue => self.residue_form(*a, *m0, m, *b, *k, r, n, &w),
                    ProductForm::IterateVariant => self.iterate_variant(*a, *m0, m, *b, *k, r, n, &w),
                }
            }
        }
    }

    fn class_of(&self, a: NodeId) -> i64 {
        self.class(a).expect("product first factor is homogeneous") as i64
    }

    /// `a_p b_q w`.
    #[allow(clippy::too_many_arguments)]
    fn ab(&self, a: NodeId, p: i64, m: &[i64], b: NodeId, q: i64, n: &[i64], w: &Vector) -> Vector {
        let bq = self.apply(b, q, n, w);
        if bq.is_empty() {
            return bq;
        }
        self.apply(a, p, m, &bq)
    }

    /// Closed form: with `T = k - m0 - 1` and `α` the class of `a`,
    /// `(a_{(m0,m)}b)_{(r,n)} = Σ_{i+l=T} C(-α,l) Σ_e C(e,i) Σ_t C(k,t)(-1)^t a_{(k-t+α-e-1,m)} b_{(t+r-α-T+e,n-m)}`.
    /// The range of `e` is cut where either ordering of the factors is zero by degree, which is
    /// sound because the pair is local of order `k`.
    #[allow(clippy::too_many_arguments)]
    fn closed_form(&self, a: NodeId, m0: i64, m: &[i64], b: NodeId, k: i64, r: i64, n: &[i64], w: &Vector) -> Vector {
        let t_total = k - m0 - 1;
        if t_total < 0 {
            return Vector::new();
        }
        let n0 = self.n0();
        let alpha = self.class_of(a);
        let (da, db) = (self.degree(a), self.degree(b));
        let delta = w.keys().map(|&id| self.module.degree_scaled(id)).max().unwrap_or(0);
        let e_lo = ceil_div(alpha - delta - da * n0, n0);
        let e_hi = (delta + (db - 1 + t_total) * n0 + alpha - r).div_euclid(n0);
        let nb: Vec<i64> = n.iter().zip(m).map(|(x, y)| x - y).collect();
        let mut weights: BTreeMap<i64, Rational> = BTreeMap::new();
        for e in e_lo..=e_hi {
            let mut inner = rat(0, 1);
            for i in 0..=t_total {
                let l = t_total - i;
                inner += binom(-alpha, n0, l as u32) * binom(e, 1, i as u32);
            }
            if inner == rat(0, 1) {
                continue;
            }
            for t in 0..=k {
                let c = &inner * binom(k, 1, t as u32) * sign(t);
                *weights.entry(t + e).or_insert_with(|| rat(0, 1)) += c;
            }
        }
        let mut out = Vector::new();
        for (u, c) in weights {
            if c == rat(0, 1) {
                continue;
            }
            let p = (k - u - 1) * n0 + alpha;
            let q = (u - t_total) * n0 + r - alpha;
            let v = self.ab(a, p, m, b, q, &nb, w);
            vec_axpy(&mut out, &Cyclotomic::from_rational(c), &v);
        }
        out
    }

    /// Residue definition: `Σ_{i<k-m0} C(α,i)(-1)^i [ Σ_j C(M,j)(-1)^j a_{(α+m0-j)} b_{(r-α+j)}
    /// - Σ_j C(M,j)(-1)^{M-j} b_{(r-α+M-j)} a_{(α-i+j)} ] w` with `M = m0 + i`.
    #[allow(clippy::too_many_arguments)]
    fn residue_form(&self, a: NodeId, m0: i64, m: &[i64], b: NodeId, k: i64, r: i64, n: &[i64], w: &Vector) -> Vector {
        let n0 = self.n0();
        let alpha = self.class_of(a);
        let (da, db) = (self.degree(a), self.degree(b));
        let delta = w.keys().map(|&id| self.module.degree_scaled(id)).max().unwrap_or(0);
        let nb: Vec<i64> = n.iter().zip(m).map(|(x, y)| x - y).collect();
        let mut out = Vector::new();
        for i in 0..(k - m0).max(0) {
            let ci = binom(alpha, n0, i as u32) * sign(i);
            let big_m = m0 + i;
            // b_q w = 0 once q > δ + d_b - 1
            let mut j = 0;
            loop {
                let q = r - alpha + j * n0;
                if q > delta + (db - 1) * n0 {
                    break;
                }
                let p = alpha + (m0 - j) * n0;
                let c = &ci * binom(big_m, 1, j as u32) * sign(j);
                if c != rat(0, 1) {
                    let v = self.ab(a, p, m, b, q, &nb, w);
                    vec_axpy(&mut out, &Cyclotomic::from_rational(c), &v);
                }
                j += 1;
            }
            let mut j = 0;
            loop {
                let p = alpha + (j - i) * n0;
                if p > delta + (da - 1) * n0 {
                    break;
                }
                let q = r - alpha + (big_m - j) * n0;
                let c = -(&ci * binom(big_m, 1, j as u32) * sign(big_m - j));
                if c != rat(0, 1) {
                    let ap = self.apply(a, p, m, w);
                    let v = self.apply(b, q, &nb, &ap);
                    vec_axpy(&mut out, &Cyclotomic::from_rational(c), &v);
                }
                j += 1;
            }
        }
        out
    }

    /// Iterate variant: `Σ_{l<k-m0} C(-α,l) [ Σ_j C(n',j)(-1)^j a_{(α+n'-j)} b_{(r-α-l+j)}
    /// - Σ_j C(n',j)(-1)^{n'-j} b_{(r-α-l+n'-j)} a_{(α+j)} ] w` with `n' = m0 + l`.
    #[allow(clippy::too_many_arguments)]
    fn iterate_variant(&self, a: NodeId, m0: i64, m: &[i64], b: NodeId, k: i64, r: i64, n: &[i64], w: &Vector) -> Vector {
        let n0 = self.n0();
        let alpha = self.class_of(a);
        let (da, db) = (self.degree(a), self.degree(b));
        let delta = w.keys().map(|&id| self.module.degree_scaled(id)).max().unwrap_or(0);
        let nb: Vec<i64> = n.iter().zip(m).map(|(x, y)| x - y).collect();
        let mut out = Vector::new();
        for l in 0..(k - m0).max(0) {
            let cl = binom(-alpha, n0, l as u32);
            let nn = m0 + l;
            let mut j = 0;
            loop {
                let q = r - alpha - l * n0 + j * n0;
                if q > delta + (db - 1) * n0 {
                    break;
                }
                let p = alpha + (nn - j) * n0;
                let c = &cl * binom(nn, 1, j as u32) * sign(j);
                if c != rat(0, 1) {
                    let v = self.ab(a, p, m, b, q, &nb, w);
                    vec_axpy(&mut out, &Cyclotomic::from_rational(c), &v);
                }
                j += 1;
            }
            let mut j = 0;
            loop {
                let p = alpha + j * n0;
                if p > delta + (da - 1) * n0 {
                    break;
                }
                let q = r - alpha + (nn - l - j) * n0;
                let c = -(&cl * binom(nn, 1, j as u32) * sign(nn - j));
                if c != rat(0, 1) {
                    let ap = self.apply(a, p, m, w);
                    let v = self.apply(b, q, &nb, &ap);
                    vec_axpy(&mut out, &Cyclotomic::from_rational(c), &v);
                }
                j += 1;
            }
        }
        out
    }

    /// `Y_W(v)` for a vector of `V_L(ℓ,0)`: `Y(1) = 1_W`, `Y(b) = b^τ`, and
    /// `Y(u·rest) = Y(u)_{(j,m)} Y(rest)` for a creation mode `u = a ⊗ t0^j t^m`.
    pub fn twisted_y(&self, source: &Rc<InducedModule>, v: &Vector) -> NodeId {
        {
            let mut s = self.y_source.borrow_mut();
            match *s {
                None => *s = Some(Rc::as_ptr(source)),
                Some(p) => assert_eq!(p, Rc::as_ptr(source), "one arena maps from one source module"),
            }
        }
        let parts: Vec<(Cyclotomic, NodeId)> = v.iter().map(|(id, c)| (c.clone(), self.twisted_y_mono(source, *id))).collect();
        self.combination(parts)
    }

    fn twisted_y_mono(&self, source: &InducedModule, id: u32) -> NodeId {
        if let Some(&n) = self.y_memo.borrow().get(&id) {
            return n;
        }
        let m = source.monomial(id);
        let node = match m.gens.first() {
            None => match m.seed {
                Seed::One => self.identity(),
                Seed::Elem(b) => self.current_basis(b),
            },
            Some(u1) => {
                let rest = source.intern(crate::repn::Monomial { gens: m.gens[1..].to_vec(), seed: m.seed.clone() });
                let yr = self.twisted_y_mono(source, rest);
                let ya = self.current_basis(u1.idx);
                self.product_default(ya, u1.t0, &u1.t, yr)
            }
        };
        self.y_memo.borrow_mut().insert(id, node);
        node
    }

    /// Modes of a field as an operator-valued series indexed by mode: the term stored at
    /// `(r, n)` (scaled `r`) is the matrix of the coefficient of `x0^{-r-1} x^{-n}`, restricted
    /// to the box basis columns listed in `columns`. So `1_W` has the identity at `(-1, 0)`.
    pub fn operator_series(&self, id: NodeId, columns: &[u32], window: &Window) -> FormalSeries<OperatorMatrix> {
        let mut s = FormalSeries::zero(window.clone());
        let pos: HashMap<u32, usize> = self.module.basis().iter().enumerate().map(|(k, &b)| (b, k)).collect();
        let dim = self.module.basis().len();
        let r = window.nvars() - 1;
        let mut pts = vec![vec![]];
        for v in 1..=r {
            pts = pts
                .into_iter()
                .flat_map(|p| (window.lo[v]..=window.hi[v]).map(move |x| [p.clone(), vec![x]].concat()))
                .collect();
        }
        let mut outside = false;
        for rr in window.lo[0]..=window.hi[0] {
            for nn in &pts {
                let mut entries = BTreeMap::new();
                for &col in columns {
                    let out = self.apply_mono(id, rr, nn, col);
                    for (row, c) in out.iter() {
                        match pos.get(row) {
                            Some(&ri) => {
                                entries.insert((ri, pos[&col]), c.clone());
                            }
                            None => outside = true,
                        }
                    }
                }
                let mut e = vec![rr];
                e.extend(nn.iter().copied());
                s.insert_scaled(e, OperatorMatrix { dim, entries });
            }
        }
        if outside {
            s = s.mark_cut();
        }
        s
    }
}

fn coords_label(labels: &[String], v: &[Cyclotomic]) -> String {
    let parts: Vec<String> = labels
        .iter()
        .zip(v)
        .filter(|(_, x)| !x.is_zero())
        .map(|(l, x)| if x.is_one() { l.clone() } else { format!("({x}){l}") })
        .collect();
    parts.join("+")
}

/// Two fields with a locality order certified on a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPair {
    pub a: NodeId,
    pub b: NodeId,
    pub k: i64,
}

/// Window for locality searches and fingerprints: `|x0|-exponents ≤ mode_bound`, spatial indices in
/// `[-spatial, spatial]`, and the test vectors.
#[derive(Clone, Debug)]
pub struct SampleWindow {
    pub mode_bound: i64,
    pub spatial: i64,
    pub vectors: Vec<u32>,
}

impl SampleWindow {
    /// Box basis vectors of scaled degree at most `max_degree_scaled`.
    pub fn low_degree(module: &InducedModule, max_degree_scaled: i64, mode_bound: i64, spatial: i64) -> Self {
        let vectors = module.basis().iter().copied().filter(|&id| module.degree_scaled(id) <= max_degree_scaled).collect();
        SampleWindow { mode_bound, spatial, vectors }
    }

    pub fn spatial_points(&self, rank: usize) -> Vec<Vec<i64>> {
        let b = self.spatial;
        let mut out = vec![vec![]];
        for _ in 0..rank {
            out = out.into_iter().flat_map(|p| (-b..=b).map(move |x| [p.clone(), vec![x]].concat())).collect();
        }
        out
    }
}

/// Coefficient of `x0^{e_x} y0^{e_y} x^{-m} y^{-n}` (scaled `e`) in `(x0-y0)^k [A(x0,x), B(y0,y)] w`.
pub fn locality_residual(arena: &FieldArena, a: NodeId, b: NodeId, k: i64, x: (i64, &[i64]), y: (i64, &[i64]), w: &Vector) -> Vector {
    let n0 = arena.module().n0() as i64;
    let mut acc = Vector::new();
    for t in 0..=k {
        let c = Cyclotomic::from_rational(binom(k, 1, t as u32) * sign(t));
        let p = (k - t - 1) * n0 - x.0;
        let q = (t - 1) * n0 - y.0;
        let ab = arena.apply(a, p, x.1, &arena.apply(b, q, y.1, w));
        let ba = arena.apply(b, q, y.1, &arena.apply(a, p, x.1, w));
        vec_axpy(&mut acc, &c, &ab);
        vec_axpy(&mut acc, &(-c), &ba);
    }
    acc
}

/// Least `k ≤ cap` with `(x0-y0)^k [A(x0,x), B(y0,y)] = 0` on every visible coefficient:
/// `Σ_t C(k,t)(-1)^t [A_{(k-t-e_x-1, m)}, B_{(t-e_y-1, n)}] w = 0`.
pub fn find_locality_order(arena: &FieldArena, a: NodeId, b: NodeId, window: &SampleWindow, cap: i64) -> Result<i64, VertexError> {
    let m = arena.module();
    let n0 = m.n0() as i64;
    let (ca, cb) = (arena.class(a), arena.class(b));
    let (da, db) = (arena.degree(a), arena.degree(b));
    let pts = window.spatial_points(m.algebra().rank());
    let bound = window.mode_bound * n0;
    for k in 0..=cap {
        let mut visible = 0usize;
        let mut ok = true;
        'search: for &w in &window.vectors {
            let delta = m.degree_scaled(w);
            let wv = unit(w);
            for ex in -bound..=bound {
                if let Some(c) = ca {
                    if (ex + c as i64).rem_euclid(n0) != 0 {
                        continue;
                    }
                }
                for ey in -bound..=bound {
                    if let Some(c) = cb {
                        if (ey + c as i64).rem_euclid(n0) != 0 {
                            continue;
                        }
                    }
                    let out_deg = delta + (da + db - k) * n0 + ex + ey;
                    if out_deg < 0 || out_deg > m.degree_cap_scaled() {
                        continue;
                    }
                    for mm in &pts {
                        for nn in &pts {
                            let acc = locality_residual(arena, a, b, k, (ex, mm), (ey, nn), &wv);
                            visible += 1;
                            if !acc.is_empty() {
                                ok = false;
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        if visible == 0 {
            return Err(VertexError::WindowTooSmall);
        }
        if ok {
            return Ok(k);
        }
    }
    Err(VertexError::NotLocal(cap))
}

/// Certifies locality and returns the pair.
pub fn local_pair(arena: &FieldArena, a: NodeId, b: NodeId, window: &SampleWindow, cap: i64) -> Result<LocalPair, VertexError> {
    Ok(LocalPair { a, b, k: find_locality_order(arena, a, b, window, cap)? })
}

/// `Y_E(a)_{(m0,m)} b` for a certified pair.
pub fn ye_product(arena: &FieldArena, pair: &LocalPair, m0: i64, m: &[i64]) -> NodeId {
    arena.product(pair.a, m0, m, pair.b, pair.k)
}

/// Mode values of a field on the sample window, keyed by `(r, n, input, output)`.
pub fn fingerprint(arena: &FieldArena, id: NodeId, window: &SampleWindow) -> BTreeMap<(i64, Vec<i64>, u32, u32), Cyclotomic> {
    let m = arena.module();
    let n0 = m.n0() as i64;
    let pts = window.spatial_points(m.algebra().rank());
    let mut out = BTreeMap::new();
    for &w in &window.vectors {
        for r in -window.mode_bound * n0..=window.mode_bound * n0 {
            for n in &pts {
                for (o, c) in arena.apply_mono(id, r, n, w).iter() {
                    out.insert((r, n.clone(), w, *o), c.clone());
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct ClosureCaps {
    pub m0_min: i64,
    pub spatial: i64,
    pub depth: usize,
    pub max_members: usize,
    pub locality_cap: i64,
}

impl Default for ClosureCaps {
    fn default() -> Self {
        ClosureCaps { m0_min: -1, spatial: 1, depth: 2, max_members: 48, locality_cap: 8 }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ClosureMember {
    pub node: NodeId,
    pub label: String,
    pub class: Option<u32>,
    pub degree: i64,
    /// Certified locality order against each generator of `U`, in order.
    pub locality: Vec<i64>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Closure {
    pub members: Vec<ClosureMember>,
    pub exhausted: bool,
    pub unclosed: Vec<String>,
}

/// Truncated closure `⟨U⟩`: `1_W`, the generators, and products `u_{(m0,m)} b` with `u` a generator
/// or `1_W`, `m0_min ≤ m0 < k`, `|m_i| ≤ spatial`, up to `depth` rounds. Members that are linearly
/// dependent on earlier ones (by mode fingerprint) are dropped.
pub fn generate_closure(arena: &FieldArena, gens: &[NodeId], caps: &ClosureCaps, window: &SampleWindow) -> Result<Closure, VertexError> {
    let rank = arena.module().algebra().rank();
    let mut echelon: SparseEchelon<(i64, Vec<i64>, u32, u32)> = SparseEchelon::new();
    let mut members: Vec<NodeId> = Vec::new();
    let mut unclosed = Vec::new();
    let mut exhausted = false;
    let mut admit = |id: NodeId, members: &mut Vec<NodeId>, unclosed: &mut Vec<String>, exhausted: &mut bool| {
        let fp = fingerprint(arena, id, window);
        if fp.is_empty() || echelon.reduce(&fp).is_empty() {
            return false;
        }
        if members.len() >= caps.max_members {
            *exhausted = true;
            unclosed.push(arena.label(id));
            return false;
        }
        echelon.insert(&fp);
        members.push(id);
        true
    };
    admit(arena.identity(), &mut members, &mut unclosed, &mut exhausted);
    let mut frontier = Vec::new();
    for &g in gens {
        if admit(g, &mut members, &mut unclosed, &mut exhausted) {
            frontier.push(g);
        }
    }
    let mut left = vec![arena.identity()];
    left.extend_from_slice(gens);
    let pts = {
        let b = caps.spatial;
        let mut out = vec![vec![]];
        for _ in 0..rank {
            out = out.into_iter().flat_map(|p| (-b..=b).map(move |x| [p.clone(), vec![x]].concat())).collect::<Vec<Vec<i64>>>();
        }
        out
    };
    let all_members = |members: &Vec<NodeId>| members.clone();
    for _ in 0..caps.depth {
        let mut next = Vec::new();
        let rights = all_members(&members);
        for &a in &left {
            for &b in &rights {
                let k = find_locality_order(arena, a, b, window, caps.locality_cap)?;
                for m0 in caps.m0_min..k {
                    for m in &pts {
                        let p = arena.product(a, m0, m, b, k);
                        if p != arena.zero() && admit(p, &mut members, &mut unclosed, &mut exhausted) {
                            next.push(p);
                        }
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let _ = frontier;
    let mut out = Vec::new();
    for &id in &members {
        let mut locality = Vec::new();
        for &g in gens {
            locality.push(find_locality_order(arena, g, id, window, caps.locality_cap)?);
        }
        out.push(ClosureMember { node: id, label: arena.label(id), class: arena.class(id), degree: arena.degree(id), locality });
    }
    Ok(Closure { members: out, exhausted, unclosed })
}

/// `σ` on a field of class `s`: multiplies by `ω_N^s`; checks the support law for one field on the
/// sample window by evaluating with the class shortcut disabled. Returns the offending modes.
pub fn support_violations(arena: &FieldArena, id: NodeId, window: &SampleWindow) -> Vec<(i64, Vec<i64>)> {
    let m = arena.module();
    let n0 = m.n0() as i64;
    let Some(s) = arena.class(id) else { return Vec::new() };
    let pts = window.spatial_points(m.algebra().rank());
    let mut bad = Vec::new();
    for r in -window.mode_bound * n0..=window.mode_bound * n0 {
        if r.rem_euclid(n0) == s as i64 {
            continue;
        }
        for n in &pts {
            for &w in &window.vectors {
                let v = arena.apply_with(id, r, n, &unit(w), ProductForm::Closed, false);
                if !v.is_empty() {
                    bad.push((r, n.clone()));
                }
            }
        }
    }
    bad
}

/// `σ(a(x0,x)) = ω_N^{s}a` for a field of class `s`, applied to one mode.
pub fn sigma_on_mode(arena: &FieldArena, id: NodeId, r: i64, n: &[i64], v: &Vector) -> Vector {
    let n0 = arena.module().n0();
    let out = arena.apply(id, r, n, v);
    let s = r.rem_euclid(n0 as i64);
    vec_scale(&out, &Cyclotomic::root_of_unity(n0, s))
}

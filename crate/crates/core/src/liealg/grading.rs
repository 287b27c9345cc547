use std::collections::BTreeMap;

use super::{coordinates_in, recip, AutomorphismFamily, LieAlgebra, LieError};
use crate::scalars::{Cyclotomic, Matrix};

/// Residue `(m_0 mod N_0, m_1 mod N_1, …, m_r mod N_r)` labelling a simultaneous eigenspace.
pub type Residue = Vec<u32>;

/// Simultaneous eigenspaces `g_(m0, m)` of the whole family.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    components: BTreeMap<Residue, Vec<Vec<Cyclotomic>>>,
}

impl Decomposition {
    pub fn components(&self) -> &BTreeMap<Residue, Vec<Vec<Cyclotomic>>> {
        &self.components
    }

    pub fn dim_of(&self, r: &[u32]) -> usize {
        self.components.get(r).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().map(Vec::len).sum()
    }

    /// All basis vectors in residue order, each tagged with its residue.
    pub fn basis(&self) -> Vec<(Residue, Vec<Cyclotomic>)> {
        self.components.iter().flat_map(|(r, vs)| vs.iter().map(move |v| (r.clone(), v.clone()))).collect()
    }
}

/// Eigenbasis of every residue; kernel vectors are normalized to leading coefficient 1.
pub fn decompose(g: &LieAlgebra, fam: &AutomorphismFamily) -> Result<Decomposition, LieError> {
    let d = g.dim();
    let mut residues: Vec<Residue> = vec![vec![]];
    for &n in fam.orders() {
        residues = residues.into_iter().flat_map(|p| (0..n).map(move |j| [p.clone(), vec![j]].concat())).collect();
    }
    let mut components = BTreeMap::new();
    for res in residues {
        let mut stacked = Matrix::zeros(d * fam.orders().len(), d);
        for (i, (s, &n)) in fam.autos().iter().zip(fam.orders()).enumerate() {
            let w = Cyclotomic::root_of_unity(n, res[i] as i64);
            for a in 0..d {
                for b in 0..d {
                    let mut v = s.get(a, b).clone();
                    if a == b {
                        v -= &w;
                    }
                    stacked.set(i * d + a, b, v);
                }
            }
        }
        let ker = stacked.kernel();
        if !ker.is_empty() {
            components.insert(res, ker);
        }
    }
    let dec = Decomposition { components };
    if dec.total_dim() != d {
        return Err(LieError::NotDiagonalizable { got: dec.total_dim(), dim: d });
    }
    Ok(dec)
}

/// `a_(m) = (1/N_+) Σ_γ χ^m(γ^{-1}) γ(a)` over the spatial group generated by `σ_1, …, σ_r`.
pub fn project_component(fam: &AutomorphismFamily, a: &[Cyclotomic], m: &[i64]) -> Vec<Cyclotomic> {
    let d = a.len();
    let mut acc = vec![Cyclotomic::zero(); d];
    for j in fam.spatial_group() {
        let mut v = a.to_vec();
        for (i, &ji) in j.iter().enumerate() {
            for _ in 0..ji {
                v = fam.autos()[i + 1].apply(&v);
            }
        }
        let inv: Vec<u32> = j.iter().zip(fam.spatial_orders()).map(|(&ji, &n)| (n - ji) % n).collect();
        let chi = fam.character(m, &inv);
        for (o, x) in acc.iter_mut().zip(&v) {
            *o += &(&chi * x);
        }
    }
    let scale = recip(fam.n_plus());
    acc.iter().map(|x| x * &scale).collect()
}

/// The algebra rewritten in the simultaneous eigenbasis, which is what every module computation uses.
///
/// The oracle bracket and form come from the matrix realization when one is available, so a
/// corrupted structure constant shows up as a disagreement with the oracle.
#[derive(Clone, Debug)]
pub struct HomogeneousAlgebra {
    labels: Vec<String>,
    residues: Vec<Residue>,
    orders: Vec<u32>,
    consts: Vec<Vec<Vec<Cyclotomic>>>,
    form: Matrix,
    change: Matrix,
    change_inv: Matrix,
    autos: Vec<Matrix>,
    realization: Option<Vec<Matrix>>,
}

impl HomogeneousAlgebra {
    pub fn new(g: &LieAlgebra, fam: &AutomorphismFamily, dec: &Decomposition) -> Self {
        let basis = dec.basis();
        let d = g.dim();
        let cols: Vec<Vec<Cyclotomic>> = basis.iter().map(|(_, v)| v.clone()).collect();
        let change = Matrix::from_columns(&cols);
        let change_inv = invert(&change);
        let mut consts = vec![vec![vec![]; d]; d];
        for i in 0..d {
            for j in 0..d {
                consts[i][j] = change_inv.apply(&g.bracket(&cols[i], &cols[j]));
            }
        }
        let mut form = Matrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                form.set(i, j, g.form_value(&cols[i], &cols[j]));
            }
        }
        let autos = fam.autos().iter().map(|s| change_inv.mul(&s.mul(&change))).collect();
        let realization = g.realization().map(|mats| {
            cols.iter()
                .map(|v| {
                    let mut m = Matrix::zeros(mats[0].rows(), mats[0].cols());
                    for (x, mk) in v.iter().zip(mats) {
                        if !x.is_zero() {
                            m = add(&m, &mk.scale(x));
                        }
                    }
                    m
                })
                .collect()
        });
        let labels = cols.iter().map(|v| combination_label(g.labels(), v)).collect();
        HomogeneousAlgebra {
            labels,
            residues: basis.into_iter().map(|(r, _)| r).collect(),
            orders: fam.orders().to_vec(),
            consts,
            form,
            change,
            change_inv,
            autos,
            realization,
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn rank(&self) -> usize {
        self.orders.len() - 1
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn n0(&self) -> u32 {
        self.orders[0]
    }

    pub fn residue(&self, i: usize) -> &Residue {
        &self.residues[i]
    }

    /// `σ_0`-class `k_0 mod N_0` of basis element `i`.
    pub fn class0(&self, i: usize) -> u32 {
        self.residues[i][0]
    }

    /// Whether basis element `i` has spatial residue `m mod N`.
    pub fn spatial_match(&self, i: usize, m: &[i64]) -> bool {
        m.iter().zip(&self.orders[1..]).zip(&self.residues[i][1..]).all(|((x, &n), &k)| x.rem_euclid(n as i64) == k as i64)
    }

    /// Coordinates of `[b_i, b_j]` in the eigenbasis.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Cyclotomic] {
        &self.consts[i][j]
    }

    pub fn form_basis(&self, i: usize, j: usize) -> &Cyclotomic {
        self.form.get(i, j)
    }

    pub fn bracket(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let d = self.dim();
        let mut out = vec![Cyclotomic::zero(); d];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (o, c) in out.iter_mut().zip(&self.consts[i][j]) {
                    if !c.is_zero() {
                        *o += &(&xy * c);
                    }
                }
            }
        }
        out
    }

    pub fn form_value(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Cyclotomic {
        let fb = self.form.apply(b);
        a.iter().zip(&fb).fold(Cyclotomic::zero(), |acc, (x, y)| acc + x * y)
    }

    /// Eigenbasis coordinates of a vector given in the original basis.
    pub fn to_homogeneous(&self, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        self.change_inv.apply(v)
    }

    pub fn to_original(&self, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        self.change.apply(v)
    }

    /// `σ_i` in the eigenbasis. On a valid family this is diagonal.
    pub fn auto_matrix(&self, i: usize) -> &Matrix {
        &self.autos[i]
    }

    pub fn has_realization(&self) -> bool {
        self.realization.is_some()
    }

    /// Bracket computed as a matrix commutator in the realization; falls back to the structure
    /// constants when the algebra has no realization.
    pub fn oracle_bracket(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
        match &self.realization {
            Some(mats) => {
                let ma = combine(mats, a);
                let mb = combine(mats, b);
                let comm = ma.mul(&mb).sub(&mb.mul(&ma));
                coordinates_in(mats, &comm).expect("realization closed under commutators")
            }
            None => self.bracket(a, b),
        }
    }

    /// Trace form of the realization scaled to agree with the stored form on one nonzero pair;
    /// falls back to the stored form.
    pub fn oracle_form(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Cyclotomic {
        let Some(mats) = &self.realization else { return self.form_value(a, b) };
        let tr = |x: &Matrix, y: &Matrix| {
            let p = x.mul(y);
            (0..p.rows()).fold(Cyclotomic::zero(), |acc, i| acc + p.get(i, i))
        };
        // normalization: find a pair of basis elements with nonzero trace pairing
        let d = self.dim();
        let mut scale = None;
        'outer: for i in 0..d {
            for j in 0..d {
                let t = tr(&mats[i], &mats[j]);
                if !t.is_zero() {
                    scale = Some(self.form.get(i, j) * &t.inv());
                    break 'outer;
                }
            }
        }
        let scale = scale.unwrap_or_else(Cyclotomic::zero);
        &tr(&combine(mats, a), &combine(mats, b)) * &scale
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Cyclotomic> {
        let mut v = vec![Cyclotomic::zero(); self.dim()];
        v[i] = Cyclotomic::one();
        v
    }
}

fn combine(mats: &[Matrix], v: &[Cyclotomic]) -> Matrix {
    let mut m = Matrix::zeros(mats[0].rows(), mats[0].cols());
    for (x, mk) in v.iter().zip(mats) {
        if !x.is_zero() {
            m = add(&m, &mk.scale(x));
        }
    }
    m
}

fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.sub(&b.scale(&Cyclotomic::from_int(-1)))
}

fn invert(m: &Matrix) -> Matrix {
    let n = m.rows();
    let cols: Vec<Vec<Cyclotomic>> = (0..n)
        .map(|j| {
            let mut e = vec![Cyclotomic::zero(); n];
            e[j] = Cyclotomic::one();
            m.solve(&e).expect("eigenbasis matrix is invertible")
        })
        .collect();
    Matrix::from_columns(&cols)
}

/// Label such as `e-f` or `1/2*e+w4*f` for a combination of original basis labels.
fn combination_label(labels: &[String], v: &[Cyclotomic]) -> String {
    let mut out = String::new();
    for (l, x) in labels.iter().zip(v) {
        if x.is_zero() {
            continue;
        }
        let minus_one = Cyclotomic::from_int(-1);
        let term = if x.is_one() {
            format!("+{l}")
        } else if *x == minus_one {
            format!("-{l}")
        } else {
            let s = x.to_string();
            if s.starts_with('-') || out.is_empty() {
                format!("{s}*{l}")
            } else {
                format!("+({s})*{l}")
            }
        };
        out.push_str(&term);
    }
    out.strip_prefix('+').map(str::to_string).unwrap_or(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::validate_family;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(n)
    }

    fn sl2_scenario() -> (LieAlgebra, AutomorphismFamily) {
        let g = LieAlgebra::preset("sl2").unwrap();
        let chev = Matrix::from_rows(vec![vec![c(0), c(0), c(-1)], vec![c(0), c(-1), c(0)], vec![c(-1), c(0), c(0)]]);
        let sign = Matrix::from_rows(vec![vec![c(-1), c(0), c(0)], vec![c(0), c(1), c(0)], vec![c(0), c(0), c(-1)]]);
        let fam = validate_family(&g, vec![chev, sign], None).unwrap();
        (g, fam)
    }

    #[test]
    fn sl2_components() {
        let (g, fam) = sl2_scenario();
        let dec = decompose(&g, &fam).unwrap();
        assert_eq!(dec.components()[&vec![1, 0]], vec![vec![c(0), c(1), c(0)]]);
        assert_eq!(dec.components()[&vec![0, 1]], vec![vec![c(1), c(0), c(-1)]]);
        assert_eq!(dec.components()[&vec![1, 1]], vec![vec![c(1), c(0), c(1)]]);
        assert_eq!(dec.dim_of(&[0, 0]), 0);
        assert_eq!(dec.total_dim(), 3);
    }

    #[test]
    fn trivial_family_gives_one_component() {
        let g = LieAlgebra::preset("sl3").unwrap();
        let fam = validate_family(&g, vec![Matrix::identity(8)], None).unwrap();
        let dec = decompose(&g, &fam).unwrap();
        assert_eq!(dec.dim_of(&[0]), 8);
    }

    #[test]
    fn projection_examples() {
        let (g, fam) = sl2_scenario();
        let e = g.basis_vector(0);
        assert_eq!(project_component(&fam, &e, &[1]), e);
        assert!(project_component(&fam, &e, &[0]).iter().all(Cyclotomic::is_zero));
        assert_eq!(project_component(&fam, &e, &[3]), e);
        let a = vec![c(1), c(2), c(3)];
        let p0 = project_component(&fam, &a, &[0]);
        let p1 = project_component(&fam, &a, &[1]);
        let sum: Vec<Cyclotomic> = p0.iter().zip(&p1).map(|(x, y)| x + y).collect();
        assert_eq!(sum, a);
        assert_eq!(project_component(&fam, &p1, &[1]), p1);
    }

    #[test]
    fn homogeneous_algebra_matches_original() {
        let (g, fam) = sl2_scenario();
        let dec = decompose(&g, &fam).unwrap();
        let h = HomogeneousAlgebra::new(&g, &fam, &dec);
        assert_eq!(h.labels(), &["e-f".to_string(), "h".into(), "e+f".into()]);
        // [e-f, e+f] = 2h
        assert_eq!(h.bracket_basis(0, 2), &[c(0), c(2), c(0)]);
        for i in 0..3 {
            for j in 0..3 {
                let (a, b) = (h.basis_vector(i), h.basis_vector(j));
                assert_eq!(h.bracket(&a, &b), h.oracle_bracket(&a, &b));
                assert_eq!(h.form_value(&a, &b), h.oracle_form(&a, &b));
            }
        }
        for k in 0..2 {
            let s = h.auto_matrix(k);
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        assert!(s.get(i, j).is_zero());
                    }
                }
            }
        }
        // bracket respects residues
        for i in 0..3 {
            for j in 0..3 {
                let target: Vec<u32> = (0..2).map(|t| (h.residue(i)[t] + h.residue(j)[t]) % 2).collect();
                for (k, x) in h.bracket_basis(i, j).iter().enumerate() {
                    if !x.is_zero() {
                        assert_eq!(h.residue(k), &target);
                    }
                }
            }
        }
    }

    #[test]
    fn automorphisms_preserve_form() {
        let (g, fam) = sl2_scenario();
        for s in fam.autos() {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(g.form_value(&s.column(i), &s.column(j)), *g.form().get(i, j));
                }
            }
        }
    }
}

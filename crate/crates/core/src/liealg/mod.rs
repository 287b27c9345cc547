//! Finite-dimensional Lie algebras given by structure constants, commuting finite-order
//! automorphisms, and the eigenspace grading they induce.

mod family;
mod grading;
mod input;

pub(crate) use family::unchecked_family;
pub use family::{validate_family, AutomorphismFamily};
pub use grading::{decompose, project_component, Decomposition, HomogeneousAlgebra, Residue};
pub use input::{parse_scalar, AlgebraInput};

use crate::scalars::{Cyclotomic, Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("malformed algebra input: {0}")]
    BadInput(String),
    #[error("automorphism {index} is not {size}x{size}")]
    BadShape { index: usize, size: usize },
    #[error("automorphism {index}: bracket not preserved")]
    BracketNotPreserved { index: usize },
    #[error("automorphism {index}: invariant form not preserved")]
    FormNotPreserved { index: usize },
    #[error("automorphisms do not commute ({0} and {1})")]
    NotCommuting(usize, usize),
    #[error("automorphism {index} has no finite order up to {cap}")]
    NoFiniteOrder { index: usize, cap: u32 },
    #[error("automorphism {index} has order {actual}, expected {expected}")]
    WrongOrder { index: usize, expected: u32, actual: u32 },
    #[error("eigenspaces do not span the algebra (dimension {got} of {dim})")]
    NotDiagonalizable { got: usize, dim: usize },
}

/// Lie algebra with structure constants `[b_i, b_j] = Σ_k c_ij^k b_k` and an invariant form.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    name: String,
    labels: Vec<String>,
    dim: usize,
    consts: Vec<Cyclotomic>,
    form: Matrix,
    /// Matrices of the basis elements in a faithful representation, when known.
    realization: Option<Vec<Matrix>>,
}

impl LieAlgebra {
    /// Builds an algebra from explicit data; nothing is validated here.
    pub fn from_parts(
        name: impl Into<String>,
        labels: Vec<String>,
        consts: Vec<Cyclotomic>,
        form: Matrix,
        realization: Option<Vec<Matrix>>,
    ) -> Result<Self, LieError> {
        let dim = labels.len();
        if consts.len() != dim * dim * dim {
            return Err(LieError::BadInput(format!("expected {} structure constants", dim * dim * dim)));
        }
        if form.rows() != dim || form.cols() != dim {
            return Err(LieError::BadInput("form has the wrong size".into()));
        }
        Ok(LieAlgebra { name: name.into(), labels, dim, consts, form, realization })
    }

    /// sl2 or sl3 in the Chevalley basis with the trace form scaled so long roots have norm 2.
    pub fn preset(name: &str) -> Result<Self, LieError> {
        match name {
            "sl2" => Ok(from_matrices("sl2", sl2_basis())),
            "sl3" => Ok(from_matrices("sl3", sl3_basis())),
            other => Err(LieError::UnknownPreset(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn form(&self) -> &Matrix {
        &self.form
    }

    pub fn realization(&self) -> Option<&[Matrix]> {
        self.realization.as_deref()
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Cyclotomic {
        &self.consts[(i * self.dim + j) * self.dim + k]
    }

    /// Overwrites one structure constant without restoring antisymmetry; used for mutation tests.
    pub fn set_structure_constant(&mut self, i: usize, j: usize, k: usize, v: Cyclotomic) {
        let d = self.dim;
        self.consts[(i * d + j) * d + k] = v;
    }

    /// Index of a basis label.
    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Cyclotomic> {
        let mut v = vec![Cyclotomic::zero(); self.dim];
        v[i] = Cyclotomic::one();
        v
    }

    pub fn bracket(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let d = self.dim;
        let mut out = vec![Cyclotomic::zero(); d];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.structure_constant(i, j, k);
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

    /// Basis pairs `(i, j)` where `[b_i, b_j] ≠ -[b_j, b_i]`.
    pub fn antisymmetry_failures(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i..self.dim {
                let ab = self.bracket(&self.basis_vector(i), &self.basis_vector(j));
                let ba = self.bracket(&self.basis_vector(j), &self.basis_vector(i));
                if ab.iter().zip(&ba).any(|(x, y)| !(x + y).is_zero()) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Basis triples where the cyclic Jacobi sum is nonzero.
    pub fn jacobi_failures(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let e = |i| self.basis_vector(i);
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let t1 = self.bracket(&self.bracket(&e(i), &e(j)), &e(k));
                    let t2 = self.bracket(&self.bracket(&e(j), &e(k)), &e(i));
                    let t3 = self.bracket(&self.bracket(&e(k), &e(i)), &e(j));
                    if (0..self.dim).any(|n| !(&(&t1[n] + &t2[n]) + &t3[n]).is_zero()) {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    /// Basis triples violating `⟨[a,b],c⟩ = ⟨a,[b,c]⟩`, plus asymmetric pairs as `(i, j, usize::MAX)`.
    pub fn form_failures(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let e = |i| self.basis_vector(i);
        for i in 0..self.dim {
            for j in 0..self.dim {
                if self.form.get(i, j) != self.form.get(j, i) {
                    out.push((i, j, usize::MAX));
                }
                for k in 0..self.dim {
                    let l = self.form_value(&self.bracket(&e(i), &e(j)), &e(k));
                    let r = self.form_value(&e(i), &self.bracket(&e(j), &e(k)));
                    if l != r {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    /// Coordinates of a matrix in the realization basis, if it lies in the span.
    pub fn coordinates_of_matrix(&self, m: &Matrix) -> Option<Vec<Cyclotomic>> {
        let real = self.realization.as_ref()?;
        coordinates_in(real, m)
    }
}

fn coordinates_in(basis: &[Matrix], m: &Matrix) -> Option<Vec<Cyclotomic>> {
    let n = m.rows() * m.cols();
    let columns: Vec<Vec<Cyclotomic>> = basis.iter().map(flatten).collect();
    let a = Matrix::from_columns(&columns);
    debug_assert_eq!(a.rows(), n);
    a.solve(&flatten(m))
}

fn flatten(m: &Matrix) -> Vec<Cyclotomic> {
    (0..m.rows()).flat_map(|i| m.row(i)).collect()
}

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a.mul(b).sub(&b.mul(a))
}

fn trace(m: &Matrix) -> Cyclotomic {
    (0..m.rows()).fold(Cyclotomic::zero(), |acc, i| acc + m.get(i, i))
}

/// Structure constants and normalized trace form from a list of `(label, matrix)` with a designated
/// long coroot at position `coroot`.
fn from_matrices(name: &str, (basis, coroot): (Vec<(&str, Matrix)>, usize)) -> LieAlgebra {
    let mats: Vec<Matrix> = basis.iter().map(|(_, m)| m.clone()).collect();
    let labels: Vec<String> = basis.iter().map(|(l, _)| l.to_string()).collect();
    let d = mats.len();
    let mut consts = Vec::with_capacity(d * d * d);
    for a in &mats {
        for b in &mats {
            let c = coordinates_in(&mats, &commutator(a, b)).expect("realization is closed under brackets");
            consts.extend(c);
        }
    }
    // trace form, scaled so the designated long coroot h has ⟨h,h⟩ = 2 (equivalently ⟨α,α⟩ = 2)
    let hh = trace(&mats[coroot].mul(&mats[coroot]));
    let scale = Cyclotomic::from_int(2) * hh.inv();
    let mut form = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            form.set(i, j, &trace(&mats[i].mul(&mats[j])) * &scale);
        }
    }
    LieAlgebra { name: name.into(), labels, dim: d, consts, form, realization: Some(mats) }
}

fn unit(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m.set(i, j, Cyclotomic::one());
    m
}

fn sl2_basis() -> (Vec<(&'static str, Matrix)>, usize) {
    let h = unit(2, 0, 0).sub(&unit(2, 1, 1));
    (vec![("e", unit(2, 0, 1)), ("h", h), ("f", unit(2, 1, 0))], 1)
}

fn sl3_basis() -> (Vec<(&'static str, Matrix)>, usize) {
    let h1 = unit(3, 0, 0).sub(&unit(3, 1, 1));
    let h2 = unit(3, 1, 1).sub(&unit(3, 2, 2));
    (
        vec![
            ("e1", unit(3, 0, 1)),
            ("e2", unit(3, 1, 2)),
            ("e3", unit(3, 0, 2)),
            ("h1", h1),
            ("h2", h2),
            ("f1", unit(3, 1, 0)),
            ("f2", unit(3, 2, 1)),
            ("f3", unit(3, 2, 0)),
        ],
        3,
    )
}

/// `1/n` as a scalar.
pub(crate) fn recip(n: u32) -> Cyclotomic {
    Cyclotomic::from_rational(Rational::new(1.into(), n.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(n)
    }

    #[test]
    fn sl2_chevalley_relations() {
        let g = LieAlgebra::preset("sl2").unwrap();
        let (e, h, f) = (g.basis_vector(0), g.basis_vector(1), g.basis_vector(2));
        assert_eq!(g.bracket(&h, &e), vec![c(2), c(0), c(0)]);
        assert_eq!(g.bracket(&h, &f), vec![c(0), c(0), c(-2)]);
        assert_eq!(g.bracket(&e, &f), vec![c(0), c(1), c(0)]);
        assert_eq!(g.form_value(&e, &f), c(1));
        assert_eq!(g.form_value(&h, &h), c(2));
        let inv = g.form_value(&g.bracket(&e, &f), &h) - g.form_value(&e, &g.bracket(&f, &h));
        assert!(inv.is_zero());
    }

    #[test]
    fn presets_are_lie_algebras_with_invariant_forms() {
        for name in ["sl2", "sl3"] {
            let g = LieAlgebra::preset(name).unwrap();
            assert!(g.antisymmetry_failures().is_empty(), "{name}");
            assert!(g.jacobi_failures().is_empty(), "{name}");
            assert!(g.form_failures().is_empty(), "{name}");
        }
    }

    #[test]
    fn sl3_long_roots_have_norm_two() {
        let g = LieAlgebra::preset("sl3").unwrap();
        for h in ["h1", "h2"] {
            let v = g.basis_vector(g.label_index(h).unwrap());
            assert_eq!(g.form_value(&v, &v), c(2));
        }
        let e1 = g.basis_vector(0);
        let f1 = g.basis_vector(5);
        assert_eq!(g.form_value(&e1, &f1), c(1));
    }

    #[test]
    fn unknown_preset() {
        assert_eq!(LieAlgebra::preset("e8"), Err(LieError::UnknownPreset("e8".into())));
    }
}

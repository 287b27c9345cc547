use super::{LieAlgebra, LieError};
use crate::scalars::{Cyclotomic, Matrix};

/// Largest order searched for when computing the order of an automorphism.
const ORDER_SEARCH_CAP: u32 = 360;

/// Commuting finite-order automorphisms `σ_0, …, σ_r` with their orders `N_0, …, N_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct AutomorphismFamily {
    autos: Vec<Matrix>,
    orders: Vec<u32>,
}

impl AutomorphismFamily {
    pub fn autos(&self) -> &[Matrix] {
        &self.autos
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// Number of spatial directions `r`.
    pub fn rank(&self) -> usize {
        self.autos.len() - 1
    }

    pub fn n0(&self) -> u32 {
        self.orders[0]
    }

    /// `N = (N_1, …, N_r)`.
    pub fn spatial_orders(&self) -> &[u32] {
        &self.orders[1..]
    }

    /// `N_+ = N_1 ⋯ N_r`.
    pub fn n_plus(&self) -> u32 {
        self.spatial_orders().iter().product()
    }

    /// Whether `m ∈ Λ(N) = N_1 Z × … × N_r Z`.
    pub fn in_lattice(&self, m: &[i64]) -> bool {
        m.iter().zip(self.spatial_orders()).all(|(x, &n)| x.rem_euclid(n as i64) == 0)
    }

    /// `χ^m(γ)` for `γ = σ̂_1^{j_1} ⋯ σ̂_r^{j_r}`.
    pub fn character(&self, m: &[i64], j: &[u32]) -> Cyclotomic {
        let mut acc = Cyclotomic::one();
        for ((mi, ji), &n) in m.iter().zip(j).zip(self.spatial_orders()) {
            acc *= &Cyclotomic::root_of_unity(n, mi * *ji as i64);
        }
        acc
    }

    /// Lowest common multiple of all orders; every eigenvalue lives in `Q(ω_M)` for this `M`.
    pub fn field_order(&self) -> u32 {
        self.orders.iter().fold(1, |acc, &n| num_integer::lcm(acc, n))
    }

    /// All exponent tuples `(j_1, …, j_r)` with `0 ≤ j_i < N_i`.
    pub fn spatial_group(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for &n in self.spatial_orders() {
            out = out.into_iter().flat_map(|p| (0..n).map(move |j| [p.clone(), vec![j]].concat())).collect();
        }
        out
    }
}

/// Checks every automorphism axiom and computes orders. `intended` orders, when given, must
/// match the computed ones exactly.
pub fn validate_family(
    g: &LieAlgebra,
    autos: Vec<Matrix>,
    intended: Option<&[u32]>,
) -> Result<AutomorphismFamily, LieError> {
    let d = g.dim();
    if autos.is_empty() {
        return Err(LieError::BadInput("at least σ_0 is required".into()));
    }
    for (index, s) in autos.iter().enumerate() {
        if s.rows() != d || s.cols() != d {
            return Err(LieError::BadShape { index, size: d });
        }
    }
    for (index, s) in autos.iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                let lhs = s.apply(&g.bracket(&g.basis_vector(i), &g.basis_vector(j)));
                let rhs = g.bracket(&s.column(i), &s.column(j));
                if lhs != rhs {
                    return Err(LieError::BracketNotPreserved { index });
                }
                if g.form_value(&s.column(i), &s.column(j)) != *g.form().get(i, j) {
                    return Err(LieError::FormNotPreserved { index });
                }
            }
        }
    }
    for a in 0..autos.len() {
        for b in a + 1..autos.len() {
            if autos[a].mul(&autos[b]) != autos[b].mul(&autos[a]) {
                return Err(LieError::NotCommuting(a, b));
            }
        }
    }
    let mut orders = Vec::new();
    for (index, s) in autos.iter().enumerate() {
        let actual = matrix_order(s).ok_or(LieError::NoFiniteOrder { index, cap: ORDER_SEARCH_CAP })?;
        if let Some(expected) = intended.and_then(|o| o.get(index).copied()) {
            if expected != actual {
                return Err(LieError::WrongOrder { index, expected, actual });
            }
        }
        orders.push(actual);
    }
    Ok(AutomorphismFamily { autos, orders })
}

/// Builds a family without checking any axiom. The orders are trusted.
pub(crate) fn unchecked_family(autos: Vec<Matrix>, orders: Vec<u32>) -> AutomorphismFamily {
    AutomorphismFamily { autos, orders }
}

fn matrix_order(s: &Matrix) -> Option<u32> {
    let mut p = s.clone();
    for n in 1..=ORDER_SEARCH_CAP {
        if p.is_identity() {
            return Some(n);
        }
        p = p.mul(s);
    }
    None
}

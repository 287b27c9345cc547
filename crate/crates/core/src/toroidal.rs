//! The centrally extended multi-loop algebra, its fixed subalgebras τ and L, and current modes.
//!
//! Algebra parts are always coordinates in the eigenbasis of a [`HomogeneousAlgebra`].
//! `t0` exponents are stored as integers scaled by the element's `n0` (`N_0` for τ, 1 for L).

use std::collections::BTreeMap;
use std::fmt;

use crate::formal::{delta_ratio, FormalError, FormalSeries, Window};
use crate::liealg::HomogeneousAlgebra;
use crate::report::CheckReport;
use crate::scalars::{format_rational, rat, Cyclotomic, Rational};

/// Finite sum of `a ⊗ t0^{p} t^m` plus a multiple of the central element `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToroidalElement {
    n0: u32,
    terms: BTreeMap<(i64, Vec<i64>), Vec<Cyclotomic>>,
    central: Cyclotomic,
}

/// Adds `c·v` into `acc`.
pub(crate) fn axpy(acc: &mut [Cyclotomic], c: &Cyclotomic, v: &[Cyclotomic]) {
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(c * x);
        }
    }
}

pub(crate) fn is_zero_vec(v: &[Cyclotomic]) -> bool {
    v.iter().all(Cyclotomic::is_zero)
}

impl ToroidalElement {
    pub fn zero(n0: u32) -> Self {
        ToroidalElement { n0, terms: BTreeMap::new(), central: Cyclotomic::zero() }
    }

    pub fn central_element(n0: u32, c: Cyclotomic) -> Self {
        ToroidalElement { n0, terms: BTreeMap::new(), central: c }
    }

    /// `a ⊗ t0^{t0s/n0} t^m`.
    pub fn single(n0: u32, t0s: i64, m: Vec<i64>, a: Vec<Cyclotomic>) -> Self {
        let mut x = ToroidalElement::zero(n0);
        x.add_term(t0s, m, &Cyclotomic::one(), &a);
        x
    }

    pub fn n0(&self) -> u32 {
        self.n0
    }

    pub fn terms(&self) -> &BTreeMap<(i64, Vec<i64>), Vec<Cyclotomic>> {
        &self.terms
    }

    pub fn central(&self) -> &Cyclotomic {
        &self.central
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }

    pub fn t0_exponent(&self, t0s: i64) -> Rational {
        rat(t0s, self.n0 as i64)
    }

    fn add_term(&mut self, t0s: i64, m: Vec<i64>, c: &Cyclotomic, a: &[Cyclotomic]) {
        if c.is_zero() || is_zero_vec(a) {
            return;
        }
        let key = (t0s, m);
        let entry = self.terms.entry(key.clone()).or_insert_with(|| vec![Cyclotomic::zero(); a.len()]);
        axpy(entry, c, a);
        if is_zero_vec(entry) {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((p, m), a) in &other.terms {
            out.add_term(*p, m.clone(), &Cyclotomic::one(), a);
        }
        out.central += &other.central;
        out
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = ToroidalElement::zero(self.n0);
        for ((p, m), a) in &self.terms {
            out.add_term(*p, m.clone(), c, a);
        }
        out.central = &self.central * c;
        out
    }

    /// `[a⊗t0^p t^m, b⊗t0^q t^n] = [a,b]⊗t0^{p+q}t^{m+n} + p⟨a,b⟩δ_{p+q,0}δ_{m+n,0} c`, using the
    /// algebra's structure constants.
    pub fn bracket(&self, other: &Self, alg: &HomogeneousAlgebra) -> Self {
        self.bracket_with(other, |a, b| alg.bracket(a, b), |a, b| alg.form_value(a, b))
    }

    /// The same bracket with the oracle bracket and form of the algebra.
    pub fn bracket_oracle(&self, other: &Self, alg: &HomogeneousAlgebra) -> Self {
        self.bracket_with(other, |a, b| alg.oracle_bracket(a, b), |a, b| alg.oracle_form(a, b))
    }

    fn bracket_with(
        &self,
        other: &Self,
        br: impl Fn(&[Cyclotomic], &[Cyclotomic]) -> Vec<Cyclotomic>,
        form: impl Fn(&[Cyclotomic], &[Cyclotomic]) -> Cyclotomic,
    ) -> Self {
        assert_eq!(self.n0, other.n0, "elements of different loop algebras");
        let mut out = ToroidalElement::zero(self.n0);
        for ((p, m), a) in &self.terms {
            for ((q, n), b) in &other.terms {
                let mn: Vec<i64> = m.iter().zip(n).map(|(x, y)| x + y).collect();
                out.add_term(p + q, mn.clone(), &Cyclotomic::one(), &br(a, b));
                if p + q == 0 && mn.iter().all(|&x| x == 0) {
                    let coeff = Cyclotomic::from_rational(rat(*p, self.n0 as i64));
                    out.central += &(&coeff * &form(a, b));
                }
            }
        }
        out
    }

    /// Human-readable form with algebra parts written in the original basis.
    pub fn display(&self, alg: &HomogeneousAlgebra, original_labels: &[String]) -> String {
        let mut parts = Vec::new();
        for ((p, m), a) in &self.terms {
            let orig = alg.to_original(a);
            let coeffs: Vec<String> = original_labels
                .iter()
                .zip(&orig)
                .filter(|(_, x)| !x.is_zero())
                .map(|(l, x)| format!("({x})*{l}"))
                .collect();
            let ms: Vec<String> = m.iter().map(i64::to_string).collect();
            parts.push(format!(
                "[{}]⊗t0^{} t^({})",
                coeffs.join("+"),
                format_rational(&self.t0_exponent(*p)),
                ms.join(",")
            ));
        }
        if !self.central.is_zero() {
            parts.push(format!("({})c", self.central));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for ToroidalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for ((p, m), a) in &self.terms {
            let cs: Vec<String> = a.iter().map(Cyclotomic::to_string).collect();
            let ms: Vec<String> = m.iter().map(i64::to_string).collect();
            parts.push(format!(
                "[{}]⊗t0^{}t^({})",
                cs.join(","),
                format_rational(&self.t0_exponent(*p)),
                ms.join(",")
            ));
        }
        if !self.central.is_zero() {
            parts.push(format!("({})c", self.central));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Which fixed subalgebra a current lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Twist {
    /// τ: fixed by every `σ̂_i`, `t0` exponents in `(1/N_0) Z`.
    Tau,
    /// L: fixed by the spatial `σ̂_i` only, integer `t0` exponents.
    Loop,
}

impl Twist {
    pub fn n0(self, alg: &HomogeneousAlgebra) -> u32 {
        match self {
            Twist::Tau => alg.n0(),
            Twist::Loop => 1,
        }
    }
}

/// Component of `a` in `g_(t0s mod N_0, m mod N)` tensored with `t0^{t0s/N_0} t^m`, a τ element.
pub fn tau_component(alg: &HomogeneousAlgebra, a: &[Cyclotomic], t0s: i64, m: &[i64]) -> ToroidalElement {
    component(alg, Twist::Tau, a, t0s, m)
}

/// `a_(m) ⊗ t0^{m0} t^m`, an element of L.
pub fn loop_component(alg: &HomogeneousAlgebra, a: &[Cyclotomic], m0: i64, m: &[i64]) -> ToroidalElement {
    component(alg, Twist::Loop, a, m0, m)
}

/// Which eigenbasis elements survive in the mode `(t0s, m)` of the given subalgebra.
pub fn mode_allows(alg: &HomogeneousAlgebra, twist: Twist, idx: usize, t0s: i64, m: &[i64]) -> bool {
    let time_ok = match twist {
        Twist::Tau => t0s.rem_euclid(alg.n0() as i64) == alg.class0(idx) as i64,
        Twist::Loop => true,
    };
    time_ok && alg.spatial_match(idx, m)
}

fn component(alg: &HomogeneousAlgebra, twist: Twist, a: &[Cyclotomic], t0s: i64, m: &[i64]) -> ToroidalElement {
    let kept: Vec<Cyclotomic> = a
        .iter()
        .enumerate()
        .map(|(i, x)| if mode_allows(alg, twist, i, t0s, m) { x.clone() } else { Cyclotomic::zero() })
        .collect();
    ToroidalElement::single(twist.n0(alg), t0s, m.to_vec(), kept)
}

/// The modes of the current `a^τ(x0, x)` or `a^L(x0, x)`: the coefficient of `x0^{-p-1} x^{-m}` is
/// the component of `a` in the matching eigenspace tensored with `t0^p t^m`.
#[derive(Clone, Debug)]
pub struct ModeFamily {
    a: Vec<Cyclotomic>,
    twist: Twist,
    n0: u32,
    /// `(k_0, k)` when `a` is homogeneous.
    homogeneity: Option<Vec<u32>>,
}

impl ModeFamily {
    pub fn new(alg: &HomogeneousAlgebra, a: Vec<Cyclotomic>, twist: Twist) -> Self {
        let mut res = a.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| alg.residue(i).clone());
        let first = res.next();
        let homogeneity = match first {
            Some(r) if res.all(|s| s == r) => Some(r),
            _ => None,
        };
        ModeFamily { n0: twist.n0(alg), a, twist, homogeneity }
    }

    pub fn basis(alg: &HomogeneousAlgebra, idx: usize, twist: Twist) -> Self {
        ModeFamily::new(alg, alg.basis_vector(idx), twist)
    }

    pub fn homogeneity(&self) -> Option<&[u32]> {
        self.homogeneity.as_deref()
    }

    pub fn element(&self) -> &[Cyclotomic] {
        &self.a
    }

    pub fn twist(&self) -> Twist {
        self.twist
    }

    /// Mode with `t0` exponent `t0s/n0` and spatial index `m`.
    pub fn mode(&self, alg: &HomogeneousAlgebra, t0s: i64, m: &[i64]) -> ToroidalElement {
        component(alg, self.twist, &self.a, t0s, m)
    }

    pub fn n0(&self) -> u32 {
        self.n0
    }
}

/// Ranges for [`check_mode_commutator`]; all bounds are inclusive and in unscaled units.
#[derive(Clone, Debug)]
pub struct CommutatorRanges {
    pub mode_bound: i64,
    pub spatial_bound: i64,
    pub delta_window: i64,
}

impl Default for CommutatorRanges {
    fn default() -> Self {
        CommutatorRanges { mode_bound: 4, spatial_bound: 4, delta_window: 8 }
    }
}

fn spatial_points(r: usize, b: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        out = out.into_iter().flat_map(|p| (-b..=b).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Verifies the current commutator formula mode by mode.
///
/// Left side: the bracket of the modes computed from the structure constants. Right side: the
/// coefficient of `x0^{-p-1} y0^{-q-1} x^{-m} y^{-n}` in
/// `Σ_s [a,b](y0)_s · x0^{-1}δ(y0/x0)(y0/x0)^{k0/N0} + δ_{m+n,0}⟨a,b⟩ ∂_{y0}(x0^{-1}δ(y0/x0)(y0/x0)^{k0/N0}) c`
/// with the delta series expanded by the formal layer and the oracle bracket and form.
pub fn check_mode_commutator(
    alg: &HomogeneousAlgebra,
    a: &ModeFamily,
    b: &ModeFamily,
    ranges: &CommutatorRanges,
    scenario: &str,
) -> Result<CheckReport, FormalError> {
    let twist = a.twist();
    let n0 = a.n0() as i64;
    let mut report = CheckReport::new(
        match twist {
            Twist::Tau => "mode_commutator_twisted",
            Twist::Loop => "mode_commutator_untwisted",
        },
        "current commutator with fractional delta factor",
        scenario,
    );
    let k0 = match (twist, a.homogeneity()) {
        (Twist::Tau, Some(h)) => h[0] as i64,
        (Twist::Loop, Some(_)) => 0,
        _ => return Err(FormalError::Incompatible("first current must be homogeneous".into())),
    };
    let beta = rat(k0, n0);
    let w = ranges.delta_window;
    let window = Window::new(vec![n0 as u32, n0 as u32], &[(-w, w), (-w, w)])?;
    // variable 0 is x0, variable 1 is y0
    let delta = delta_ratio(1, 0, &beta, &window)?;
    let ddelta = delta.derivative(1)?;
    let coeff = |s: &FormalSeries, ex: i64, ey: i64| -> Result<Cyclotomic, FormalError> { s.coefficient_scaled(&[ex, ey]) };
    let oracle_ab = alg.oracle_bracket(a.element(), b.element());
    let oracle_form = alg.oracle_form(a.element(), b.element());
    let r = alg.rank();
    let bound = ranges.mode_bound * n0;
    let spatial = spatial_points(r, ranges.spatial_bound);
    for p in -bound..=bound {
        for q in -bound..=bound {
            for m in &spatial {
                for n in &spatial {
                    let lhs = a.mode(alg, p, m).bracket(&b.mode(alg, q, n), alg);
                    let mut rhs = ToroidalElement::zero(n0 as u32);
                    let mn: Vec<i64> = m.iter().zip(n).map(|(x, y)| x + y).collect();
                    // the mode a(x0)_{(p,m)} exists only if m ∈ k + Λ; likewise for b
                    let a_present = !a.mode(alg, p, m).is_zero();
                    let b_present = !b.mode(alg, q, n).is_zero();
                    if a_present && b_present {
                        // [a,b](y0) contributes y0^{-s-1}; against x0^{-p-1} y0^{-q-1} the delta
                        // coefficient sits at x0^{-p-1} y0^{s-q}, nonzero only for s = p + q
                        let s = p + q;
                        let dval = coeff(&delta, -p - n0, s - q)?;
                        if !dval.is_zero() {
                            rhs = rhs.add(&component(alg, twist, &oracle_ab, s, &mn).scale(&dval));
                        }
                        if mn.iter().all(|&x| x == 0) {
                            let dval = coeff(&ddelta, -p - n0, -q - n0)?;
                            rhs = rhs.add(&ToroidalElement::central_element(n0 as u32, &oracle_form * &dval));
                        }
                    }
                    report.record(lhs == rhs, || {
                        (
                            vec![
                                format_rational(&rat(p, n0)),
                                format_rational(&rat(q, n0)),
                                format!("{m:?}"),
                                format!("{n:?}"),
                            ],
                            lhs.to_string(),
                            rhs.to_string(),
                        )
                    });
                }
            }
        }
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{decompose, validate_family, LieAlgebra};
    use crate::scalars::Matrix;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(n)
    }

    pub(crate) fn sl2_alg() -> HomogeneousAlgebra {
        let g = LieAlgebra::preset("sl2").unwrap();
        let chev = Matrix::from_rows(vec![vec![c(0), c(0), c(-1)], vec![c(0), c(-1), c(0)], vec![c(-1), c(0), c(0)]]);
        let sign = Matrix::from_rows(vec![vec![c(-1), c(0), c(0)], vec![c(0), c(1), c(0)], vec![c(0), c(0), c(-1)]]);
        let fam = validate_family(&g, vec![chev, sign], None).unwrap();
        let dec = decompose(&g, &fam).unwrap();
        HomogeneousAlgebra::new(&g, &fam, &dec)
    }

    #[test]
    fn central_term_example() {
        let alg = sl2_alg();
        let h = alg.basis_vector(1);
        let x = ToroidalElement::single(2, 1, vec![0], h.clone());
        let y = ToroidalElement::single(2, -1, vec![0], h);
        let br = x.bracket(&y, &alg);
        assert!(br.terms().is_empty());
        assert_eq!(br.central(), &c(1));
    }

    #[test]
    fn central_element_is_central() {
        let alg = sl2_alg();
        let z = ToroidalElement::central_element(2, c(5));
        let x = ToroidalElement::single(2, 3, vec![1], alg.basis_vector(2));
        assert!(z.bracket(&x, &alg).is_zero());
        assert!(x.bracket(&z, &alg).is_zero());
    }

    #[test]
    fn bracket_example_without_central_term() {
        let alg = sl2_alg();
        let x = ToroidalElement::single(2, 0, vec![1], alg.basis_vector(0));
        let y = ToroidalElement::single(2, 1, vec![-1], alg.basis_vector(2));
        let br = x.bracket(&y, &alg);
        let expect = ToroidalElement::single(2, 1, vec![0], vec![c(0), c(2), c(0)]);
        assert_eq!(br, expect);
    }

    #[test]
    fn components() {
        let alg = sl2_alg();
        let h = alg.to_homogeneous(&[c(0), c(1), c(0)]);
        assert_eq!(tau_component(&alg, &h, 1, &[0]), ToroidalElement::single(2, 1, vec![0], h.clone()));
        assert!(tau_component(&alg, &h, 0, &[0]).is_zero());
        let e = alg.to_homogeneous(&[c(1), c(0), c(0)]);
        let l = loop_component(&alg, &e, -1, &[1]);
        assert_eq!(l, ToroidalElement::single(1, -1, vec![1], e.clone()));
        assert!(loop_component(&alg, &e, -1, &[0]).is_zero());
    }

    #[test]
    fn commutator_formula_twisted() {
        let alg = sl2_alg();
        let ranges = CommutatorRanges { mode_bound: 2, spatial_bound: 2, delta_window: 6 };
        for i in 0..3 {
            for j in 0..3 {
                let a = ModeFamily::basis(&alg, i, Twist::Tau);
                let b = ModeFamily::basis(&alg, j, Twist::Tau);
                let rep = check_mode_commutator(&alg, &a, &b, &ranges, "t").unwrap();
                assert!(rep.passed, "{i} {j}: {:?}", rep.failures.first());
            }
        }
    }

    #[test]
    fn commutator_formula_untwisted() {
        let alg = sl2_alg();
        let ranges = CommutatorRanges { mode_bound: 2, spatial_bound: 2, delta_window: 6 };
        let a = ModeFamily::basis(&alg, 0, Twist::Loop);
        let b = ModeFamily::basis(&alg, 2, Twist::Loop);
        assert!(check_mode_commutator(&alg, &a, &b, &ranges, "t").unwrap().passed);
    }

    #[test]
    fn modes_outside_the_coset_vanish() {
        let alg = sl2_alg();
        let a = ModeFamily::basis(&alg, 0, Twist::Tau);
        // e-f has residue (0, 1): spatial index must be odd
        assert!(a.mode(&alg, 0, &[2]).is_zero());
        assert!(a.mode(&alg, 1, &[1]).is_zero());
        assert!(!a.mode(&alg, 2, &[1]).is_zero());
    }
}

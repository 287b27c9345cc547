//! Sparse formal series in several variables with rational exponents of bounded denominator,
//! cut to an inclusive exponent window.
//!
//! Exponents are stored scaled: variable `i` with denominator `d_i` stores `e · d_i` as an integer.
//! Variable 0 plays the role of `z0`; the rest usually carry integer exponents.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::scalars::{binomial_coeff, format_rational, rat, Cyclotomic, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormalError {
    #[error("series are incompatible: {0}")]
    Incompatible(String),
    #[error("exponent {0:?} lies outside the window")]
    OutsideWindow(Vec<String>),
    #[error("exponent {exp} is not a multiple of 1/{denom}")]
    BadDenominator { exp: String, denom: u32 },
    #[error("variable {0} out of range")]
    NoSuchVariable(usize),
    #[error("empty window in variable {0}")]
    EmptyWindow(usize),
}

/// Values a series coefficient can take.
pub trait Coefficient: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Cyclotomic) -> Self;
}

impl Coefficient for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::zero()
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Cyclotomic) -> Self {
        self * c
    }
}

/// Sparse square matrix; `entries[(i, j)]` is the coefficient of basis vector `i` in the image of `j`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct OperatorMatrix {
    pub dim: usize,
    pub entries: BTreeMap<(usize, usize), Cyclotomic>,
}

impl OperatorMatrix {
    pub fn identity(dim: usize) -> Self {
        OperatorMatrix { dim, entries: (0..dim).map(|i| ((i, i), Cyclotomic::one())).collect() }
    }
}

impl Coefficient for OperatorMatrix {
    fn zero() -> Self {
        OperatorMatrix::default()
    }
    fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.dim = out.dim.max(other.dim);
        for (k, v) in &other.entries {
            let e = out.entries.entry(*k).or_default();
            *e += v;
            if e.is_zero() {
                out.entries.remove(k);
            }
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = OperatorMatrix { dim: self.dim.max(other.dim), entries: BTreeMap::new() };
        for (&(i, k), a) in &self.entries {
            for (&(k2, j), b) in other.entries.range((k, 0)..=(k, usize::MAX)) {
                debug_assert_eq!(k, k2);
                let e = out.entries.entry((i, j)).or_default();
                *e += &(a * b);
            }
        }
        out.entries.retain(|_, v| !v.is_zero());
        out
    }
    fn scale(&self, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return OperatorMatrix { dim: self.dim, entries: BTreeMap::new() };
        }
        OperatorMatrix { dim: self.dim, entries: self.entries.iter().map(|(k, v)| (*k, v * c)).collect() }
    }
}

/// Inclusive per-variable bounds, scaled by each variable's denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub denoms: Vec<u32>,
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl Window {
    /// Window `[lo_i, hi_i]` (in unscaled units) for each variable.
    pub fn new(denoms: Vec<u32>, bounds: &[(i64, i64)]) -> Result<Self, FormalError> {
        if denoms.len() != bounds.len() {
            return Err(FormalError::Incompatible("bounds and denominators differ in length".into()));
        }
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for (i, (&(l, h), &d)) in bounds.iter().zip(&denoms).enumerate() {
            if l > h {
                return Err(FormalError::EmptyWindow(i));
            }
            lo.push(l * d as i64);
            hi.push(h * d as i64);
        }
        Ok(Window { denoms, lo, hi })
    }

    /// Default window: `e0 ∈ [-6, 6]`, `e_i ∈ [-4, 4]`.
    pub fn default_for(n: u32, r: usize) -> Self {
        let mut denoms = vec![n];
        denoms.extend(std::iter::repeat_n(1, r));
        let mut bounds = vec![(-6, 6)];
        bounds.extend(std::iter::repeat_n((-4, 4), r));
        Window::new(denoms, &bounds).expect("default window is valid")
    }

    /// Same bound `[-b, b]` on every variable.
    pub fn cube(denoms: Vec<u32>, b: i64) -> Self {
        let bounds = vec![(-b, b); denoms.len()];
        Window::new(denoms, &bounds).expect("cube window is valid")
    }

    pub fn nvars(&self) -> usize {
        self.denoms.len()
    }

    pub fn contains(&self, scaled: &[i64]) -> bool {
        scaled.iter().enumerate().all(|(i, &e)| self.lo[i] <= e && e <= self.hi[i])
    }

    pub fn intersect(&self, other: &Window) -> Result<Window, FormalError> {
        if self.denoms != other.denoms {
            return Err(FormalError::Incompatible("window denominators differ".into()));
        }
        let lo: Vec<i64> = self.lo.iter().zip(&other.lo).map(|(a, b)| *a.max(b)).collect();
        let hi: Vec<i64> = self.hi.iter().zip(&other.hi).map(|(a, b)| *a.min(b)).collect();
        Ok(Window { denoms: self.denoms.clone(), lo, hi })
    }

    /// Window with variable `var` removed.
    pub fn drop_var(&self, var: usize) -> Window {
        let mut w = self.clone();
        w.denoms.remove(var);
        w.lo.remove(var);
        w.hi.remove(var);
        w
    }

    /// Scales an unscaled rational exponent into variable `var`'s units.
    pub fn scale_exp(&self, var: usize, e: &Rational) -> Result<i64, FormalError> {
        let d = self.denoms[var];
        let s = e * Rational::from_integer(d.into());
        if !s.is_integer() {
            return Err(FormalError::BadDenominator { exp: format_rational(e), denom: d });
        }
        Ok(i64::try_from(s.to_integer()).expect("exponent fits in i64"))
    }
}

/// Series `Σ c_e z^e` with at most finitely many stored terms inside `window`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalSeries<C: Coefficient = Cyclotomic> {
    window: Window,
    terms: BTreeMap<Vec<i64>, C>,
    /// Some term of the underlying series fell outside the window and was dropped.
    truncated: bool,
    /// Every coefficient inside the window equals the untruncated value.
    exact: bool,
}

impl<C: Coefficient> FormalSeries<C> {
    pub fn zero(window: Window) -> Self {
        FormalSeries { window, terms: BTreeMap::new(), truncated: false, exact: true }
    }

    /// Single term `c · z^e` with `e` given in scaled units.
    pub fn monomial(window: Window, scaled: Vec<i64>, c: C) -> Self {
        let mut s = FormalSeries::zero(window);
        s.insert_scaled(scaled, c);
        s
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn nvars(&self) -> usize {
        self.window.nvars()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, C> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Marks the series as a window cut of an infinite object: in-window values stay exact.
    pub fn mark_cut(mut self) -> Self {
        self.truncated = true;
        self
    }

    /// Adds `c` at scaled exponent `e`; out-of-window terms are dropped and flagged.
    pub fn insert_scaled(&mut self, e: Vec<i64>, c: C) {
        if c.is_zero() {
            return;
        }
        if !self.window.contains(&e) {
            self.truncated = true;
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn coefficient_scaled(&self, e: &[i64]) -> Result<C, FormalError> {
        if !self.window.contains(e) {
            return Err(FormalError::OutsideWindow(self.describe(e)));
        }
        Ok(self.terms.get(e).cloned().unwrap_or_else(C::zero))
    }

    /// Coefficient at an unscaled exponent vector.
    pub fn coefficient(&self, e: &[Rational]) -> Result<C, FormalError> {
        if e.len() != self.nvars() {
            return Err(FormalError::Incompatible("exponent vector has the wrong length".into()));
        }
        let scaled = e
            .iter()
            .enumerate()
            .map(|(i, x)| self.window.scale_exp(i, x))
            .collect::<Result<Vec<_>, _>>()?;
        self.coefficient_scaled(&scaled)
    }

    fn describe(&self, e: &[i64]) -> Vec<String> {
        e.iter()
            .zip(&self.window.denoms)
            .map(|(&x, &d)| format_rational(&rat(x, d as i64)))
            .collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<Window, FormalError> {
        if self.window.denoms != other.window.denoms {
            return Err(FormalError::Incompatible(format!(
                "denominators {:?} vs {:?}",
                self.window.denoms, other.window.denoms
            )));
        }
        self.window.intersect(&other.window)
    }

    pub fn add(&self, other: &Self) -> Result<Self, FormalError> {
        let window = self.check_compatible(other)?;
        let mut out = FormalSeries::zero(window);
        out.truncated = self.truncated || other.truncated;
        out.exact = self.exact && other.exact;
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            out.insert_scaled(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = FormalSeries::zero(self.window.clone());
        out.truncated = self.truncated;
        out.exact = self.exact;
        for (e, v) in &self.terms {
            out.insert_scaled(e.clone(), v.scale(c));
        }
        out
    }

    /// Product on the intersected window. In-window exactness survives only when neither factor
    /// had dropped terms.
    pub fn mul(&self, other: &Self) -> Result<Self, FormalError> {
        let window = self.check_compatible(other)?;
        let mut out = FormalSeries::zero(window);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_scaled(e, ca.mul(cb));
            }
        }
        out.truncated |= self.truncated || other.truncated;
        out.exact = self.exact && other.exact && !self.truncated && !other.truncated;
        Ok(out)
    }

    /// Coefficient series of `z_var^{-1}`.
    pub fn residue(&self, var: usize) -> Result<Self, FormalError> {
        if var >= self.nvars() {
            return Err(FormalError::NoSuchVariable(var));
        }
        let d = self.window.denoms[var] as i64;
        if !(self.window.lo[var] <= -d && -d <= self.window.hi[var]) {
            let mut e = vec![0; self.nvars()];
            e[var] = -d;
            return Err(FormalError::OutsideWindow(self.describe(&e)));
        }
        let mut out = FormalSeries::zero(self.window.drop_var(var));
        out.truncated = self.truncated;
        out.exact = self.exact;
        for (e, c) in &self.terms {
            if e[var] == -d {
                let mut rest = e.clone();
                rest.remove(var);
                out.insert_scaled(rest, c.clone());
            }
        }
        Ok(out)
    }

    /// Derivative in `z_var`. The upper bound in that variable shrinks by one step, so every
    /// coefficient left in the window is still exact.
    pub fn derivative(&self, var: usize) -> Result<Self, FormalError> {
        if var >= self.nvars() {
            return Err(FormalError::NoSuchVariable(var));
        }
        let d = self.window.denoms[var] as i64;
        let mut window = self.window.clone();
        window.hi[var] -= d;
        if window.hi[var] < window.lo[var] {
            return Err(FormalError::EmptyWindow(var));
        }
        let mut out = FormalSeries::zero(window);
        out.truncated = self.truncated;
        out.exact = self.exact;
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f[var] -= d;
            let factor = Cyclotomic::from_rational(rat(e[var], d));
            out.insert_scaled(f, c.scale(&factor));
        }
        Ok(out)
    }
}

impl FormalSeries<Cyclotomic> {
    /// JSON form `{N, r, window, terms: [[exponents...], coeff]}` with exponents as rational strings.
    pub fn to_json(&self) -> serde_json::Value {
        let w = &self.window;
        serde_json::json!({
            "N": w.denoms[0],
            "r": w.nvars() - 1,
            "denoms": w.denoms,
            "window": (0..w.nvars())
                .map(|i| vec![
                    format_rational(&rat(w.lo[i], w.denoms[i] as i64)),
                    format_rational(&rat(w.hi[i], w.denoms[i] as i64)),
                ])
                .collect::<Vec<_>>(),
            "truncated": self.truncated,
            "terms": self.terms.iter().map(|(e, c)| serde_json::json!([self.describe(e), c])).collect::<Vec<_>>(),
        })
    }
}

/// Sign of the second summand in a binomial base.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `(x ± y)^α` in the variables `(x, y)`, expanded in nonnegative integer powers of `y`:
/// the coefficient of `x^{α-i} y^i` is `choose(α, i)`, times `(-1)^i` for the minus sign.
pub fn binomial_expand(sign: Sign, alpha: &Rational, window: &Window) -> Result<FormalSeries, FormalError> {
    if window.nvars() != 2 {
        return Err(FormalError::Incompatible("binomial expansion needs two variables".into()));
    }
    let mut s = FormalSeries::zero(window.clone());
    let ax = window.scale_exp(0, alpha)?;
    let dx = window.denoms[0] as i64;
    let dy = window.denoms[1] as i64;
    let imax = window.hi[1] / dy;
    for i in 0..=imax.max(-1) {
        let c = binomial_coeff(alpha, i as u32);
        let c = if sign == Sign::Minus && i % 2 == 1 { -c } else { c };
        s.insert_scaled(vec![ax - i * dx, i * dy], Cyclotomic::from_rational(c));
    }
    let complete = alpha.is_integer() && *alpha >= Rational::zero() && Rational::from_integer(imax.into()) >= *alpha;
    if !complete {
        s = s.mark_cut();
    }
    Ok(s)
}

/// `v^{-1} δ((a ± b)/v) ((a ± b)/v)^β = Σ_n v^{-n-1-β} (a ± b)^{n+β}`, with `(a ± b)^{n+β}`
/// expanded in nonnegative powers of `b`. Variables are given as indices into `window`.
pub fn delta_series(
    v: usize,
    a: usize,
    b: usize,
    sign: Sign,
    beta: &Rational,
    window: &Window,
) -> Result<FormalSeries, FormalError> {
    let nv = window.nvars();
    for &i in &[v, a, b] {
        if i >= nv {
            return Err(FormalError::NoSuchVariable(i));
        }
    }
    let dv = window.denoms[v] as i64;
    let da = window.denoms[a] as i64;
    let db = window.denoms[b] as i64;
    let beta_v = window.scale_exp(v, beta)?;
    let beta_a = window.scale_exp(a, beta)?;
    let mut s = FormalSeries::zero(window.clone());
    // exponent of v is (-n-1-β)·dv; keep n in the range that lands inside the window.
    let nmin = ceil_div(-window.hi[v] - dv - beta_v, dv);
    let nmax = floor_div_i(-window.lo[v] - dv - beta_v, dv);
    let imax = window.hi[b] / db;
    let mut base = vec![0i64; nv];
    for n in nmin..=nmax {
        let power = Rational::from_integer(n.into()) + beta;
        for i in 0..=imax.max(-1) {
            let mut c = binomial_coeff(&power, i as u32);
            if sign == Sign::Minus && i % 2 == 1 {
                c = -c;
            }
            base.iter_mut().for_each(|x| *x = 0);
            base[v] = (-n - 1) * dv - beta_v;
            base[a] = n * da + beta_a - i * da;
            base[b] = i * db;
            s.insert_scaled(base.clone(), Cyclotomic::from_rational(c));
        }
    }
    Ok(s.mark_cut())
}

/// `den^{-1} δ(num/den) (num/den)^β = Σ_n den^{-n-1-β} num^{n+β}`.
pub fn delta_ratio(num: usize, den: usize, beta: &Rational, window: &Window) -> Result<FormalSeries, FormalError> {
    let dn = window.denoms[num] as i64;
    let dd = window.denoms[den] as i64;
    let b_num = window.scale_exp(num, beta)?;
    let b_den = window.scale_exp(den, beta)?;
    let mut s = FormalSeries::zero(window.clone());
    let nmin = ceil_div(window.lo[num] - b_num, dn);
    let nmax = floor_div_i(window.hi[num] - b_num, dn);
    for n in nmin..=nmax {
        let mut e = vec![0i64; window.nvars()];
        e[num] = n * dn + b_num;
        e[den] = (-n - 1) * dd - b_den;
        s.insert_scaled(e, Cyclotomic::one());
    }
    Ok(s.mark_cut())
}

/// Left side of the basic delta identity on `(z0, z1, z2)`:
/// `z0^{-1} δ((z1 - z2)/z0) ((z1 - z2)/z0)^α`.
pub fn delta_expand(alpha: &Rational, window: &Window) -> Result<FormalSeries, FormalError> {
    delta_series(0, 1, 2, Sign::Minus, alpha, window)
}

/// Right side of the basic delta identity: `z1^{-1} δ((z0 + z2)/z1) ((z0 + z2)/z1)^{-α}`.
pub fn delta_expand_dual(alpha: &Rational, window: &Window) -> Result<FormalSeries, FormalError> {
    delta_series(1, 0, 2, Sign::Plus, &-alpha, window)
}

fn floor_div_i(n: i64, d: i64) -> i64 {
    n.div_euclid(d)
}

fn ceil_div(n: i64, d: i64) -> i64 {
    -((-n).div_euclid(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(n)
    }

    #[test]
    fn series_arith_examples() {
        let w = Window::new(vec![2], &[(-4, 4)]).unwrap();
        let half = FormalSeries::monomial(w.clone(), vec![1], c(1));
        let prod = half.mul(&half).unwrap();
        assert_eq!(prod.coefficient(&[int(1)]).unwrap(), c(1));
        assert_eq!(prod.len(), 1);
        assert_eq!(half.add(&FormalSeries::zero(w.clone())).unwrap(), half);

        let w1 = Window::new(vec![1], &[(-4, 4)]).unwrap();
        let p = FormalSeries::monomial(w1.clone(), vec![1], c(1))
            .add(&FormalSeries::monomial(w1.clone(), vec![-1], c(1)))
            .unwrap();
        let q = FormalSeries::monomial(w1.clone(), vec![1], c(1))
            .add(&FormalSeries::monomial(w1.clone(), vec![-1], c(-1)))
            .unwrap();
        let pq = p.mul(&q).unwrap();
        assert_eq!(pq.len(), 2);
        assert_eq!(pq.coefficient_scaled(&[2]).unwrap(), c(1));
        assert_eq!(pq.coefficient_scaled(&[-2]).unwrap(), c(-1));
        assert!(!pq.is_truncated());
    }

    #[test]
    fn incompatible_series_rejected() {
        let a: FormalSeries = FormalSeries::zero(Window::new(vec![2], &[(-1, 1)]).unwrap());
        let b: FormalSeries = FormalSeries::zero(Window::new(vec![1], &[(-1, 1)]).unwrap());
        assert!(matches!(a.add(&b), Err(FormalError::Incompatible(_))));
        assert!(matches!(a.mul(&b), Err(FormalError::Incompatible(_))));
    }

    #[test]
    fn products_record_dropped_terms() {
        let w = Window::new(vec![1], &[(-2, 2)]).unwrap();
        let z2 = FormalSeries::monomial(w.clone(), vec![2], c(1));
        let z4 = z2.mul(&z2).unwrap();
        assert!(z4.is_empty());
        assert!(z4.is_truncated());
    }

    #[test]
    fn binomial_examples() {
        let w = Window::new(vec![2, 1], &[(-6, 6), (0, 4)]).unwrap();
        let s = binomial_expand(Sign::Plus, &int(1), &w).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.coefficient(&[int(1), int(0)]).unwrap(), c(1));
        assert_eq!(s.coefficient(&[int(0), int(1)]).unwrap(), c(1));
        assert!(!s.is_truncated());

        let s = binomial_expand(Sign::Minus, &rat(1, 2), &w).unwrap();
        assert_eq!(s.coefficient(&[rat(-1, 2), int(1)]).unwrap(), Cyclotomic::from_rational(rat(-1, 2)));
        assert!(s.is_truncated());

        let s = binomial_expand(Sign::Plus, &int(0), &w).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient(&[int(0), int(0)]).unwrap(), c(1));
    }

    #[test]
    fn binomial_has_no_negative_second_powers() {
        let w = Window::new(vec![3, 1], &[(-6, 6), (-4, 4)]).unwrap();
        let s = binomial_expand(Sign::Plus, &rat(2, 3), &w).unwrap();
        assert!(s.terms().keys().all(|e| e[1] >= 0));
    }

    #[test]
    fn delta_examples() {
        let w = Window::cube(vec![1, 1, 1], 4);
        let d = delta_expand(&int(0), &w).unwrap();
        assert_eq!(d.coefficient(&[int(0), int(-1), int(0)]).unwrap(), c(1));
        for e in d.terms().keys() {
            assert!(e[2] >= 0);
        }
        assert!(d.coefficient(&[int(0), int(0), int(-1)]).unwrap().is_zero());

        // Res_{z1} z1^{-1} δ(z2/z1) = 1
        let w2 = Window::cube(vec![1, 1], 4);
        let r = delta_ratio(1, 0, &int(0), &w2).unwrap();
        let res = r.residue(0).unwrap();
        assert_eq!(res.len(), 1);
        assert_eq!(res.coefficient(&[int(0)]).unwrap(), c(1));
    }

    #[test]
    fn residue_examples() {
        let w = Window::new(vec![2], &[(-3, 3)]).unwrap();
        let s = FormalSeries::monomial(w.clone(), vec![-2], c(1));
        assert_eq!(s.residue(0).unwrap().terms().get(&vec![]), Some(&c(1)));
        let s = FormalSeries::monomial(w, vec![-1], c(1));
        assert!(s.residue(0).unwrap().is_empty());

        let w = Window::cube(vec![1, 1], 4);
        let s = FormalSeries::monomial(w, vec![-1, 3], c(1));
        let r = s.residue(0).unwrap();
        assert_eq!(r.coefficient(&[int(3)]).unwrap(), c(1));
    }

    #[test]
    fn coefficient_outside_window_is_an_error() {
        let w = Window::new(vec![1], &[(-2, 2)]).unwrap();
        let s = FormalSeries::monomial(w.clone(), vec![1], c(1))
            .add(&FormalSeries::monomial(w, vec![2], c(2)))
            .unwrap();
        assert_eq!(s.coefficient(&[int(2)]).unwrap(), c(2));
        assert!(matches!(s.coefficient(&[int(3)]), Err(FormalError::OutsideWindow(_))));
        assert!(matches!(s.coefficient(&[rat(1, 2)]), Err(FormalError::BadDenominator { .. })));
    }

    #[test]
    fn derivative_of_monomial() {
        let w = Window::new(vec![2], &[(-3, 3)]).unwrap();
        let s = FormalSeries::monomial(w, vec![3], c(1));
        let d = s.derivative(0).unwrap();
        assert_eq!(d.coefficient(&[rat(1, 2)]).unwrap(), Cyclotomic::from_rational(rat(3, 2)));
    }

    #[test]
    fn json_form() {
        let w = Window::new(vec![2, 1], &[(-1, 1), (-1, 1)]).unwrap();
        let s = FormalSeries::monomial(w, vec![1, -1], c(3));
        let j = s.to_json();
        assert_eq!(j["N"], 2);
        assert_eq!(j["r"], 1);
        assert_eq!(j["terms"][0][0], serde_json::json!(["1/2", "-1"]));
    }
}

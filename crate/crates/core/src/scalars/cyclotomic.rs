use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational, Rational};
use super::ScalarError;

pub const DEFAULT_ORDER_CAP: u32 = 360;

static ORDER_CAP: AtomicU32 = AtomicU32::new(DEFAULT_ORDER_CAP);

/// Largest root-of-unity order arithmetic may embed into.
pub fn order_cap() -> u32 {
    ORDER_CAP.load(Ordering::Relaxed)
}

pub fn set_order_cap(cap: u32) {
    ORDER_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// Integer coefficients of the `m`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by every Φ_d with d | m, d < m.
    let mut p = vec![0i64; m as usize + 1];
    p[0] = -1;
    p[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = poly_div_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    cache.lock().unwrap().insert(m, p.clone());
    p
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let lead = den[dn];
    let qlen = rem.len() - dn;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn] / lead;
        q[k] = c;
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

pub fn euler_phi(m: u32) -> usize {
    cyclotomic_polynomial(m).len() - 1
}

struct FieldTable {
    phi: usize,
    /// `reduce[e]` holds the power-basis coordinates of `ω^e` for `0 <= e < order`.
    reduce: Vec<Vec<i64>>,
}

fn table(order: u32) -> Arc<FieldTable> {
    static TABLES: OnceLock<Mutex<HashMap<u32, Arc<FieldTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().unwrap().get(&order) {
        return t.clone();
    }
    let poly = cyclotomic_polynomial(order);
    let phi = poly.len() - 1;
    let mut reduce = Vec::with_capacity(order as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..order {
        reduce.push(cur.clone());
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        next[1..phi].copy_from_slice(&cur[..phi - 1]);
        if top != 0 {
            for i in 0..phi {
                next[i] -= top * poly[i];
            }
        }
        cur = next;
    }
    let t = Arc::new(FieldTable { phi, reduce });
    tables.lock().unwrap().insert(order, t.clone());
    t
}

/// Element of Q(ω_M), stored in the power basis `1, ω, …, ω^{φ(M)-1}` reduced modulo Φ_M.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { order: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Cyclotomic::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Cyclotomic { order: 1, coeffs: vec![q] }
    }

    pub fn from_int(n: i64) -> Self {
        Cyclotomic::from_rational(Rational::from_integer(n.into()))
    }

    pub fn new(order: u32, coeffs: Vec<Rational>) -> Result<Self, ScalarError> {
        if order == 0 {
            return Err(ScalarError::BadOrder(0));
        }
        if order > order_cap() {
            return Err(ScalarError::OrderCap { order, cap: order_cap() });
        }
        let phi = euler_phi(order);
        if coeffs.len() != phi {
            return Err(ScalarError::BadLength { order, expected: phi, got: coeffs.len() });
        }
        Ok(Cyclotomic { order, coeffs }.canonical())
    }

    /// `ω_n^k` with `ω_n = exp(2πi/n)`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n > 0, "root of unity of order 0");
        let t = table(n);
        let e = k.rem_euclid(n as i64) as usize;
        let coeffs = t.reduce[e].iter().map(|&c| Rational::from_integer(c.into())).collect();
        Cyclotomic { order: n, coeffs }.canonical()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn canonical(mut self) -> Self {
        // Q(ω_2) = Q; keep such values in order 1 so the rational fast path applies.
        if self.order == 2 {
            self.order = 1;
        }
        if self.order > 1 && self.coeffs[1..].iter().all(Zero::is_zero) {
            let q = std::mem::take(&mut self.coeffs[0]);
            return Cyclotomic::from_rational(q);
        }
        self
    }

    /// Re-expresses the element in Q(ω_target); `order` must divide `target`.
    pub fn embed(&self, target: u32) -> Result<Cyclotomic, ScalarError> {
        if target > order_cap() {
            return Err(ScalarError::OrderCap { order: target, cap: order_cap() });
        }
        Ok(self.embed_unchecked(target))
    }

    fn embed_unchecked(&self, target: u32) -> Cyclotomic {
        assert!(target.is_multiple_of(self.order), "cannot embed order {} into {}", self.order, target);
        if target == self.order {
            return self.clone();
        }
        let t = table(target);
        let step = (target / self.order) as usize;
        let mut out = vec![Rational::zero(); t.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (i * step) % target as usize;
            for (j, &r) in t.reduce[e].iter().enumerate() {
                if r != 0 {
                    out[j] += c * Rational::from_integer(r.into());
                }
            }
        }
        Cyclotomic { order: target, coeffs: out }
    }

    fn common(a: &Cyclotomic, b: &Cyclotomic) -> Result<(Cyclotomic, Cyclotomic), ScalarError> {
        if a.order == b.order {
            return Ok((a.clone(), b.clone()));
        }
        let l = a.order.lcm(&b.order);
        Ok((a.embed(l)?, b.embed(l)?))
    }

    pub fn try_add(&self, other: &Cyclotomic) -> Result<Cyclotomic, ScalarError> {
        if self.order == 1 && other.order == 1 {
            return Ok(Cyclotomic::from_rational(&self.coeffs[0] + &other.coeffs[0]));
        }
        let (a, b) = Cyclotomic::common(self, other)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Ok(Cyclotomic { order: a.order, coeffs }.canonical())
    }

    pub fn try_mul(&self, other: &Cyclotomic) -> Result<Cyclotomic, ScalarError> {
        if self.order == 1 && other.order == 1 {
            return Ok(Cyclotomic::from_rational(&self.coeffs[0] * &other.coeffs[0]));
        }
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(q));
        }
        if let Some(q) = self.as_rational() {
            return Ok(other.scale(q));
        }
        let (a, b) = Cyclotomic::common(self, other)?;
        let t = table(a.order);
        let phi = t.phi;
        let mut conv = vec![Rational::zero(); 2 * phi - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    conv[i + j] += x * y;
                }
            }
        }
        let mut out = vec![Rational::zero(); phi];
        for (e, c) in conv.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if e < phi {
                out[e] += c;
            } else {
                for (j, &r) in t.reduce[e % a.order as usize].iter().enumerate() {
                    if r != 0 {
                        out[j] += &c * Rational::from_integer(r.into());
                    }
                }
            }
        }
        Ok(Cyclotomic { order: a.order, coeffs: out }.canonical())
    }

    pub fn scale(&self, q: &Rational) -> Cyclotomic {
        let coeffs = self.coeffs.iter().map(|c| c * q).collect();
        Cyclotomic { order: self.order, coeffs }.canonical()
    }

    pub fn try_inv(&self) -> Result<Cyclotomic, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::ZeroInverse);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Cyclotomic::from_rational(q.recip()));
        }
        // Solve (multiplication by self) · x = 1 in the power basis.
        let phi = self.coeffs.len();
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(phi);
        for j in 0..phi {
            let w = Cyclotomic::root_of_unity(self.order, j as i64).embed_unchecked(self.order);
            cols.push(self.try_mul(&w)?.embed_unchecked(self.order).coeffs);
        }
        let mut aug: Vec<Vec<Rational>> = (0..phi)
            .map(|i| {
                let mut row: Vec<Rational> = (0..phi).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { Rational::one() } else { Rational::zero() });
                row
            })
            .collect();
        for c in 0..phi {
            let p = (c..phi).find(|&r| !aug[r][c].is_zero()).ok_or(ScalarError::ZeroInverse)?;
            aug.swap(c, p);
            let piv = aug[c][c].clone();
            for x in aug[c].iter_mut() {
                *x /= &piv;
            }
            for r in 0..phi {
                if r != c && !aug[r][c].is_zero() {
                    let f = aug[r][c].clone();
                    let pivot_row = aug[c].clone();
                    for (x, y) in aug[r].iter_mut().zip(pivot_row.iter()) {
                        *x -= &f * y;
                    }
                }
            }
        }
        let coeffs = aug.into_iter().map(|mut row| row.pop().unwrap()).collect();
        Ok(Cyclotomic { order: self.order, coeffs }.canonical())
    }

    pub fn try_pow(&self, n: i64) -> Result<Cyclotomic, ScalarError> {
        let mut base = if n < 0 { self.try_inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Cyclotomic::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn inv(&self) -> Cyclotomic {
        self.try_inv().expect("inverse of zero")
    }

    pub fn pow(&self, n: i64) -> Cyclotomic {
        self.try_pow(n).unwrap_or_else(|e| panic!("{e}"))
    }
}

fn unwrap_arith(r: Result<Cyclotomic, ScalarError>) -> Cyclotomic {
    r.unwrap_or_else(|e| panic!("cyclotomic arithmetic: {e}"))
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let l = self.order.lcm(&other.order);
        self.embed_unchecked(l).coeffs == other.embed_unchecked(l).coeffs
    }
}

impl Eq for Cyclotomic {}

impl Default for Cyclotomic {
    fn default() -> Self {
        Cyclotomic::zero()
    }
}

impl From<Rational> for Cyclotomic {
    fn from(q: Rational) -> Self {
        Cyclotomic::from_rational(q)
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Cyclotomic::from_int(n)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:expr) => {
        impl $tr<&Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                $f(self, rhs)
            }
        }
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                $f(&self, &rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                $f(&self, rhs)
            }
        }
        impl $tr<Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                $f(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Cyclotomic, b: &Cyclotomic| unwrap_arith(a.try_add(b)));
binop!(Sub, sub, |a: &Cyclotomic, b: &Cyclotomic| unwrap_arith(a.try_add(&-b)));
binop!(Mul, mul, |a: &Cyclotomic, b: &Cyclotomic| unwrap_arith(a.try_mul(b)));

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        if self.order == 1 && rhs.order == 1 {
            self.coeffs[0] += &rhs.coeffs[0];
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        if self.order == 1 && rhs.order == 1 {
            self.coeffs[0] -= &rhs.coeffs[0];
        } else {
            *self = &*self - rhs;
        }
    }
}

impl MulAssign<&Cyclotomic> for Cyclotomic {
    fn mul_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", format_rational(q));
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "{}*w{}", format_rational(c), self.order)?,
                _ => write!(f, "{}*w{}^{}", format_rational(c), self.order, i)?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicRepr {
    order: u32,
    coeffs: Vec<String>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CyclotomicRepr {
            order: self.order,
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = CyclotomicRepr::deserialize(d)?;
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Cyclotomic::new(r.order, coeffs).map_err(D::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Inv,
    Pow,
}

#[derive(Clone, Debug)]
pub enum Operand {
    Scalar(Cyclotomic),
    Int(i64),
}

/// Single entry point for the four field operations; `Inv` ignores `b`, `Pow` needs an integer.
pub fn cyclotomic_arith(op: ArithOp, a: &Cyclotomic, b: &Operand) -> Result<Cyclotomic, ScalarError> {
    let scalar = |b: &Operand| match b {
        Operand::Scalar(c) => c.clone(),
        Operand::Int(n) => Cyclotomic::from_int(*n),
    };
    match op {
        ArithOp::Add => a.try_add(&scalar(b)),
        ArithOp::Mul => a.try_mul(&scalar(b)),
        ArithOp::Inv => a.try_inv(),
        ArithOp::Pow => match b {
            Operand::Int(n) => a.try_pow(*n),
            Operand::Scalar(c) => match c.as_rational() {
                Some(q) if q.is_integer() => {
                    let n: i64 = q.to_integer().try_into().map_err(|_| ScalarError::NonIntegerExponent)?;
                    a.try_pow(n)
                }
                _ => Err(ScalarError::NonIntegerExponent),
            },
        },
    }
}

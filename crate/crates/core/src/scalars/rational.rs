use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Generalized binomial coefficient `α(α-1)…(α-i+1)/i!`.
pub fn binomial_coeff(alpha: &Rational, i: u32) -> Rational {
    let mut acc = Rational::one();
    let mut fact = BigInt::one();
    let mut term = alpha.clone();
    for k in 1..=i {
        acc *= &term;
        term -= Rational::one();
        fact *= BigInt::from(k);
    }
    acc / Rational::from_integer(fact)
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Floor of `n / d` for `d > 0`.
pub fn floor_div(n: i64, d: i64) -> i64 {
    n.div_euclid(d)
}

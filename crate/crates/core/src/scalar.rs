//! Exact scalars: rationals, and polynomials in a formal bubble parameter `d`.
//!
//! The printed form is canonical, highest degree first, e.g. `1/2*d^2 - 3`.
//! Parsing accepts `d`, `delta` or `δ` for the indeterminate.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(Q::new(a, b))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A polynomial in `d` with rational coefficients; constants are rationals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    // coeffs[k] multiplies d^k; never has a trailing zero
    coeffs: Vec<Q>,
}

impl Scalar {
    pub fn constant(c: Q) -> Self {
        let mut s = Scalar { coeffs: vec![c] };
        s.trim();
        s
    }

    pub fn int(n: i64) -> Self {
        Self::constant(q(n))
    }

    /// The formal indeterminate.
    pub fn delta() -> Self {
        Scalar { coeffs: vec![Q::zero(), Q::one()] }
    }

    pub fn from_coeffs(coeffs: Vec<Q>) -> Self {
        let mut s = Scalar { coeffs };
        s.trim();
        s
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.coeffs.len() {
            0 => Some(Q::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, at: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * at + c)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = Scalar::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        Scalar::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar { coeffs: vec![Q::one()] }
    }
}

impl From<Q> for Scalar {
    fn from(c: Q) -> Self {
        Scalar::constant(c)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = o.coeffs.get(i);
            c.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Scalar::from_coeffs(c)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        let mut c = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Scalar::from_coeffs(c)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => "d".to_string(),
                _ => format!("d^{k}"),
            };
            if k == 0 {
                write!(f, "{}", fmt_q(&a))?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", fmt_q(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.replace("delta", "d").replace('δ', "d").chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        // split into signed terms
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in text.chars().enumerate() {
            if (ch == '+' || ch == '-') && !(i > 0 && cur.ends_with('^')) {
                if i > 0 {
                    if cur.is_empty() {
                        return Err(Error::Parse(format!("dangling sign in {s:?}")));
                    }
                    terms.push((neg, std::mem::take(&mut cur)));
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {s:?}")));
        }
        terms.push((neg, cur));

        let mut acc = Scalar::zero();
        for (neg, t) in terms {
            let (coef, deg) = parse_term(&t).ok_or_else(|| Error::Parse(format!("bad term {t:?} in {s:?}")))?;
            let mut c = vec![Q::zero(); deg + 1];
            c[deg] = if neg { -coef } else { coef };
            acc = &acc + &Scalar::from_coeffs(c);
        }
        Ok(acc)
    }
}

fn parse_term(t: &str) -> Option<(Q, usize)> {
    let Some(pos) = t.find('d') else {
        return parse_q(t).ok().map(|c| (c, 0));
    };
    let (head, tail) = t.split_at(pos);
    let coef = match head.strip_suffix('*') {
        Some(h) => parse_q(h).ok()?,
        None if head.is_empty() => Q::one(),
        None => return None,
    };
    let tail = &tail[1..];
    let deg = if tail.is_empty() {
        1
    } else {
        tail.strip_prefix('^')?.parse().ok()?
    };
    Some((coef, deg))
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn printing() {
        let x: Scalar = Scalar::from_coeffs(vec![q(-3), q(0), q_frac(1, 2)]);
        assert_eq!(x.to_string(), "1/2*d^2 - 3");
        assert_eq!(Scalar::constant(q_frac(3, 2)).to_string(), "3/2");
        assert_eq!(Scalar::zero().to_string(), "0");
        assert_eq!((-Scalar::delta()).to_string(), "-d");
        assert_eq!(Scalar::from_coeffs(vec![q(1), q(-2)]).to_string(), "-2*d + 1");
    }

    #[test]
    fn parsing() {
        let x: Scalar = "1/2*d^2 - 3".parse().unwrap();
        assert_eq!(x.coeffs(), &[q(-3), q(0), q_frac(1, 2)]);
        assert_eq!("delta".parse::<Scalar>().unwrap(), Scalar::delta());
        assert_eq!("-1/2".parse::<Scalar>().unwrap(), Scalar::constant(q_frac(-1, 2)));
        assert_eq!("d + d".parse::<Scalar>().unwrap().to_string(), "2*d");
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("d^".parse::<Scalar>().is_err());
        assert!("3 +".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        prop::collection::vec((-20i64..20, 1i64..6), 0..4)
            .prop_map(|v| Scalar::from_coeffs(v.into_iter().map(|(a, b)| q_frac(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn round_trip(x in arb_scalar()) {
            let text = x.to_string();
            let back: Scalar = text.parse().unwrap();
            prop_assert_eq!(back.to_string(), text);
            prop_assert_eq!(back, x);
        }

        #[test]
        fn evaluation_is_a_ring_map(x in arb_scalar(), y in arb_scalar(), a in -5i64..5, b in 1i64..4) {
            let at = q_frac(a, b);
            prop_assert_eq!((&x * &y).eval(&at), x.eval(&at) * y.eval(&at));
            prop_assert_eq!((&x + &y).eval(&at), x.eval(&at) + y.eval(&at));
        }

        #[test]
        fn ring_axioms(x in arb_scalar(), y in arb_scalar(), z in arb_scalar()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x - &x, Scalar::zero());
        }
    }
}

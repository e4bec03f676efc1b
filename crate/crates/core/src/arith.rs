//! Exact rationals and negative (Hirzebruch–Jung) continued fractions.
//!
//! A rational arm weight `-a/b` of a Seifert star becomes a chain of integer
//! framings `[c1, ..., ck]`, every `ci <= -2`, with
//! `c1 - 1/(c2 - 1/(... - 1/ck)) = -a/b`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact fraction in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    /// Builds `num/den` in canonical form. Fails on a zero denominator.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Self::canonical(num, den))
    }

    /// Accepts `num/den` only if it is already canonical.
    pub fn from_canonical(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if !den.is_positive() || !num.gcd(&den).is_one() {
            return Err(Error::Domain(format!("{num}/{den} is not in lowest terms")));
        }
        Ok(Self { num, den })
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    fn canonical(mut num: BigInt, mut den: BigInt) -> Self {
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if g.is_zero() || g.is_one() {
            return Self { num, den };
        }
        Self {
            num: num / &g,
            den: den / &g,
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `1/self`; fails on zero.
    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational::canonical(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational::canonical(
            &self.num * &rhs.den - &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

/// A negative continued fraction; every term is at most -2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NegCF(Vec<BigInt>);

impl NegCF {
    pub fn new(terms: Vec<BigInt>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Domain("empty continued fraction".into()));
        }
        let minus_two = BigInt::from(-2);
        if let Some(t) = terms.iter().find(|t| **t > minus_two) {
            return Err(Error::Domain(format!(
                "continued fraction term {t} exceeds -2"
            )));
        }
        Ok(Self(terms))
    }

    pub fn terms(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for NegCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Expands `x < -1` into its unique negative continued fraction.
///
/// With `x = -a/b`, the leading term is `-ceil(a/b)`; the remainder
/// `-b/(ceil(a/b)*b - a)` is again below -1, and its denominator is strictly
/// smaller, so the loop terminates after at most `a` steps.
pub fn neg_cont_frac(x: &Rational) -> Result<NegCF> {
    if *x >= Rational::from_integer(-1) {
        return Err(Error::Domain(format!("{x} is not below -1")));
    }
    let mut a = -x.numer();
    let mut b = x.denom().clone();
    let mut terms = Vec::new();
    loop {
        let c = a.div_ceil(&b);
        let r = &c * &b - &a;
        terms.push(-c);
        if r.is_zero() {
            break;
        }
        a = std::mem::replace(&mut b, r);
    }
    NegCF::new(terms)
}

/// Evaluates `c1 - 1/(c2 - 1/(... - 1/ck))` exactly.
pub fn eval_neg_cont_frac(cf: &NegCF) -> Rational {
    let mut terms = cf.terms().iter().rev();
    // NegCF is never empty.
    let mut value = Rational::from_integer(terms.next().cloned().unwrap_or_default());
    for t in terms {
        // Terms are <= -2, so the running value is never zero.
        let inv = value
            .recip()
            .expect("partial value of a negative continued fraction is nonzero");
        value = &Rational::from_integer(t.clone()) - &inv;
    }
    value
}

/// Extended Euclid: returns `(g, u, v)` with `g = gcd(a, b) > 0` and `u*a + v*b = g`.
pub fn bezout(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::Domain("bezout(0, 0) is undefined".into()));
    }
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        Ok((-old_r, -old_s, -old_t))
    } else {
        Ok((old_r, old_s, old_t))
    }
}

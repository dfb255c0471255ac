//! Exact p-adic valuations on the rationals.
//!
//! The base field is modelled by `Q` with the p-adic valuation normalized by
//! `v(p) = 1`, so that `|x| = p^(-v(x))`. Zeros reported by polygons live in
//! the algebraic closure and may therefore have non-integral valuations, which
//! is why every valuation here is an exact rational.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The residue characteristic `p` of the valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeContext {
    p: u64,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Self { p })
        } else {
            Err(Error::NonPrime(p))
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// `p^e` as an integer.
    pub fn pow(&self, e: u32) -> BigInt {
        num_traits::pow(self.p_big(), e as usize)
    }

    /// `p^e` as a rational, for any integer `e`.
    pub fn rational_pow(&self, e: i64) -> BigRational {
        let base = BigRational::from_integer(self.pow(e.unsigned_abs() as u32));
        if e >= 0 {
            base
        } else {
            base.recip()
        }
    }

    /// Exponent of `p` in a nonzero integer, `None` for zero.
    pub fn int_valuation(&self, x: &BigInt) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        let p = self.p_big();
        let mut v = 0;
        let mut m = x.abs();
        loop {
            let (q, r) = m.div_rem(&p);
            if !r.is_zero() {
                return Some(v);
            }
            v += 1;
            m = q;
        }
    }

    /// Exponent of `p` in a nonzero rational, `None` for zero.
    pub fn rational_valuation(&self, x: &BigRational) -> Option<i64> {
        let num = self.int_valuation(x.numer())?;
        let den = self.int_valuation(x.denom()).expect("denominator is nonzero");
        Some(num as i64 - den as i64)
    }

    pub fn valuation(&self, x: &BigRational) -> Valuation {
        p_adic_valuation(x, self)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An additive valuation: an exact rational, or `Infinity` (the valuation of 0).
///
/// The derived order places every finite value below `Infinity`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(BigRational),
    Infinity,
}

impl Valuation {
    pub fn integer(v: i64) -> Self {
        Valuation::Finite(BigRational::from_integer(v.into()))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    /// Compare against a finite rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        match self {
            Valuation::Finite(v) => v.cmp(r),
            Valuation::Infinity => Ordering::Greater,
        }
    }
}

impl From<BigRational> for Valuation {
    fn from(v: BigRational) -> Self {
        Valuation::Finite(v)
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        val_add(&self, &rhs)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

/// Exponent of `p` in `x`; `Infinity` exactly when `x = 0`.
pub fn p_adic_valuation(x: &BigRational, ctx: &PrimeContext) -> Valuation {
    match ctx.rational_valuation(x) {
        Some(v) => Valuation::integer(v),
        None => Valuation::Infinity,
    }
}

pub fn val_min(a: &Valuation, b: &Valuation) -> Valuation {
    a.min(b).clone()
}

pub fn val_add(a: &Valuation, b: &Valuation) -> Valuation {
    match (a, b) {
        (Valuation::Finite(x), Valuation::Finite(y)) => Valuation::Finite(x + y),
        _ => Valuation::Infinity,
    }
}

/// Reduce `x` modulo `p^precision` in the p-adic sense: the result `r`
/// satisfies `v(x - r) >= precision` and has the form `p^v * m` with `m` an
/// integer in `[0, p^(precision - v))`.
pub(crate) fn truncate(x: &BigRational, ctx: &PrimeContext, precision: i64) -> BigRational {
    let Some(v) = ctx.rational_valuation(x) else {
        return BigRational::zero();
    };
    if v >= precision {
        return BigRational::zero();
    }
    let p = ctx.p_big();
    let strip = |mut m: BigInt| {
        while (&m % &p).is_zero() {
            m /= &p;
        }
        m
    };
    let num = strip(x.numer().clone());
    let den = strip(x.denom().clone());
    let modulus = ctx.pow((precision - v) as u32);
    let inv = mod_inverse(&den, &modulus).expect("unit part is invertible");
    let unit = (num * inv).mod_floor(&modulus);
    BigRational::from_integer(unit) * ctx.rational_pow(v)
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

//! Exact rationals and p-adic valuations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number; always stored in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A p-adic valuation: an integer, or `Infinite` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_zero(self) -> bool {
        self == Valuation::Finite(0)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::input(format!("{p} is not prime")))
    }
}

/// Multiplicity of `p` in a nonzero integer.
pub fn vp_int(p: u64, n: &BigInt) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        n = q;
        v += 1;
    }
    Valuation::Finite(v)
}

fn vp_unchecked(p: u64, a: &Rational) -> Valuation {
    if a.is_zero() {
        return Valuation::Infinite;
    }
    let num = vp_int(p, a.numer()).finite().unwrap_or(0);
    let den = vp_int(p, a.denom()).finite().unwrap_or(0);
    Valuation::Finite(num - den)
}

/// p-adic valuation of a rational number.
pub fn vp(p: u64, a: &Rational) -> Result<Valuation> {
    check_prime(p)?;
    Ok(vp_unchecked(p, a))
}

/// Valuation for callers that have already validated `p`.
pub(crate) fn val(p: u64, a: &Rational) -> Valuation {
    vp_unchecked(p, a)
}

/// Minimum valuation over a list of rationals.
pub(crate) fn min_val<'a>(p: u64, xs: impl IntoIterator<Item = &'a Rational>) -> Valuation {
    xs.into_iter()
        .map(|x| val(p, x))
        .min()
        .unwrap_or(Valuation::Infinite)
}

/// Integer `p^e` as a rational, for any sign of `e`.
pub fn p_power(p: u64, e: i64) -> Rational {
    let base = num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(base)
    } else {
        Rational::new(BigInt::one(), base)
    }
}

/// Least common multiple of the denominators.
pub(crate) fn denominator_lcm<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Nonnegative gcd of the numerators of integral rationals.
pub(crate) fn integer_content<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x.numer()))
}

/// Reduces a rational with p-integral value modulo `p`.
pub(crate) fn reduce_mod_p(p: u64, a: &Rational) -> u64 {
    let pb = BigInt::from(p);
    let num = a.numer().mod_floor(&pb);
    let den = a.denom().mod_floor(&pb);
    debug_assert!(!den.is_zero(), "reducing a non-integral rational");
    let num = u64::try_from(num).expect("residue fits");
    let den = u64::try_from(den).expect("residue fits");
    (num as u128 * inv_mod(den, p) as u128 % p as u128) as u64
}

/// Inverse of a nonzero residue modulo a prime.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "{a} is not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

/// Canonical text form of a rational: `n` for integers, `n/d` otherwise.
pub fn rat_string(a: &Rational) -> String {
    a.to_string()
}

/// Parses `n`, `-n` or `n/d`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::input(format!("not a rational number: {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::input("zero denominator"));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

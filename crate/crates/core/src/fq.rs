//! Finite fields F_{p^m} presented as F_p[T]/(modulus).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;

use crate::arith::{check_prime, inv_mod};
use crate::error::{Error, Result};
use crate::fq_poly::FqPoly;
use crate::limits::Limits;

/// Element of an [`FqField`]: coefficients over F_p of a residue class, lowest first.
///
/// Elements of different fields must never be mixed; the field is not stored here.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(Vec<u64>);

impl Fq {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    /// The F_p value of an element lying in the prime field.
    pub fn as_prime(&self) -> Option<u64> {
        self.0[1..].iter().all(|&c| c == 0).then_some(self.0[0])
    }
}

/// The finite field F_p[T]/(modulus) with a monic irreducible modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqField {
    p: u64,
    /// Monic, lowest coefficient first, length `degree + 1`.
    modulus: Vec<u64>,
}

impl FqField {
    /// The prime field F_p, with modulus `T`.
    pub fn prime(p: u64) -> Result<Arc<FqField>> {
        check_prime(p)?;
        Ok(Arc::new(FqField {
            p,
            modulus: vec![0, 1],
        }))
    }

    /// F_p[T]/(modulus); rejects reducible moduli.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Arc<FqField>> {
        check_prime(p)?;
        let field = FqField::from_monic(p, modulus)?;
        let base = FqField::prime(p)?;
        let as_poly = FqPoly::from_u64s(&base, &field.modulus);
        if !as_poly.is_irreducible() {
            return Err(Error::input("field modulus is reducible"));
        }
        Ok(field)
    }

    /// Skips the irreducibility test; the caller guarantees it.
    pub(crate) fn from_monic(p: u64, modulus: Vec<u64>) -> Result<Arc<FqField>> {
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::input(
                "field modulus must be monic of degree >= 1 over F_p",
            ));
        }
        Ok(Arc::new(FqField { p, modulus }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Extension degree over F_p.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.p), self.degree())
    }

    /// Number of elements, if it fits in a `u64`.
    pub fn order_u64(&self) -> Option<u64> {
        self.p.checked_pow(self.degree() as u32)
    }

    pub fn zero(&self) -> Fq {
        Fq(vec![0; self.degree()])
    }

    pub fn one(&self) -> Fq {
        self.from_u64(1)
    }

    pub fn from_u64(&self, a: u64) -> Fq {
        let mut v = vec![0; self.degree()];
        v[0] = a % self.p;
        self.reduce(v)
    }

    pub fn from_i64(&self, a: i64) -> Fq {
        self.from_u64(a.rem_euclid(self.p as i64) as u64)
    }

    /// The class of `T`.
    pub fn generator(&self) -> Fq {
        self.reduce(vec![0, 1])
    }

    /// Element with the given F_p coordinates (reduced modulo the modulus).
    pub fn element(&self, coords: &[u64]) -> Fq {
        self.reduce(coords.iter().map(|c| c % self.p).collect())
    }

    pub fn is_zero(&self, a: &Fq) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn reduce(&self, mut v: Vec<u64>) -> Fq {
        let m = self.degree();
        let p = self.p;
        for i in (m..v.len()).rev() {
            let c = v[i];
            if c == 0 {
                continue;
            }
            for (j, &mj) in self.modulus.iter().enumerate().take(m) {
                let t = (c as u128 * mj as u128 % p as u128) as u64;
                v[i - m + j] = (v[i - m + j] + p - t) % p;
            }
            v[i] = 0;
        }
        v.resize(m, 0);
        Fq(v)
    }

    pub fn add(&self, a: &Fq, b: &Fq) -> Fq {
        Fq(a.0
            .iter()
            .zip(&b.0)
            .map(|(x, y)| (x + y) % self.p)
            .collect())
    }

    pub fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        Fq(a.0
            .iter()
            .zip(&b.0)
            .map(|(x, y)| (x + self.p - y) % self.p)
            .collect())
    }

    pub fn neg(&self, a: &Fq) -> Fq {
        Fq(a.0.iter().map(|x| (self.p - x) % self.p).collect())
    }

    pub fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        let p = self.p as u128;
        if self.degree() == 1 {
            return Fq(vec![(a.0[0] as u128 * b.0[0] as u128 % p) as u64]);
        }
        let mut out = vec![0u64; 2 * self.degree() - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p) as u64;
            }
        }
        self.reduce(out)
    }

    pub fn scale(&self, a: &Fq, c: u64) -> Fq {
        Fq(a.0
            .iter()
            .map(|&x| (x as u128 * c as u128 % self.p as u128) as u64)
            .collect())
    }

    pub fn pow(&self, a: &Fq, e: &BigUint) -> Fq {
        let mut result = self.one();
        for i in (0..e.bits()).rev() {
            result = self.mul(&result, &result);
            if e.bit(i) {
                result = self.mul(&result, a);
            }
        }
        result
    }

    pub fn pow_u64(&self, a: &Fq, e: u64) -> Fq {
        self.pow(a, &BigUint::from(e))
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: &Fq) -> Fq {
        assert!(!self.is_zero(a), "inverse of zero");
        if self.degree() == 1 {
            return Fq(vec![inv_mod(a.0[0], self.p)]);
        }
        let e = self.order() - BigUint::from(2u32);
        self.pow(a, &e)
    }

    pub fn div(&self, a: &Fq, b: &Fq) -> Fq {
        self.mul(a, &self.inv(b))
    }

    /// The absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: &Fq) -> Fq {
        self.pow_u64(a, self.p)
    }

    /// Inverse Frobenius `a -> a^{1/p} = a^{q/p}`.
    pub fn pth_root(&self, a: &Fq) -> Fq {
        let e = num_traits::pow(BigUint::from(self.p), self.degree() - 1);
        self.pow(a, &e)
    }

    /// Every element, in coordinate order; capped by `limits.max_field_size`.
    pub fn elements(&self, limits: &Limits) -> Result<Vec<Fq>> {
        let q = self
            .order_u64()
            .filter(|&q| q <= limits.max_field_size)
            .ok_or_else(|| {
                Error::resource(format!(
                    "F_{}^{} exceeds the field size cap {}",
                    self.p,
                    self.degree(),
                    limits.max_field_size
                ))
            })?;
        Ok((0..q)
            .map(|mut k| {
                let mut v = Vec::with_capacity(self.degree());
                for _ in 0..self.degree() {
                    v.push(k % self.p);
                    k /= self.p;
                }
                Fq(v)
            })
            .collect())
    }

    /// Human-readable element, e.g. `3` or `2*a + 1` with `a` the class of `T`.
    pub fn format(&self, a: &Fq) -> String {
        if let Some(c) = a.as_prime() {
            return c.to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in a.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            parts.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Display for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.degree())
    }
}

impl Serialize for FqField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FqField", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("degree", &self.degree())?;
        st.serialize_field("modulus", &self.modulus)?;
        st.end()
    }
}

/// F_{p^m} with the lexicographically smallest monic irreducible modulus of degree `m`.
///
/// Candidates `T^m + c_{m-1} T^{m-1} + ... + c_0` are ordered by the integer
/// `sum c_i p^i`, so `c_{m-1}` is the most significant digit.
pub fn fq_extension(p: u64, m: usize, limits: &Limits) -> Result<Arc<FqField>> {
    check_prime(p)?;
    if m == 0 {
        return Err(Error::input("extension degree must be at least 1"));
    }
    let size = p
        .checked_pow(m as u32)
        .filter(|&q| q <= limits.max_field_size);
    if size.is_none() {
        return Err(Error::resource(format!(
            "F_{p}^{m} exceeds the field size cap {}",
            limits.max_field_size
        )));
    }
    smallest_irreducible(p, m)
}

/// Like [`fq_extension`] but only bounded by the extension degree; elements are never
/// enumerated, so the field size cap does not apply.
pub(crate) fn smallest_irreducible(p: u64, m: usize) -> Result<Arc<FqField>> {
    if m == 1 {
        return FqField::prime(p);
    }
    let base = FqField::prime(p)?;
    let mut digits = vec![0u64; m];
    loop {
        let mut coeffs = digits.clone();
        coeffs.push(1);
        if coeffs[0] != 0 && FqPoly::from_u64s(&base, &coeffs).is_irreducible() {
            return FqField::from_monic(p, coeffs);
        }
        // increment, least significant digit first
        let mut i = 0;
        loop {
            if i == m {
                return Err(Error::Internal(format!(
                    "no irreducible of degree {m} over F_{p}"
                )));
            }
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Number of monic irreducible polynomials of degree `k` over F_p (saturating).
pub fn count_irreducibles(p: u64, k: usize) -> u128 {
    fn mobius(mut n: usize) -> i128 {
        let mut result = 1;
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                n /= d;
                if n.is_multiple_of(d) {
                    return 0;
                }
                result = -result;
            }
            d += 1;
        }
        if n > 1 {
            result = -result;
        }
        result
    }
    let mut total: i128 = 0;
    for d in 1..=k {
        if k.is_multiple_of(d) {
            let term = (p as i128)
                .checked_pow((k / d) as u32)
                .unwrap_or(i128::MAX / 4);
            total = total.saturating_add(mobius(d) * term);
        }
    }
    (total / k as i128).max(0) as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_moduli() {
        let l = Limits::default();
        assert_eq!(fq_extension(5, 1, &l).unwrap().modulus(), &[0, 1]);
        assert_eq!(fq_extension(3, 2, &l).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(fq_extension(2, 3, &l).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(fq_extension(5, 2, &l).unwrap().modulus(), &[2, 0, 1]);
        assert!(matches!(fq_extension(2, 21, &l), Err(Error::Resource(_))));
        assert!(fq_extension(4, 1, &l).is_err());
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(FqField::with_modulus(5, vec![1, 0, 1]).is_err());
        assert!(FqField::with_modulus(3, vec![1, 0, 1]).is_ok());
    }

    #[test]
    fn field_axioms_in_f9() {
        let f = fq_extension(3, 2, &Limits::default()).unwrap();
        let all = f.elements(&Limits::default()).unwrap();
        assert_eq!(all.len(), 9);
        for a in &all {
            assert_eq!(f.pow_u64(a, 9), *a);
            if !f.is_zero(a) {
                assert_eq!(f.mul(a, &f.inv(a)), f.one());
            }
            assert_eq!(f.frobenius(&f.pth_root(a)), *a);
        }
        let i = f.generator();
        assert_eq!(f.mul(&i, &i), f.from_i64(-1));
    }

    #[test]
    fn irreducible_counts() {
        assert_eq!(count_irreducibles(2, 3), 2);
        assert_eq!(count_irreducibles(3, 2), 3);
        assert_eq!(count_irreducibles(5, 1), 5);
        assert_eq!(count_irreducibles(2, 4), 3);
    }
}

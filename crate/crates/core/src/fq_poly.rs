//! Polynomials over finite fields and their factorization.
//!
//! Factorization runs the usual three stages: squarefree decomposition, distinct-degree
//! factorization, then Cantor-Zassenhaus equal-degree splitting driven by a seeded
//! ChaCha stream. Factors are returned in a canonical order, so the output never depends
//! on the seed.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqField};

/// Dense polynomial over an [`FqField`], lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqPoly {
    field: Arc<FqField>,
    coeffs: Vec<Fq>,
}

impl FqPoly {
    pub fn new(field: &Arc<FqField>, mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        FqPoly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Polynomial with prime-field coefficients given as residues.
    pub fn from_u64s(field: &Arc<FqField>, coeffs: &[u64]) -> Self {
        FqPoly::new(field, coeffs.iter().map(|&c| field.from_u64(c)).collect())
    }

    pub fn from_i64s(field: &Arc<FqField>, coeffs: &[i64]) -> Self {
        FqPoly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &Arc<FqField>) -> Self {
        FqPoly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: &Arc<FqField>, c: Fq) -> Self {
        FqPoly::new(field, vec![c])
    }

    pub fn one(field: &Arc<FqField>) -> Self {
        FqPoly::constant(field, field.one())
    }

    /// The polynomial `T`.
    pub fn x(field: &Arc<FqField>) -> Self {
        FqPoly::new(field, vec![field.zero(), field.one()])
    }

    /// `T - a`.
    pub fn linear(field: &Arc<FqField>, a: &Fq) -> Self {
        FqPoly::new(field, vec![field.neg(a), field.one()])
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Fq> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Coefficients as prime-field residues; `None` if some coefficient is not in F_p.
    pub fn prime_coeffs(&self) -> Option<Vec<u64>> {
        self.coeffs.iter().map(|c| c.as_prime()).collect()
    }

    pub fn add(&self, other: &FqPoly) -> FqPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let f = &self.field;
        FqPoly::new(
            f,
            (0..n)
                .map(|i| f.add(&self.coeff(i), &other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &FqPoly) -> FqPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let f = &self.field;
        FqPoly::new(
            f,
            (0..n)
                .map(|i| f.sub(&self.coeff(i), &other.coeff(i)))
                .collect(),
        )
    }

    pub fn mul(&self, other: &FqPoly) -> FqPoly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return FqPoly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        FqPoly::new(f, out)
    }

    pub fn scale(&self, c: &Fq) -> FqPoly {
        let f = &self.field;
        FqPoly::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    /// Multiplication by `T^k`.
    pub fn shift(&self, k: usize) -> FqPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        FqPoly::new(&self.field, coeffs)
    }

    pub fn pow(&self, e: usize) -> FqPoly {
        let mut result = FqPoly::one(&self.field);
        for _ in 0..e {
            result = result.mul(self);
        }
        result
    }

    pub fn monic(&self) -> FqPoly {
        match self.leading() {
            Some(lc) => self.scale(&self.field.inv(lc)),
            None => self.clone(),
        }
    }

    pub fn derivative(&self) -> FqPoly {
        let f = &self.field;
        FqPoly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.scale(c, i as u64 % f.p()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Fq) -> Fq {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn div_rem(&self, divisor: &FqPoly) -> (FqPoly, FqPoly) {
        let f = &self.field;
        let dd = divisor.degree().expect("division by the zero polynomial");
        if self.coeffs.len() <= dd {
            return (FqPoly::zero(f), self.clone());
        }
        let lc_inv = f.inv(&divisor.coeffs[dd]);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let q = f.mul(&rem[i], &lc_inv);
            if f.is_zero(&q) {
                continue;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = f.sub(&rem[i - dd + j], &f.mul(&q, c));
            }
            quot[i - dd] = q;
        }
        rem.truncate(dd);
        (FqPoly::new(f, quot), FqPoly::new(f, rem))
    }

    pub fn rem(&self, divisor: &FqPoly) -> FqPoly {
        self.div_rem(divisor).1
    }

    /// Exact quotient; debug-asserts a zero remainder.
    pub fn div_exact(&self, divisor: &FqPoly) -> FqPoly {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd; zero only when both inputs are zero.
    pub fn gcd(&self, other: &FqPoly) -> FqPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &FqPoly) -> FqPoly {
        let base = self.rem(m);
        let mut result = FqPoly::one(&self.field).rem(m);
        for i in (0..e.bits()).rev() {
            result = result.mul(&result).rem(m);
            if e.bit(i) {
                result = result.mul(&base).rem(m);
            }
        }
        result
    }

    /// Squarefree: nonzero and coprime to its derivative.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let q = self.field.order();
        let x = FqPoly::x(&self.field);
        // frob[k] = T^{q^k} mod f
        let mut frob = vec![x.clone()];
        for k in 1..=n {
            let next = frob[k - 1].pow_mod(&q, &f);
            frob.push(next);
        }
        if !frob[n].sub(&x).rem(&f).is_zero() {
            return false;
        }
        prime_divisors(n)
            .into_iter()
            .all(|r| frob[n / r].sub(&x).gcd(&f).is_constant())
    }

    /// Roots in the coefficient field, sorted and without multiplicity.
    pub fn roots(&self, seed: u64) -> Vec<Fq> {
        if self.is_zero() {
            return Vec::new();
        }
        let f = self.monic();
        let x = FqPoly::x(&self.field);
        let split = x.pow_mod(&self.field.order(), &f).sub(&x).gcd(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        equal_degree_split(&split, 1, &mut rng, &mut out);
        let mut roots: Vec<Fq> = out.iter().map(|l| self.field.neg(&l.coeffs[0])).collect();
        roots.sort();
        roots
    }

    pub(crate) fn sort_key(&self) -> (usize, &[Fq]) {
        (self.coeffs.len(), &self.coeffs)
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            let coeff = self.field.format(c);
            let coeff = if coeff.contains(' ') {
                format!("({coeff})")
            } else {
                coeff
            };
            let mono = match i {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{i}"),
            };
            parts.push(match (coeff.as_str(), mono.is_empty()) {
                (_, true) => coeff,
                ("1", false) => mono,
                (_, false) => format!("{coeff}*{mono}"),
            });
        }
        if parts.is_empty() {
            write!(out, "0")
        } else {
            write!(out, "{}", parts.join(" + "))
        }
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Squarefree decomposition: pairs `(g_i, i)` with `f = lc * prod g_i^i`, each `g_i`
/// squarefree, monic and pairwise coprime.
pub fn squarefree_decomposition(f: &FqPoly) -> Vec<(FqPoly, usize)> {
    let field = f.field().clone();
    let p = field.p() as usize;
    let mut out = Vec::new();
    let f = f.monic();
    if f.is_constant() {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_constant() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_constant() {
        // what is left is a p-th power
        let deg = c.degree().unwrap();
        let root_coeffs = (0..=deg / p)
            .map(|j| field.pth_root(&c.coeff(j * p)))
            .collect();
        let root = FqPoly::new(&field, root_coeffs);
        for (g, j) in squarefree_decomposition(&root) {
            out.push((g, j * p));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial: pairs `(g_k, k)`
/// with `g_k` the product of all irreducible factors of degree `k`.
pub fn distinct_degree_factorization(f: &FqPoly) -> Vec<(FqPoly, usize)> {
    let field = f.field().clone();
    let q = field.order();
    let x = FqPoly::x(&field);
    let mut out = Vec::new();
    let mut rest = f.monic();
    let mut h = x.clone();
    let mut k = 0;
    while let Some(deg) = rest.degree() {
        if deg == 0 {
            break;
        }
        k += 1;
        if deg < 2 * k {
            out.push((rest.clone(), deg));
            break;
        }
        h = h.pow_mod(&q, &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_constant() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, k));
        }
    }
    out
}

/// Splits a monic product of distinct irreducibles of degree `k` (Cantor-Zassenhaus).
fn equal_degree_split(f: &FqPoly, k: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FqPoly>) {
    let n = match f.degree() {
        Some(n) if n > 0 => n,
        _ => return,
    };
    if n == k {
        out.push(f.monic());
        return;
    }
    let field = f.field().clone();
    let p = field.p();
    let m = field.degree();
    loop {
        let a = random_poly(&field, n, rng);
        if a.is_constant() {
            continue;
        }
        let b = if p == 2 {
            // trace from F_{2^{mk}} to F_2
            let mut t = a.rem(f);
            let mut sum = t.clone();
            for _ in 1..m * k {
                t = t.mul(&t).rem(f);
                sum = sum.add(&t);
            }
            sum
        } else {
            let e = (num_traits::pow(field.order(), k) - BigUint::one()) >> 1;
            a.pow_mod(&e, f).sub(&FqPoly::one(&field))
        };
        let g = b.gcd(f);
        if let Some(dg) = g.degree() {
            if dg > 0 && dg < n {
                let other = f.div_exact(&g);
                equal_degree_split(&g, k, rng, out);
                equal_degree_split(&other, k, rng, out);
                return;
            }
        }
    }
}

fn random_poly(field: &Arc<FqField>, n: usize, rng: &mut ChaCha8Rng) -> FqPoly {
    let coeffs = (0..n)
        .map(|_| {
            let coords: Vec<u64> = (0..field.degree())
                .map(|_| rng.gen_range(0..field.p()))
                .collect();
            field.element(&coords)
        })
        .collect();
    FqPoly::new(field, coeffs)
}

pub const MAX_FACTOR_DEGREE: usize = 4096;

/// Complete factorization into monic irreducibles with multiplicities, canonically ordered
/// by degree then coefficients. The leading coefficient is dropped.
pub fn fq_factor_seeded(f: &FqPoly, seed: u64) -> Result<Vec<(FqPoly, usize)>> {
    if f.is_zero() {
        return Err(Error::input("cannot factor the zero polynomial"));
    }
    if f.degree().unwrap() > MAX_FACTOR_DEGREE {
        return Err(Error::resource(format!(
            "degree {} exceeds the factorization cap {MAX_FACTOR_DEGREE}",
            f.degree().unwrap()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for (block, k) in distinct_degree_factorization(&part) {
            let mut pieces = Vec::new();
            equal_degree_split(&block, k, &mut rng, &mut pieces);
            out.extend(pieces.into_iter().map(|g| (g, mult)));
        }
    }
    out.sort_by(|a, b| a.0.sort_key().cmp(&b.0.sort_key()).then(a.1.cmp(&b.1)));
    Ok(out)
}

pub fn fq_factor(f: &FqPoly) -> Result<Vec<(FqPoly, usize)>> {
    fq_factor_seeded(f, 0)
}

/// Degrees of the irreducible factors, with multiplicity, sorted.
pub fn factor_degrees(f: &FqPoly, seed: u64) -> Result<Vec<usize>> {
    let mut degs: Vec<usize> = fq_factor_seeded(f, seed)?
        .into_iter()
        .flat_map(|(g, m)| std::iter::repeat_n(g.degree().unwrap(), m))
        .collect();
    degs.sort_unstable();
    Ok(degs)
}

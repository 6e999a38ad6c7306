//! Univariate polynomials over the rationals, resultants and discriminants.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{denominator_lcm, rat, Rational};
use crate::error::{Error, Result};

/// Dense polynomial over Q, coefficients lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyQ {
    coeffs: Vec<Rational>,
}

impl PolyQ {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        PolyQ::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        PolyQ { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        PolyQ::constant(rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        PolyQ::new(vec![c])
    }

    /// The polynomial `T`.
    pub fn x() -> Self {
        PolyQ::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `T^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> PolyQ {
        PolyQ::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> PolyQ {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => PolyQ::zero(),
        }
    }

    pub fn derivative(&self) -> PolyQ {
        PolyQ::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, e: usize) -> PolyQ {
        let mut result = PolyQ::one();
        for _ in 0..e {
            result = &result * self;
        }
        result
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &PolyQ) -> (PolyQ, PolyQ) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (PolyQ::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let q = &rem[i] * &lc_inv;
            if q.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] -= &q * c;
            }
            quot[i - dd] = q;
        }
        rem.truncate(dd);
        (PolyQ::new(quot), PolyQ::new(rem))
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &PolyQ) -> PolyQ {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// The rational root of a linear polynomial.
    pub fn linear_root(&self) -> Option<Rational> {
        (self.degree() == Some(1)).then(|| -&self.coeffs[0] / &self.coeffs[1])
    }
}

impl Add for &PolyQ {
    type Output = PolyQ;
    fn add(self, rhs: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyQ::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &PolyQ {
    type Output = PolyQ;
    fn sub(self, rhs: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyQ::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        PolyQ::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &PolyQ {
    type Output = PolyQ;
    fn mul(self, rhs: &PolyQ) -> PolyQ {
        if self.is_zero() || rhs.is_zero() {
            return PolyQ::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyQ::new(out)
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_terms(&self.coeffs, "T"))
    }
}

/// Renders `sum c_i v^i` highest degree first.
pub(crate) fn format_terms(coeffs: &[Rational], var: &str) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if mono.is_empty() || !abs.is_one() {
            out.push_str(&abs.to_string());
            if !mono.is_empty() {
                out.push('*');
            }
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Determinant of a rational matrix: each row is scaled to integers first.
pub fn det_rational(rows: &[Vec<Rational>]) -> Rational {
    let mut scale = BigInt::one();
    let int_rows = rows
        .iter()
        .map(|row| {
            let l = denominator_lcm(row);
            scale *= &l;
            let lr = Rational::from_integer(l);
            row.iter().map(|c| (c * &lr).to_integer()).collect()
        })
        .collect();
    Rational::new(det_bareiss(int_rows), scale)
}

/// Sylvester matrix of two coefficient lists given highest degree first, f-rows first.
pub fn sylvester_matrix(f_high: &[Rational], g_high: &[Rational]) -> Vec<Vec<Rational>> {
    let m = f_high.len().saturating_sub(1);
    let n = g_high.len().saturating_sub(1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (shift, src) in (0..n)
        .map(|s| (s, f_high))
        .chain((0..m).map(|s| (s, g_high)))
    {
        let mut row = vec![Rational::zero(); size];
        for (j, c) in src.iter().enumerate() {
            row[shift + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

fn high_first(f: &PolyQ) -> Vec<Rational> {
    f.coeffs.iter().rev().cloned().collect()
}

/// Resultant `lc(f)^deg g * prod g(roots of f)` as a Sylvester determinant.
pub fn resultant(f: &PolyQ, g: &PolyQ) -> Result<Rational> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::input("resultant of the zero polynomial"));
    }
    Ok(det_rational(&sylvester_matrix(
        &high_first(f),
        &high_first(g),
    )))
}

/// Resultant by the Euclidean remainder sequence over Q.
///
/// Independent of [`resultant`] and much faster at high degree.
pub fn resultant_euclid(f: &PolyQ, g: &PolyQ) -> Result<Rational> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::input("resultant of the zero polynomial"));
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    let mut acc = rat(1);
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        if db == 0 {
            return Ok(acc * num_traits::pow(b.coeffs[0].clone(), da));
        }
        if da == 0 {
            return Ok(acc * num_traits::pow(a.coeffs[0].clone(), db));
        }
        // Res(a, b) = (-1)^{da db} Res(b, a) and Res(b, a) = lc(b)^{da - dr} Res(b, r).
        let r = a.div_rem(&b).1;
        if r.is_zero() {
            return Ok(Rational::zero());
        }
        let dr = r.degree().unwrap();
        if da * db % 2 == 1 {
            acc = -acc;
        }
        acc *= num_traits::pow(b.coeffs[db].clone(), da - dr);
        a = b;
        b = r;
    }
}

/// `(-1)^{n(n-1)/2} Res(f, f') / lc(f)`; zero iff `f` has a repeated root.
///
/// Uses the remainder sequence; fiber polynomials reach degree in the thousands.
pub fn discriminant(f: &PolyQ) -> Result<Rational> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::input("discriminant of a constant polynomial")),
    };
    if n == 1 {
        return Ok(rat(1));
    }
    let r = resultant_euclid(f, &f.derivative())?;
    let sign = if (n * (n - 1) / 2) % 2 == 1 {
        rat(-1)
    } else {
        rat(1)
    };
    Ok(sign * r / f.leading().unwrap())
}

/// Discriminant of a binary form of formal degree `n` (coefficients indexed by X-power).
///
/// Agrees with [`discriminant`] when the `X^n` coefficient is nonzero; a simple root at
/// infinity contributes the square of the next coefficient, a double one gives zero.
pub fn form_discriminant(form: &PolyQ, n: usize) -> Result<Rational> {
    let Some(deg) = form.degree() else {
        return Err(Error::input("discriminant of the zero form"));
    };
    assert!(deg <= n, "form exceeds its formal degree");
    if n <= 1 {
        return Ok(rat(1));
    }
    match n - deg {
        0 => discriminant(form),
        1 => {
            let lc = form.leading().unwrap().clone();
            let inner = if deg == 0 {
                rat(1)
            } else {
                discriminant(form)?
            };
            Ok(&lc * &lc * inner)
        }
        _ => Ok(Rational::zero()),
    }
}

/// Resultant of two binary forms of formal degree `d`, coefficients `a_d, ..., a_0`.
pub fn binary_form_resultant(
    f_high: &[Rational],
    g_high: &[Rational],
    d: usize,
) -> Result<Rational> {
    if f_high.len() != d + 1 || g_high.len() != d + 1 {
        return Err(Error::input(format!(
            "binary forms of formal degree {d} need {} coefficients, got {} and {}",
            d + 1,
            f_high.len(),
            g_high.len()
        )));
    }
    Ok(det_rational(&sylvester_matrix(f_high, g_high)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_frac;

    fn p(c: &[i64]) -> PolyQ {
        PolyQ::from_ints(c)
    }

    fn hi(c: &[i64]) -> Vec<Rational> {
        c.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&p(&[-2, 1]), &p(&[-5, 1])).unwrap(), rat(-3));
        assert_eq!(resultant(&p(&[3, 0, 1]), &p(&[0, 2])).unwrap(), rat(12));
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[0, 1])).unwrap(), rat(1));
        assert!(resultant(&PolyQ::zero(), &p(&[1])).is_err());
    }

    #[test]
    fn resultant_with_constant() {
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[3])).unwrap(), rat(9));
        assert_eq!(resultant_euclid(&p(&[1, 0, 1]), &p(&[3])).unwrap(), rat(9));
    }

    #[test]
    fn discriminant_examples() {
        // T^2 + (p - x) at p = 5, x = 1
        assert_eq!(discriminant(&p(&[4, 0, 1])).unwrap(), rat(-16));
        assert_eq!(discriminant(&p(&[7, 0, 1])).unwrap(), rat(-28));
        assert_eq!(discriminant(&p(&[2, -3, 1])).unwrap(), rat(1));
        assert_eq!(discriminant(&p(&[1, 2, 1])).unwrap(), rat(0));
        assert!(discriminant(&p(&[5])).is_err());
    }

    #[test]
    fn form_discriminant_at_infinity() {
        // X*Y - Y^2 has simple roots 1 and infinity
        assert_eq!(form_discriminant(&p(&[-1, 1]), 2).unwrap(), rat(1));
        // Y^2 is a double root at infinity
        assert_eq!(form_discriminant(&p(&[1]), 2).unwrap(), rat(0));
        // invariant under X <-> Y: (X - 2Y)(X - 3Y) vs (Y - 2X)(Y - 3X)
        let a = form_discriminant(&p(&[6, -5, 1]), 2).unwrap();
        let b = form_discriminant(&p(&[1, -5, 6]), 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn binary_form_examples() {
        let five = 5;
        assert_eq!(
            binary_form_resultant(&hi(&[1, 0, 0]), &hi(&[five, 0, 1]), 2).unwrap(),
            rat(1)
        );
        assert_eq!(
            binary_form_resultant(&hi(&[1, 0, -1]), &hi(&[0, 0, 1]), 2).unwrap(),
            rat(1)
        );
        assert_eq!(
            binary_form_resultant(&hi(&[five, 1, 0]), &hi(&[0, 0, 1]), 2).unwrap(),
            rat(25)
        );
        assert!(binary_form_resultant(&hi(&[1, 0]), &hi(&[0, 0, 1]), 2).is_err());
    }

    #[test]
    fn division_and_gcd() {
        let f = p(&[-1, 0, 1]);
        let g = p(&[1, 1]);
        let (q, r) = f.div_rem(&g);
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(f.gcd(&p(&[-1, 0, 0, 1])), p(&[-1, 1]));
        assert_eq!(p(&[2, 4]).monic(), PolyQ::new(vec![rat_frac(1, 2), rat(1)]));
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(-1), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(0), BigInt::from(3)],
            vec![BigInt::from(1), BigInt::from(4), BigInt::from(5)],
        ];
        // 2(0*5 - 3*4) - (-1)(0*5 - 3*1) + 0 = -24 - 3 = -27
        assert_eq!(det_bareiss(m), BigInt::from(-27));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[5, 0, 1]).to_string(), "T^2 + 5");
        assert_eq!(p(&[-1, -2]).to_string(), "-2*T - 1");
    }

    fn small_poly() -> impl proptest::strategy::Strategy<Value = PolyQ> {
        proptest::collection::vec(-6i64..6, 1..8).prop_map(|c| PolyQ::from_ints(&c))
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn resultant_routes_agree_and_swap_sign(f in small_poly(), g in small_poly()) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let r1 = resultant(&f, &g).unwrap();
            let r2 = resultant_euclid(&f, &g).unwrap();
            prop_assert_eq!(&r1, &r2);
            let df = f.degree().unwrap();
            let dg = g.degree().unwrap();
            let swapped = resultant(&g, &f).unwrap();
            let sign = if df * dg % 2 == 1 { rat(-1) } else { rat(1) };
            prop_assert_eq!(r1, sign * swapped);
        }

        #[test]
        fn discriminant_vanishes_iff_repeated_root(f in small_poly(), g in small_poly()) {
            // multiply by a square now and then to get repeated roots
            let f = if g.coeffs().len() % 2 == 0 { &f * &(&g * &g) } else { f };
            prop_assume!(f.degree().unwrap_or(0) >= 1);
            let d = discriminant(&f).unwrap();
            let common = f.gcd(&f.derivative());
            prop_assert_eq!(d.is_zero(), common.degree().unwrap() > 0);
        }

        #[test]
        fn binary_resultant_scales(c in proptest::collection::vec(-5i64..5, 6), lam in 1i64..5) {
            let f = hi(&c[..3]);
            let g = hi(&c[3..]);
            let r = binary_form_resultant(&f, &g, 2).unwrap();
            let l = rat(lam);
            let fs: Vec<_> = f.iter().map(|x| x * &l).collect();
            let gs: Vec<_> = g.iter().map(|x| x * &l).collect();
            let rs = binary_form_resultant(&fs, &gs, 2).unwrap();
            prop_assert_eq!(rs, r * num_traits::pow(l, 4));
        }
    }
}

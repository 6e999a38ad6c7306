//! Binary forms over Q and over finite fields.
//!
//! A form `sum c_i X^i Y^{n-i}` of formal degree `n` is stored as the polynomial
//! `sum c_i T^i` (its dehomogenization at `Y = 1`) together with `n`. The difference
//! between `n` and the polynomial's degree is the multiplicity of the root at infinity.

use std::sync::Arc;

use num_traits::Zero;

use crate::arith::Rational;
use crate::fq::{Fq, FqField};
use crate::fq_poly::FqPoly;
use crate::poly::PolyQ;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QForm {
    degree: usize,
    poly: PolyQ,
}

impl QForm {
    pub fn new(degree: usize, poly: PolyQ) -> Self {
        assert!(
            poly.degree().unwrap_or(0) <= degree,
            "form exceeds its formal degree"
        );
        QForm { degree, poly }
    }

    /// From coefficients indexed by X-power (`c_0, ..., c_n`).
    pub fn from_low(coeffs: Vec<Rational>) -> Self {
        let degree = coeffs.len().saturating_sub(1);
        QForm::new(degree, PolyQ::new(coeffs))
    }

    pub fn x() -> Self {
        QForm::new(1, PolyQ::x())
    }

    pub fn y() -> Self {
        QForm::new(1, PolyQ::one())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn poly(&self) -> &PolyQ {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Coefficient of `X^i Y^{n-i}`.
    pub fn coeff(&self, i: usize) -> Rational {
        self.poly.coeff(i)
    }

    /// `c_0, ..., c_n`.
    pub fn low_coeffs(&self) -> Vec<Rational> {
        (0..=self.degree).map(|i| self.coeff(i)).collect()
    }

    /// `c_n, ..., c_0`.
    pub fn high_coeffs(&self) -> Vec<Rational> {
        (0..=self.degree).rev().map(|i| self.coeff(i)).collect()
    }

    /// Multiplicity of `[1:0]` as a root; `None` for the zero form.
    pub fn infinity_multiplicity(&self) -> Option<usize> {
        self.poly.degree().map(|d| self.degree - d)
    }

    pub fn mul(&self, other: &QForm) -> QForm {
        QForm::new(self.degree + other.degree, &self.poly * &other.poly)
    }

    pub fn add(&self, other: &QForm) -> QForm {
        assert_eq!(
            self.degree, other.degree,
            "adding forms of different degree"
        );
        QForm::new(self.degree, &self.poly + &other.poly)
    }

    pub fn sub(&self, other: &QForm) -> QForm {
        assert_eq!(
            self.degree, other.degree,
            "subtracting forms of different degree"
        );
        QForm::new(self.degree, &self.poly - &other.poly)
    }

    pub fn scale(&self, c: &Rational) -> QForm {
        QForm::new(self.degree, self.poly.scale(c))
    }

    pub fn pow(&self, e: usize) -> QForm {
        QForm::new(self.degree * e, self.poly.pow(e))
    }

    /// `F(A, B)` for forms `A`, `B` of equal degree.
    pub fn compose(&self, a: &QForm, b: &QForm) -> QForm {
        assert_eq!(a.degree, b.degree);
        let e = a.degree;
        // powers of A and B computed once
        let mut a_pows = vec![QForm::new(0, PolyQ::one())];
        let mut b_pows = vec![QForm::new(0, PolyQ::one())];
        for i in 1..=self.degree {
            a_pows.push(a_pows[i - 1].mul(a));
            b_pows.push(b_pows[i - 1].mul(b));
        }
        let mut acc = QForm::new(self.degree * e, PolyQ::zero());
        for (i, c) in self.poly.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = a_pows[i].mul(&b_pows[self.degree - i]).scale(c);
            acc = acc.add(&term);
        }
        acc
    }

    /// `F(x, y)` by Horner in `x`, folding in powers of `y` from the top degree down.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut ypow = Rational::from_integer(1.into());
        for c in self.low_coeffs().iter().rev() {
            acc = acc * x + c * &ypow;
            ypow *= y;
        }
        acc
    }
}

/// A point of P^1 over a finite field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FqPoint {
    Affine(Fq),
    Infinity,
}

impl FqPoint {
    pub fn format(&self, field: &FqField) -> String {
        match self {
            FqPoint::Affine(a) => field.format(a),
            FqPoint::Infinity => "inf".to_string(),
        }
    }
}

/// Binary form over a finite field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqForm {
    degree: usize,
    poly: FqPoly,
}

impl FqForm {
    pub fn new(degree: usize, poly: FqPoly) -> Self {
        assert!(
            poly.degree().unwrap_or(0) <= degree,
            "form exceeds its formal degree"
        );
        FqForm { degree, poly }
    }

    pub fn from_u64s(field: &Arc<FqField>, coeffs_low: &[u64]) -> Self {
        FqForm::new(
            coeffs_low.len().saturating_sub(1),
            FqPoly::from_u64s(field, coeffs_low),
        )
    }

    pub fn constant(field: &Arc<FqField>, c: Fq) -> Self {
        FqForm::new(0, FqPoly::constant(field, c))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn poly(&self) -> &FqPoly {
        &self.poly
    }

    pub fn field(&self) -> &Arc<FqField> {
        self.poly.field()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.poly.coeff(i)
    }

    pub fn infinity_multiplicity(&self) -> Option<usize> {
        self.poly.degree().map(|d| self.degree - d)
    }

    pub fn mul(&self, other: &FqForm) -> FqForm {
        FqForm::new(self.degree + other.degree, self.poly.mul(&other.poly))
    }

    pub fn add(&self, other: &FqForm) -> FqForm {
        assert_eq!(
            self.degree, other.degree,
            "adding forms of different degree"
        );
        FqForm::new(self.degree, self.poly.add(&other.poly))
    }

    pub fn sub(&self, other: &FqForm) -> FqForm {
        assert_eq!(
            self.degree, other.degree,
            "subtracting forms of different degree"
        );
        FqForm::new(self.degree, self.poly.sub(&other.poly))
    }

    pub fn scale(&self, c: &Fq) -> FqForm {
        FqForm::new(self.degree, self.poly.scale(c))
    }

    /// `F(A, B)` for forms `A`, `B` of equal degree.
    pub fn compose(&self, a: &FqForm, b: &FqForm) -> FqForm {
        assert_eq!(a.degree, b.degree);
        let field = self.field().clone();
        let one = FqForm::new(0, FqPoly::one(&field));
        let mut a_pows = vec![one.clone()];
        let mut b_pows = vec![one];
        for i in 1..=self.degree {
            a_pows.push(a_pows[i - 1].mul(a));
            b_pows.push(b_pows[i - 1].mul(b));
        }
        let mut acc = FqForm::new(self.degree * a.degree, FqPoly::zero(&field));
        for (i, c) in self.poly.coeffs().iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            acc = acc.add(&a_pows[i].mul(&b_pows[self.degree - i]).scale(c));
        }
        acc
    }

    /// `dF/dX`, a form of degree `n - 1` (zero for constants).
    pub fn partial_x(&self) -> FqForm {
        FqForm::new(self.degree.saturating_sub(1), self.poly.derivative())
    }

    /// `dF/dY`, a form of degree `n - 1` (zero for constants).
    pub fn partial_y(&self) -> FqForm {
        let field = self.field().clone();
        let n = self.degree;
        if n == 0 {
            return FqForm::new(0, FqPoly::zero(&field));
        }
        let coeffs = (0..n)
            .map(|i| field.scale(&self.coeff(i), ((n - i) as u64) % field.p()))
            .collect();
        FqForm::new(n - 1, FqPoly::new(&field, coeffs))
    }

    /// Value at the affine point `[a:1]`, or at `[1:0]`.
    pub fn eval(&self, point: &FqPoint) -> Fq {
        match point {
            FqPoint::Affine(a) => self.poly.eval(a),
            FqPoint::Infinity => self.coeff(self.degree),
        }
    }

    /// Squarefree as a binary form: nonzero, squarefree affine part, and at most a simple
    /// root at infinity.
    pub fn is_squarefree(&self) -> bool {
        match self.infinity_multiplicity() {
            None => false,
            Some(inf) => inf <= 1 && (self.poly.is_constant() || self.poly.is_squarefree()),
        }
    }

    /// Monic (in the affine part) gcd of two forms, including the shared power of `Y`.
    /// The zero form behaves as divisible by everything.
    pub fn gcd(&self, other: &FqForm) -> FqForm {
        let field = self.field().clone();
        let g = self.poly.gcd(&other.poly);
        let inf = match (self.infinity_multiplicity(), other.infinity_multiplicity()) {
            (None, None) => return FqForm::new(0, FqPoly::zero(&field)),
            (Some(a), None) => a.min(other.degree.saturating_sub(g.degree().unwrap_or(0))),
            (None, Some(b)) => b.min(self.degree.saturating_sub(g.degree().unwrap_or(0))),
            (Some(a), Some(b)) => a.min(b),
        };
        let deg = g.degree().unwrap_or(0) + inf;
        FqForm::new(deg, g)
    }

    /// Exact division by a divisor form.
    pub fn div_exact(&self, divisor: &FqForm) -> FqForm {
        assert!(divisor.degree <= self.degree);
        if self.is_zero() {
            return FqForm::new(self.degree - divisor.degree, self.poly.clone());
        }
        FqForm::new(
            self.degree - divisor.degree,
            self.poly.div_exact(&divisor.poly),
        )
    }

    /// Same form with coefficients viewed in an extension field. The coefficients
    /// must lie in the prime field.
    pub fn embed(&self, target: &Arc<FqField>) -> FqForm {
        let coeffs: Vec<Fq> = self
            .poly
            .coeffs()
            .iter()
            .map(|c| target.from_u64(c.as_prime().expect("prime-field coefficient")))
            .collect();
        FqForm::new(self.degree, FqPoly::new(target, coeffs))
    }

    /// The fiber form `y F - x G` over `[x:y]` (with `[1:0]` giving `-G`).
    pub fn fiber(f: &FqForm, g: &FqForm, point: &FqPoint) -> FqForm {
        let field = f.field();
        match point {
            FqPoint::Affine(a) => f.sub(&g.scale(a)),
            FqPoint::Infinity => g.scale(&field.neg(&field.one())),
        }
    }
}

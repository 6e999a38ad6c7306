//! Rational self-maps of P^1 as pairs of binary forms.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{
    check_prime, denominator_lcm, integer_content, min_val, p_power, rat, rat_string, reduce_mod_p,
    Rational, Valuation,
};
use crate::error::{Error, Result};
use crate::form::{FqForm, FqPoint, QForm};
use crate::fq::{Fq, FqField};
use crate::fq_poly::FqPoly;
use crate::limits::Limits;
use crate::poly::{binary_form_resultant, format_terms};

/// `phi([X:Y]) = [F(X,Y) : G(X,Y)]` with coprime forms of formal degree `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalMapModel {
    f: QForm,
    g: QForm,
}

impl RationalMapModel {
    /// Builds a model, rejecting forms that share a projective root.
    pub fn new(f: QForm, g: QForm) -> Result<Self> {
        if f.degree() != g.degree() {
            return Err(Error::input("forms must have the same formal degree"));
        }
        if f.degree() == 0 {
            return Err(Error::input("degree 0 map"));
        }
        let res = binary_form_resultant(&f.high_coeffs(), &g.high_coeffs(), f.degree())?;
        if res.is_zero() {
            return Err(Error::input("forms share a common projective root"));
        }
        Ok(RationalMapModel { f, g })
    }

    /// From coefficient lists `a_d, ..., a_0` and `b_d, ..., b_0`.
    pub fn from_high_coeffs(f_high: &[Rational], g_high: &[Rational]) -> Result<Self> {
        if f_high.len() != g_high.len() || f_high.is_empty() {
            return Err(Error::input(
                "coefficient lists must have equal nonzero length",
            ));
        }
        let low = |c: &[Rational]| QForm::from_low(c.iter().rev().cloned().collect());
        RationalMapModel::new(low(f_high), low(g_high))
    }

    pub fn from_int_coeffs(f_high: &[i64], g_high: &[i64]) -> Result<Self> {
        let conv = |c: &[i64]| c.iter().map(|&x| rat(x)).collect::<Vec<_>>();
        RationalMapModel::from_high_coeffs(&conv(f_high), &conv(g_high))
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    pub fn f(&self) -> &QForm {
        &self.f
    }

    pub fn g(&self) -> &QForm {
        &self.g
    }

    /// All `2d + 2` coefficients, F first.
    pub fn all_coeffs(&self) -> Vec<Rational> {
        let mut v = self.f.high_coeffs();
        v.extend(self.g.high_coeffs());
        v
    }

    /// Resultant of the two forms (Sylvester determinant).
    pub fn resultant(&self) -> Rational {
        binary_form_resultant(&self.f.high_coeffs(), &self.g.high_coeffs(), self.degree())
            .expect("forms have matching degree")
    }

    fn scaled(&self, c: &Rational) -> RationalMapModel {
        RationalMapModel {
            f: self.f.scale(c),
            g: self.g.scale(c),
        }
    }

    /// Scales to integer coefficients with content 1 (content taken positive).
    pub fn primitive(&self) -> RationalMapModel {
        let coeffs = self.all_coeffs();
        let l = Rational::from_integer(denominator_lcm(&coeffs));
        let scaled = self.scaled(&l);
        let content = integer_content(&scaled.all_coeffs());
        scaled.scaled(&Rational::new(BigInt::one(), content))
    }

    /// True when both models define the same map (forms proportional).
    pub fn same_map(&self, other: &RationalMapModel) -> bool {
        if self.degree() != other.degree() {
            return false;
        }
        let a = self.all_coeffs();
        let b = other.all_coeffs();
        let Some(i) = a.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        if b[i].is_zero() {
            return false;
        }
        let ratio = &b[i] / &a[i];
        a.iter().zip(&b).all(|(x, y)| x * &ratio == *y)
    }

    /// `[F(a,b) : G(a,b)]`.
    pub fn eval(&self, x: &ProjPointQ) -> ProjPointQ {
        let a = Rational::from_integer(x.a.clone());
        let b = Rational::from_integer(x.b.clone());
        let u = self.f.eval(&a, &b);
        let v = self.g.eval(&a, &b);
        ProjPointQ::from_rationals(&u, &v).expect("coprime forms never vanish together")
    }

    /// Dehomogenized numerator and denominator `P(T) = F(T,1)`, `Q(T) = G(T,1)`.
    pub fn dehomogenized(&self) -> (crate::poly::PolyQ, crate::poly::PolyQ) {
        (self.f.poly().clone(), self.g.poly().clone())
    }

    /// The map as a rational function of `z`.
    pub fn to_expression(&self) -> String {
        let num = format_terms(self.f.poly().coeffs(), "z");
        let den = format_terms(self.g.poly().coeffs(), "z");
        if den == "1" {
            num
        } else {
            format!("({num})/({den})")
        }
    }
}

impl fmt::Display for RationalMapModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expression())
    }
}

/// JSON view: degree, expression and both coefficient lists (highest first) as strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapSummary {
    pub degree: usize,
    pub expression: String,
    pub f: Vec<String>,
    pub g: Vec<String>,
}

impl From<&RationalMapModel> for MapSummary {
    fn from(m: &RationalMapModel) -> Self {
        MapSummary {
            degree: m.degree(),
            expression: m.to_expression(),
            f: m.f.high_coeffs().iter().map(rat_string).collect(),
            g: m.g.high_coeffs().iter().map(rat_string).collect(),
        }
    }
}

/// A p-primitive model: p-integral coefficients with minimum valuation exactly 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralModel {
    model: RationalMapModel,
    p: u64,
}

impl IntegralModel {
    pub fn model(&self) -> &RationalMapModel {
        &self.model
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

/// Scales jointly so that every coefficient is p-integral and some coefficient is a
/// p-adic unit. Non-p denominators are cleared by an integer prime to `p`.
pub fn normalize_integral(map: &RationalMapModel, p: u64) -> Result<IntegralModel> {
    check_prime(p)?;
    let coeffs = map.all_coeffs();
    let Valuation::Finite(v) = min_val(p, &coeffs) else {
        return Err(Error::input("map with all coefficients zero"));
    };
    let mut unit = denominator_lcm(&coeffs);
    let pb = BigInt::from(p);
    while unit.is_multiple_of(&pb) {
        unit /= &pb;
    }
    let scale = p_power(p, -v) * Rational::from_integer(unit);
    Ok(IntegralModel {
        model: map.scaled(&scale),
        p,
    })
}

/// The n-th iterate, composed homogeneously and reduced to integer content 1.
pub fn iterate(map: &RationalMapModel, n: usize, limits: &Limits) -> Result<RationalMapModel> {
    if n == 0 {
        return Err(Error::input("iterate count must be at least 1"));
    }
    let d = map.degree();
    let total = (d as u128)
        .checked_pow(n as u32)
        .filter(|&t| t <= limits.max_degree as u128);
    if total.is_none() {
        return Err(Error::resource(format!(
            "degree {d}^{n} exceeds the degree cap {}",
            limits.max_degree
        )));
    }
    let base = map.primitive();
    let mut current = base.clone();
    for _ in 1..n {
        let f = base.f.compose(&current.f, &current.g);
        let g = base.g.compose(&current.f, &current.g);
        current = RationalMapModel { f, g }.primitive();
    }
    Ok(current)
}

/// A point of P^1(Q) as coprime integers `[a:b]`, with `b > 0`, or `[1:0]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPointQ {
    a: BigInt,
    b: BigInt,
}

impl ProjPointQ {
    pub fn new(a: BigInt, b: BigInt) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::input("[0:0] is not a point"));
        }
        let g = a.gcd(&b);
        let (mut a, mut b) = (a / &g, b / &g);
        if b.is_negative() || (b.is_zero() && a.is_negative()) {
            a = -a;
            b = -b;
        }
        Ok(ProjPointQ { a, b })
    }

    pub fn from_rationals(x: &Rational, y: &Rational) -> Result<Self> {
        let l = x.denom().lcm(y.denom());
        let lr = Rational::from_integer(l);
        ProjPointQ::new((x * &lr).to_integer(), (y * &lr).to_integer())
    }

    pub fn affine(x: &Rational) -> Self {
        ProjPointQ::from_rationals(x, &rat(1)).expect("affine point")
    }

    pub fn from_int(x: i64) -> Self {
        ProjPointQ::affine(&rat(x))
    }

    pub fn infinity() -> Self {
        ProjPointQ {
            a: BigInt::one(),
            b: BigInt::zero(),
        }
    }

    /// Parses a rational number or `inf`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if matches!(t, "inf" | "infinity" | "oo") {
            return Ok(ProjPointQ::infinity());
        }
        Ok(ProjPointQ::affine(&crate::arith::parse_rational(t)?))
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_infinity(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        (!self.is_infinity()).then(|| Rational::new(self.a.clone(), self.b.clone()))
    }

    /// Affine and p-adically integral.
    pub fn is_integral(&self, p: u64) -> bool {
        !(&self.b % BigInt::from(p)).is_zero()
    }

    /// Reduction to P^1(F_p).
    pub fn reduce(&self, field: &Arc<FqField>) -> FqPoint {
        let p = field.p();
        if self.is_integral(p) {
            FqPoint::Affine(field.from_u64(reduce_mod_p(p, &self.as_rational().unwrap())))
        } else {
            FqPoint::Infinity
        }
    }

    /// Bit length of the larger coordinate.
    pub fn height_bits(&self) -> u64 {
        self.a.bits().max(self.b.bits())
    }
}

impl fmt::Display for ProjPointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "inf"),
        }
    }
}

impl Serialize for ProjPointQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `z -> (a z + b) / (c z + d)` with nonzero determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mobius {
    entries: [Rational; 4],
}

impl Mobius {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        let m = Mobius {
            entries: [a, b, c, d],
        };
        if m.det().is_zero() {
            return Err(Error::input("singular Moebius matrix"));
        }
        Ok(m)
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Mobius::new(rat(a), rat(b), rat(c), rat(d))
    }

    pub fn identity() -> Self {
        Mobius::from_ints(1, 0, 0, 1).unwrap()
    }

    /// `z -> 1/z`.
    pub fn inversion() -> Self {
        Mobius::from_ints(0, 1, 1, 0).unwrap()
    }

    pub fn entries(&self) -> &[Rational; 4] {
        &self.entries
    }

    pub fn det(&self) -> Rational {
        let [a, b, c, d] = &self.entries;
        a * d - b * c
    }

    /// The adjugate, which represents the inverse map.
    pub fn inverse(&self) -> Mobius {
        let [a, b, c, d] = self.entries.clone();
        Mobius {
            entries: [d, -b, -c, a],
        }
    }

    /// Matrix product `self * other`, i.e. the map `self o other`.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &other.entries;
        Mobius {
            entries: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
        }
    }

    pub fn apply(&self, x: &ProjPointQ) -> ProjPointQ {
        let [a, b, c, d] = &self.entries;
        let u = Rational::from_integer(x.a.clone());
        let v = Rational::from_integer(x.b.clone());
        ProjPointQ::from_rationals(&(a * &u + b * &v), &(c * &u + d * &v))
            .expect("invertible matrix maps points to points")
    }

    /// Degree-one map with this matrix.
    pub fn as_map(&self) -> RationalMapModel {
        let [a, b, c, d] = &self.entries;
        RationalMapModel::from_high_coeffs(&[a.clone(), b.clone()], &[c.clone(), d.clone()])
            .expect("nonzero determinant")
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

impl Serialize for Mobius {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter().map(rat_string))
    }
}

/// `M o phi o M^{-1}`, reduced to integer content 1.
pub fn conjugate(map: &RationalMapModel, m: &Mobius) -> Result<RationalMapModel> {
    if m.det().is_zero() {
        return Err(Error::input("singular Moebius matrix"));
    }
    let [a, b, c, d] = m.entries();
    // M^{-1}[X:Y] = [dX - bY : -cX + aY]
    let x = QForm::x();
    let y = QForm::y();
    let xi = x.scale(d).sub(&y.scale(b));
    let yi = y.scale(a).sub(&x.scale(c));
    let u = map.f.compose(&xi, &yi);
    let v = map.g.compose(&xi, &yi);
    let f = u.scale(a).add(&v.scale(b));
    let g = u.scale(c).add(&v.scale(d));
    Ok(RationalMapModel { f, g }.primitive())
}

/// Reduction of a p-primitive model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedMap {
    field: Arc<FqField>,
    formal_degree: usize,
    raw_f: FqForm,
    raw_g: FqForm,
    common: FqForm,
    f: FqForm,
    g: FqForm,
}

impl ReducedMap {
    /// Builds the reduction from forms over F_p (the model's coefficients mod p).
    pub fn from_forms(raw_f: FqForm, raw_g: FqForm) -> Self {
        assert!(
            !(raw_f.is_zero() && raw_g.is_zero()),
            "both reduced forms vanish"
        );
        let field = raw_f.field().clone();
        let formal_degree = raw_f.degree();
        let common = raw_f.gcd(&raw_g);
        let f = raw_f.div_exact(&common);
        let g = raw_g.div_exact(&common);
        ReducedMap {
            field,
            formal_degree,
            raw_f,
            raw_g,
            common,
            f,
            g,
        }
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn formal_degree(&self) -> usize {
        self.formal_degree
    }

    /// Degree of the coprime reduced map.
    pub fn reduced_degree(&self) -> usize {
        self.f.degree()
    }

    /// Reductions of the model's forms, before removing the common factor.
    pub fn raw_forms(&self) -> (&FqForm, &FqForm) {
        (&self.raw_f, &self.raw_g)
    }

    pub fn common(&self) -> &FqForm {
        &self.common
    }

    /// The coprime pair defining the reduced map.
    pub fn forms(&self) -> (&FqForm, &FqForm) {
        (&self.f, &self.g)
    }

    pub fn eval(&self, x: &FqPoint) -> FqPoint {
        eval_forms(&self.f, &self.g, x)
    }

    /// The coprime reduced pair iterated `n` times (forms of degree `e^n`).
    pub fn iterate_forms(&self, n: usize) -> (FqForm, FqForm) {
        let (mut f, mut g) = (self.f.clone(), self.g.clone());
        for _ in 1..n {
            let nf = self.f.compose(&f, &g);
            let ng = self.g.compose(&f, &g);
            f = nf;
            g = ng;
        }
        (f, g)
    }

    pub fn expression(&self) -> String {
        let num = self.f.poly().to_string().replace('T', "z");
        let den = self.g.poly().to_string().replace('T', "z");
        if den == "1" {
            num
        } else {
            format!("({num})/({den})")
        }
    }
}

/// `[F(x) : G(x)]` over a finite field; the forms must be coprime.
pub fn eval_forms(f: &FqForm, g: &FqForm, x: &FqPoint) -> FqPoint {
    let field = f.field();
    let u = f.eval(x);
    let v = g.eval(x);
    if field.is_zero(&v) {
        assert!(!field.is_zero(&u), "coprime forms vanish together");
        FqPoint::Infinity
    } else {
        FqPoint::Affine(field.div(&u, &v))
    }
}

/// Reduces a p-primitive model modulo p and splits off the common factor.
pub fn reduce_map(model: &IntegralModel) -> Result<ReducedMap> {
    let field = FqField::prime(model.p)?;
    let red = |form: &QForm| {
        let coeffs: Vec<Fq> = form
            .low_coeffs()
            .iter()
            .map(|c| field.from_u64(reduce_mod_p(model.p, c)))
            .collect();
        FqForm::new(form.degree(), FqPoly::new(&field, coeffs))
    };
    Ok(ReducedMap::from_forms(
        red(&model.model.f),
        red(&model.model.g),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_frac;

    fn z2_plus(c: i64) -> RationalMapModel {
        RationalMapModel::from_int_coeffs(&[1, 0, c], &[0, 0, 1]).unwrap()
    }

    #[test]
    fn rejects_common_root() {
        assert!(RationalMapModel::from_int_coeffs(&[1, 0, -1], &[1, 0, -1]).is_err());
        assert!(RationalMapModel::from_int_coeffs(&[0, 1], &[0, 0]).is_err());
        assert!(RationalMapModel::from_int_coeffs(&[1], &[1]).is_err());
    }

    #[test]
    fn normalize_examples() {
        let m = z2_plus(5);
        assert_eq!(normalize_integral(&m, 5).unwrap().model(), &m);

        let m = RationalMapModel::from_int_coeffs(&[5, 0, 0], &[0, 0, 5]).unwrap();
        let n = normalize_integral(&m, 5).unwrap();
        assert_eq!(
            n.model(),
            &RationalMapModel::from_int_coeffs(&[1, 0, 0], &[0, 0, 1]).unwrap()
        );

        let m = RationalMapModel::from_high_coeffs(
            &[rat_frac(1, 5), rat(0), rat(0)],
            &[rat(0), rat(0), rat(1)],
        )
        .unwrap();
        let n = normalize_integral(&m, 5).unwrap();
        assert_eq!(
            n.model(),
            &RationalMapModel::from_int_coeffs(&[1, 0, 0], &[0, 0, 5]).unwrap()
        );

        // a non-p denominator is cleared with a unit at p
        let m = RationalMapModel::from_high_coeffs(
            &[rat_frac(1, 3), rat(0), rat(0)],
            &[rat(0), rat(0), rat(1)],
        )
        .unwrap();
        let n = normalize_integral(&m, 5).unwrap();
        assert_eq!(
            n.model(),
            &RationalMapModel::from_int_coeffs(&[1, 0, 0], &[0, 0, 3]).unwrap()
        );
        assert_eq!(normalize_integral(n.model(), 5).unwrap(), n);
    }

    #[test]
    fn iterate_examples() {
        let l = Limits::default();
        let z2 = z2_plus(0);
        let z4 = iterate(&z2, 2, &l).unwrap();
        assert_eq!(
            z4,
            RationalMapModel::from_int_coeffs(&[1, 0, 0, 0, 0], &[0, 0, 0, 0, 1]).unwrap()
        );

        let m = iterate(&z2_plus(5), 2, &l).unwrap();
        let (p2, q2) = m.dehomogenized();
        assert_eq!(p2, crate::poly::PolyQ::from_ints(&[30, 0, 10, 0, 1]));
        assert_eq!(q2, crate::poly::PolyQ::from_ints(&[1]));

        let m3 = iterate(&z2_plus(7), 3, &l).unwrap();
        assert_eq!(
            crate::arith::vp(7, &m3.resultant()).unwrap(),
            Valuation::Finite(0)
        );

        let tight = Limits {
            max_degree: 8,
            ..Limits::default()
        };
        assert!(matches!(iterate(&z2, 4, &tight), Err(Error::Resource(_))));
        assert!(iterate(&z2, 3, &tight).is_ok());
    }

    #[test]
    fn conjugate_examples() {
        let p = 5;
        let phi = z2_plus(p);
        let psi = conjugate(&phi, &Mobius::inversion()).unwrap();
        assert_eq!(
            psi,
            RationalMapModel::from_int_coeffs(&[1, 0, 0], &[p, 0, 1]).unwrap()
        );

        assert!(conjugate(&phi, &Mobius::identity()).unwrap().same_map(&phi));

        let bad = RationalMapModel::from_int_coeffs(&[p, 1, 0], &[0, 0, 1]).unwrap();
        let m = Mobius::from_ints(p, 0, 0, 1).unwrap();
        let good = conjugate(&bad, &m).unwrap();
        assert_eq!(
            good,
            RationalMapModel::from_int_coeffs(&[1, 1, 0], &[0, 0, 1]).unwrap()
        );
    }

    #[test]
    fn reduce_examples() {
        let red = reduce_map(&normalize_integral(&z2_plus(5), 5).unwrap()).unwrap();
        assert_eq!(red.reduced_degree(), 2);
        assert_eq!(red.expression(), "T^2".replace('T', "z"));

        let bad = RationalMapModel::from_int_coeffs(&[5, 1, 0], &[0, 0, 1]).unwrap();
        let red = reduce_map(&normalize_integral(&bad, 5).unwrap()).unwrap();
        assert_eq!(red.reduced_degree(), 1);
        assert_eq!(red.expression(), "z");

        let red = reduce_map(&normalize_integral(&z2_plus(-1), 7).unwrap()).unwrap();
        assert_eq!(red.reduced_degree(), 2);
        assert_eq!(red.expression(), "z^2 + 6");
    }

    #[test]
    fn eval_examples() {
        let phi = z2_plus(5);
        assert_eq!(phi.eval(&ProjPointQ::from_int(1)), ProjPointQ::from_int(6));
        assert_eq!(phi.eval(&ProjPointQ::infinity()), ProjPointQ::infinity());
        let psi = RationalMapModel::from_int_coeffs(&[1, 0, 0], &[5, 0, 1]).unwrap();
        assert_eq!(psi.eval(&ProjPointQ::from_int(0)), ProjPointQ::from_int(0));

        let red = reduce_map(&normalize_integral(&psi, 5).unwrap()).unwrap();
        let f5 = red.field().clone();
        assert_eq!(
            red.eval(&FqPoint::Affine(f5.from_u64(3))),
            FqPoint::Affine(f5.from_u64(4))
        );
        assert_eq!(red.eval(&FqPoint::Infinity), FqPoint::Infinity);
    }

    #[test]
    fn points_are_canonical() {
        let x = ProjPointQ::new(BigInt::from(-2), BigInt::from(-4)).unwrap();
        assert_eq!(x.to_string(), "1/2");
        assert_eq!(
            ProjPointQ::new(BigInt::from(-3), BigInt::zero()).unwrap(),
            ProjPointQ::infinity()
        );
        assert_eq!(ProjPointQ::parse("inf").unwrap(), ProjPointQ::infinity());
        assert!(ProjPointQ::parse("1/5").unwrap().is_integral(3));
        assert!(!ProjPointQ::parse("1/5").unwrap().is_integral(5));
    }

    #[test]
    fn mobius_inverse() {
        let m = Mobius::from_ints(2, 1, 1, 1).unwrap();
        let x = ProjPointQ::from_int(3);
        assert_eq!(m.inverse().apply(&m.apply(&x)), x);
        assert!(Mobius::from_ints(1, 2, 2, 4).is_err());
    }
}

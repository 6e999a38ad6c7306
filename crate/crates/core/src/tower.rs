//! Preimage towers: fiber polynomials, unramifiedness certificates, Newton polygons and
//! Frobenius data on reduced preimage trees.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::arith::{min_val, p_power, rat_string, reduce_mod_p, val, Rational, Valuation};
use crate::error::{Error, Result};
use crate::form::{FqForm, FqPoint, QForm};
use crate::fq::{smallest_irreducible, FqField};
use crate::fq_poly::{factor_degrees, FqPoly};
use crate::limits::Limits;
use crate::map::{iterate, ProjPointQ, RationalMapModel, ReducedMap};
use crate::poly::{discriminant, form_discriminant, PolyQ};
use crate::reduction::reduction;

/// The level-n fiber form `b P_n - a Q_n` over `x = [a:b]`, scaled p-primitively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberPolynomial {
    pub n: usize,
    pub x: ProjPointQ,
    pub p: u64,
    pub form: QForm,
}

impl FiberPolynomial {
    /// Formal degree `d^n`.
    pub fn degree(&self) -> usize {
        self.form.degree()
    }

    /// `F_{n,x}(T)`.
    pub fn dehomogenized(&self) -> &PolyQ {
        self.form.poly()
    }

    pub fn infinity_multiplicity(&self) -> usize {
        self.form.infinity_multiplicity().unwrap_or(0)
    }

    /// `x` is affine and p-integral.
    pub fn integral(&self) -> bool {
        self.x.is_integral(self.p)
    }
}

pub fn fiber_polynomial(
    map: &RationalMapModel,
    n: usize,
    x: &ProjPointQ,
    p: u64,
    limits: &Limits,
) -> Result<FiberPolynomial> {
    crate::arith::check_prime(p)?;
    let it = iterate(map, n, limits)?;
    let a = Rational::from_integer(x.a().clone());
    let b = Rational::from_integer(x.b().clone());
    let form = it.f().scale(&b).sub(&it.g().scale(&a));
    let form = match min_val(p, &form.low_coeffs()) {
        Valuation::Finite(v) => form.scale(&p_power(p, -v)),
        Valuation::Infinite => return Err(Error::internal("fiber form vanishes identically")),
    };
    Ok(FiberPolynomial {
        n,
        x: x.clone(),
        p,
        form,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Certificate {
    Unramified,
    NoCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonSegment {
    pub slope: String,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub n: usize,
    pub x: ProjPointQ,
    pub fiber: String,
    pub degree: usize,
    pub infinity_multiplicity: usize,
    /// Discriminant of the dehomogenized polynomial (`null` when it is constant).
    pub discriminant: Option<String>,
    pub lc_valuation: Valuation,
    /// Valuation of the discriminant of the homogeneous fiber form.
    pub disc_valuation: Valuation,
    pub degree_full: bool,
    pub certificate: Certificate,
    pub reduced_factor_degrees: Option<Vec<usize>>,
    pub outside_integral_locus: bool,
    pub newton_polygon: Option<Vec<NewtonSegment>>,
}

pub fn fiber_report(fiber: &FiberPolynomial, seed: u64) -> Result<FiberReport> {
    let p = fiber.p;
    let f = fiber.dehomogenized();
    let Some(lc) = f.leading() else {
        return Err(Error::input("zero fiber polynomial"));
    };
    let lc_valuation = val(p, lc);
    let affine_disc = match f.degree() {
        Some(k) if k >= 1 => Some(discriminant(f)?),
        _ => None,
    };
    let hom_disc = match (fiber.infinity_multiplicity(), &affine_disc) {
        (0, Some(d)) => d.clone(),
        (1, Some(d)) => lc * lc * d,
        _ => form_discriminant(f, fiber.degree())?,
    };
    let disc_valuation = val(p, &hom_disc);
    let discriminant = affine_disc.as_ref().map(rat_string);
    let unit = Valuation::Finite(0);
    let certificate = if lc_valuation == unit && disc_valuation == unit {
        Certificate::Unramified
    } else {
        Certificate::NoCertificate
    };
    let reduced_factor_degrees = match certificate {
        Certificate::Unramified => {
            let field = FqField::prime(p)?;
            let red = reduce_form(&fiber.form, &field);
            let mut degs = if red.poly().is_constant() {
                Vec::new()
            } else {
                factor_degrees(red.poly(), seed)?
            };
            degs.extend(std::iter::repeat_n(1, fiber.infinity_multiplicity()));
            degs.sort_unstable();
            Some(degs)
        }
        Certificate::NoCertificate => None,
    };
    let newton_polygon = match (certificate, f.degree()) {
        (Certificate::NoCertificate, Some(k)) if k >= 1 => Some(newton_polygon(f, p)?),
        _ => None,
    };
    Ok(FiberReport {
        n: fiber.n,
        x: fiber.x.clone(),
        fiber: crate::poly::format_terms(f.coeffs(), "T"),
        degree: fiber.degree(),
        infinity_multiplicity: fiber.infinity_multiplicity(),
        discriminant,
        lc_valuation,
        disc_valuation,
        degree_full: fiber.infinity_multiplicity() == 0,
        certificate,
        reduced_factor_degrees,
        outside_integral_locus: !fiber.integral(),
        newton_polygon,
    })
}

fn reduce_form(form: &QForm, field: &Arc<FqField>) -> FqForm {
    let p = field.p();
    let coeffs = form
        .low_coeffs()
        .iter()
        .map(|c| field.from_u64(reduce_mod_p(p, c)))
        .collect();
    FqForm::new(form.degree(), FqPoly::new(field, coeffs))
}

/// Lower convex hull of `(i, v_p(c_i))`, as (slope, horizontal length) with slopes
/// increasing. Starts at the lowest nonzero coefficient.
pub fn newton_polygon(f: &PolyQ, p: u64) -> Result<Vec<NewtonSegment>> {
    crate::arith::check_prime(p)?;
    if f.degree().unwrap_or(0) == 0 {
        return Err(Error::input(
            "Newton polygon needs a polynomial of degree at least 1",
        ));
    }
    let pts: Vec<(i64, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| val(p, c).finite().map(|v| (i as i64, v)))
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt.0 - x1) >= (pt.1 - y1) * (x2 - x1) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    Ok(hull
        .windows(2)
        .map(|w| {
            let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            NewtonSegment {
                slope: rat_string(&Rational::new(BigInt::from(dy), BigInt::from(dx))),
                length: dx as usize,
            }
        })
        .collect())
}

fn full_degree_reduction(map: &RationalMapModel, p: u64) -> Result<ReducedMap> {
    let red = reduction(map, p)?;
    if red.reduced_degree() != map.degree() {
        return Err(Error::precondition(format!(
            "reduction has degree {} < {}; reduced fibers are degree-deficient",
            red.reduced_degree(),
            map.degree()
        )));
    }
    Ok(red)
}

/// Reduced level-n fiber form over `x` for the reduced map, in `x`'s field.
fn reduced_fiber(red: &ReducedMap, n: usize, field: &Arc<FqField>, x: &FqPoint) -> FqForm {
    let (f, g) = red.iterate_forms(n);
    FqForm::fiber(&f.embed(field), &g.embed(field), x)
}

/// Irreducible factor degrees of the reduced level-n fiber over an F_p-point, with a
/// 1-cycle for each root at infinity.
pub fn frobenius_cycle_type(
    map: &RationalMapModel,
    n: usize,
    x: &FqPoint,
    p: u64,
    limits: &Limits,
) -> Result<Vec<usize>> {
    let red = full_degree_reduction(map, p)?;
    check_iterate_degree(red.reduced_degree(), n, limits)?;
    let fiber = reduced_fiber(&red, n, red.field(), x);
    if !fiber.is_squarefree() {
        return Err(Error::precondition(format!(
            "reduced level-{n} fiber over {} is inseparable; the point lies in PC",
            x.format(red.field())
        )));
    }
    let mut degs = if fiber.poly().is_constant() {
        Vec::new()
    } else {
        factor_degrees(fiber.poly(), limits.seed)?
    };
    degs.extend(std::iter::repeat_n(
        1,
        fiber.infinity_multiplicity().unwrap_or(0),
    ));
    degs.sort_unstable();
    Ok(degs)
}

pub(crate) fn check_iterate_degree(e: usize, n: usize, limits: &Limits) -> Result<()> {
    match (e as u128).checked_pow(n as u32) {
        Some(t) if t <= limits.max_degree as u128 => Ok(()),
        _ => Err(Error::resource(format!(
            "degree {e}^{n} exceeds the degree cap {}",
            limits.max_degree
        ))),
    }
}

/// Roots of the reduced fibers over `x` up to depth N, in a common field F_{p^m}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreimageTree {
    pub field: Arc<FqField>,
    /// `levels[0] = [x]`; `levels[n]` are the roots of the level-n fiber, sorted, with
    /// infinity last.
    pub levels: Vec<Vec<FqPoint>>,
    /// `parents[n][i]` indexes the image of `levels[n][i]` in `levels[n - 1]`
    /// (`parents[0]` is empty).
    pub parents: Vec<Vec<usize>>,
    /// `frobenius[n][i]` indexes `levels[n][i]^p` in `levels[n]`.
    pub frobenius: Vec<Vec<usize>>,
}

impl PreimageTree {
    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn cycle_type(&self, n: usize) -> Vec<usize> {
        cycle_type(&self.frobenius[n])
    }

    /// `parent(frob(r)) == frob(parent(r))` for every root.
    pub fn frobenius_commutes(&self) -> bool {
        (1..self.levels.len()).all(|n| {
            (0..self.levels[n].len()).all(|i| {
                self.parents[n][self.frobenius[n][i]] == self.frobenius[n - 1][self.parents[n][i]]
            })
        })
    }
}

impl Serialize for PreimageTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let levels: Vec<Vec<String>> = self
            .levels
            .iter()
            .map(|l| l.iter().map(|x| x.format(&self.field)).collect())
            .collect();
        let cycles: Vec<Vec<usize>> = (0..self.levels.len()).map(|n| self.cycle_type(n)).collect();
        let mut st = s.serialize_struct("PreimageTree", 6)?;
        st.serialize_field("field", &*self.field)?;
        st.serialize_field("levels", &levels)?;
        st.serialize_field("parents", &self.parents)?;
        st.serialize_field("frobenius", &self.frobenius)?;
        st.serialize_field("cycle_types", &cycles)?;
        st.serialize_field("frobenius_commutes", &self.frobenius_commutes())?;
        st.end()
    }
}

/// Cycle lengths of a permutation, sorted.
pub fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable();
    out
}

fn index_of(level: &[FqPoint], x: &FqPoint) -> Result<usize> {
    level
        .iter()
        .position(|y| y == x)
        .ok_or_else(|| Error::internal("tree node image is missing from the level below"))
}

pub fn preimage_tree(
    map: &RationalMapModel,
    depth: usize,
    x: &FqPoint,
    p: u64,
    limits: &Limits,
) -> Result<PreimageTree> {
    let red = reduction(map, p)?;
    check_iterate_degree(red.reduced_degree(), depth, limits)?;
    let base = red.field().clone();
    let mut m = 1usize;
    let mut fibers = Vec::new();
    for n in 1..=depth {
        let fiber = reduced_fiber(&red, n, &base, x);
        if !fiber.is_squarefree() {
            return Err(Error::precondition(format!(
                "reduced level-{n} fiber over {} is inseparable; the point lies in PC",
                x.format(&base)
            )));
        }
        if !fiber.poly().is_constant() {
            for k in factor_degrees(fiber.poly(), limits.seed)? {
                m = m.lcm(&k);
            }
        }
        if m > limits.max_split_degree {
            return Err(Error::resource(format!(
                "splitting field degree {m} exceeds the cap {}",
                limits.max_split_degree
            )));
        }
        fibers.push(fiber);
    }
    let field = smallest_irreducible(p, m)?;
    let embed_point = |pt: &FqPoint| match pt {
        FqPoint::Affine(a) => FqPoint::Affine(field.from_u64(a.as_prime().expect("F_p point"))),
        FqPoint::Infinity => FqPoint::Infinity,
    };
    let (f, g) = red.forms();
    let (f, g) = (f.embed(&field), g.embed(&field));

    let mut levels = vec![vec![embed_point(x)]];
    let mut parents = vec![Vec::new()];
    for fiber in &fibers {
        let lifted = fiber.embed(&field);
        let mut level: Vec<FqPoint> = lifted
            .poly()
            .roots(limits.seed)
            .into_iter()
            .map(FqPoint::Affine)
            .collect();
        if lifted.infinity_multiplicity().unwrap_or(0) > 0 {
            level.push(FqPoint::Infinity);
        }
        let below = levels.last().unwrap();
        let par = level
            .iter()
            .map(|r| index_of(below, &crate::map::eval_forms(&f, &g, r)))
            .collect::<Result<Vec<_>>>()?;
        parents.push(par);
        levels.push(level);
    }
    let frobenius = levels
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|r| match r {
                    FqPoint::Affine(a) => index_of(level, &FqPoint::Affine(field.frobenius(a))),
                    FqPoint::Infinity => index_of(level, r),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PreimageTree {
        field,
        levels,
        parents,
        frobenius,
    })
}

/// Does the level-n fiber over `x` divide the level-(n+1) fiber over `phi(x)`?
pub fn shift_divisibility_check(
    map: &RationalMapModel,
    n: usize,
    x: &ProjPointQ,
    limits: &Limits,
) -> Result<bool> {
    let y = map.eval(x);
    if x.is_infinity() || y.is_infinity() {
        return Err(Error::input("shift check needs x and phi(x) affine"));
    }
    let fx = fiber_polynomial(map, n, x, 2, limits)?;
    let fy = fiber_polynomial(map, n + 1, &y, 2, limits)?;
    let f = fx.dehomogenized();
    if f.degree().unwrap_or(0) >= 1 && f.gcd(&f.derivative()).degree().unwrap_or(0) > 0 {
        return Err(Error::precondition(format!("F_{{{n},{x}}} is inseparable")));
    }
    Ok(f.gcd(fy.dehomogenized()).degree() == f.degree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::parse::parse_map;

    fn quadratic_disc(p: u64, x: &BigInt) -> Rational {
        Rational::from_integer(-(BigInt::from(p) - x) * 4)
    }

    fn map(s: &str, p: u64) -> RationalMapModel {
        parse_map(s, Some(p)).unwrap()
    }

    fn fiber(s: &str, p: u64, n: usize, x: &str) -> FiberPolynomial {
        fiber_polynomial(
            &map(s, p),
            n,
            &ProjPointQ::parse(x).unwrap(),
            p,
            &Limits::default(),
        )
        .unwrap()
    }

    #[test]
    fn fiber_examples() {
        let f = fiber("z^2+p", 5, 1, "1");
        assert_eq!(f.dehomogenized(), &PolyQ::from_ints(&[4, 0, 1]));
        let f = fiber("z^2+p", 5, 1, "inf");
        assert_eq!(f.infinity_multiplicity(), 2);
        assert!(f.dehomogenized().coeffs().len() == 1);
        let f = fiber("z^2", 5, 2, "1");
        assert_eq!(f.dehomogenized(), &PolyQ::from_ints(&[-1, 0, 0, 0, 1]));
    }

    #[test]
    fn report_examples() {
        let r = fiber_report(&fiber("z^2+p", 5, 1, "1"), 0).unwrap();
        assert_eq!(r.discriminant.as_deref(), Some("-16"));
        assert_eq!(r.disc_valuation, Valuation::Finite(0));
        assert_eq!(r.certificate, Certificate::Unramified);
        assert_eq!(r.reduced_factor_degrees, Some(vec![1, 1]));

        let r = fiber_report(&fiber("z^2+p", 5, 1, "5"), 0).unwrap();
        assert_eq!(r.discriminant.as_deref(), Some("0"));
        assert_eq!(r.certificate, Certificate::NoCertificate);

        let r = fiber_report(&fiber("z^2+p", 5, 1, "1/5"), 0).unwrap();
        assert!(r.lc_valuation > Valuation::Finite(0));
        assert!(r.outside_integral_locus);
        assert_eq!(r.certificate, Certificate::NoCertificate);
        assert!(r.newton_polygon.is_some());

        let r = fiber_report(&fiber("z^2+p", 5, 1, "inf"), 0).unwrap();
        assert_eq!(r.certificate, Certificate::NoCertificate);
        assert_eq!(r.disc_valuation, Valuation::Infinite);
    }

    #[test]
    fn quadratic_discriminants() {
        for p in [3u64, 5, 7] {
            for x in 1..=3i64 {
                let r = fiber_report(&fiber("z^2+p", p, 1, &x.to_string()), 0).unwrap();
                assert_eq!(
                    r.discriminant.unwrap(),
                    rat_string(&quadratic_disc(p, &BigInt::from(x)))
                );
            }
        }
    }

    #[test]
    fn newton_examples() {
        let seg = |s: &str, l| NewtonSegment {
            slope: s.to_string(),
            length: l,
        };
        assert_eq!(
            newton_polygon(&PolyQ::from_ints(&[-5, 0, 1]), 5).unwrap(),
            vec![seg("-1/2", 2)]
        );
        assert_eq!(
            newton_polygon(&PolyQ::from_ints(&[-1, 0, 1]), 5).unwrap(),
            vec![seg("0", 2)]
        );
        assert_eq!(
            newton_polygon(&PolyQ::from_ints(&[1, 1, 5]), 5).unwrap(),
            vec![seg("0", 1), seg("1", 1)]
        );
        // vanishing at 0 shortens the polygon
        assert_eq!(
            newton_polygon(&PolyQ::from_ints(&[0, 25, 0, 1]), 5).unwrap(),
            vec![seg("-1", 2)]
        );
        assert!(newton_polygon(&PolyQ::constant(rat(3)), 5).is_err());
    }

    #[test]
    fn cycle_type_examples() {
        let l = Limits::default();
        let f5 = FqField::prime(5).unwrap();
        let at = |a| FqPoint::Affine(f5.from_u64(a));
        let z2 = map("z^2", 5);
        assert_eq!(
            frobenius_cycle_type(&z2, 1, &at(4), 5, &l).unwrap(),
            vec![1, 1]
        );
        assert_eq!(
            frobenius_cycle_type(&z2, 1, &at(2), 5, &l).unwrap(),
            vec![2]
        );
        // 1, 2, 3, 4 are the fourth roots of unity in F_5
        assert_eq!(
            frobenius_cycle_type(&z2, 2, &at(1), 5, &l).unwrap(),
            vec![1, 1, 1, 1]
        );
        assert!(matches!(
            frobenius_cycle_type(&z2, 1, &at(0), 5, &l),
            Err(Error::Precondition(_))
        ));
        let bad = map("p*z^2+z", 5);
        assert!(matches!(
            frobenius_cycle_type(&bad, 1, &at(1), 5, &l),
            Err(Error::Precondition(_))
        ));
        // a simple root at infinity is a fixed point of Frobenius
        let m = map("z^2/(z+1)", 5);
        assert_eq!(
            frobenius_cycle_type(&m, 1, &FqPoint::Infinity, 5, &l).unwrap(),
            vec![1, 1]
        );
        // a double one is not separable
        let m = map("1/z^2+1", 5);
        assert!(matches!(
            frobenius_cycle_type(&m, 1, &at(1), 5, &l),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn tree_examples() {
        let l = Limits::default();
        let f5 = FqField::prime(5).unwrap();
        let at = |a| FqPoint::Affine(f5.from_u64(a));
        let t = preimage_tree(&map("z^2", 5), 2, &at(1), 5, &l).unwrap();
        assert_eq!(t.level_sizes(), vec![1, 2, 4]);
        assert_eq!(t.cycle_type(2), vec![1, 1, 1, 1]);
        assert!(t.frobenius_commutes());

        let t = preimage_tree(&map("p*z^2+z", 5), 3, &at(2), 5, &l).unwrap();
        assert_eq!(t.level_sizes(), vec![1, 1, 1, 1]);

        let t = preimage_tree(&map("z^2+p", 5), 1, &at(2), 5, &l).unwrap();
        assert_eq!(t.level_sizes(), vec![1, 2]);
        assert_eq!(t.field.degree(), 2);
        assert_eq!(t.frobenius[1], vec![1, 0]);

        let tight = Limits {
            max_split_degree: 1,
            ..l
        };
        assert!(matches!(
            preimage_tree(&map("z^2", 5), 1, &at(2), 5, &tight),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn shift_examples() {
        let l = Limits::default();
        let x = |s| ProjPointQ::parse(s).unwrap();
        assert!(shift_divisibility_check(&map("z^2+p", 5), 1, &x("1"), &l).unwrap());
        assert!(shift_divisibility_check(&map("z^2", 5), 1, &x("2"), &l).unwrap());
        assert!(shift_divisibility_check(&map("z^2-1", 5), 1, &x("0"), &l).unwrap());
        assert!(matches!(
            shift_divisibility_check(&map("z^2", 5), 1, &x("0"), &l),
            Err(Error::Precondition(_))
        ));
    }
}

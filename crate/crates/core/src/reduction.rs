//! Strict good reduction, critical and postcritical data of the reduced map, and the
//! fiberwise criterion on the residual locus.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{vp, Valuation};
use crate::error::{Error, Result};
use crate::form::{FqForm, FqPoint};
use crate::fq::{count_irreducibles, fq_extension, Fq, FqField};
use crate::fq_poly::{fq_factor_seeded, FqPoly};
use crate::limits::Limits;
use crate::map::{normalize_integral, reduce_map, RationalMapModel, ReducedMap};

/// A Galois orbit of points of P^1 over the algebraic closure of F_p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClosedPoint {
    /// Monic irreducible minimal polynomial over F_p, lowest coefficient first.
    Affine(Vec<u64>),
    Infinity,
}

impl ClosedPoint {
    /// The rational point `t = a`.
    pub fn rational(p: u64, a: u64) -> Self {
        ClosedPoint::Affine(vec![(p - a % p) % p, 1])
    }

    /// The closed point below a point defined over some F_{p^k}.
    pub fn of_point(field: &Arc<FqField>, x: &FqPoint) -> Self {
        match x {
            FqPoint::Infinity => ClosedPoint::Infinity,
            FqPoint::Affine(a) => ClosedPoint::Affine(min_poly(field, a)),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            ClosedPoint::Infinity => 1,
            ClosedPoint::Affine(m) => m.len() - 1,
        }
    }

    /// The residue `a` of a rational affine point `t = a`.
    pub fn residue(&self, p: u64) -> Option<u64> {
        match self {
            ClosedPoint::Affine(m) if m.len() == 2 => Some((p - m[0]) % p),
            _ => None,
        }
    }

    /// `inf`, a residue such as `6`, or a minimal polynomial in `t`.
    pub fn label(&self, p: u64) -> String {
        match self {
            ClosedPoint::Infinity => "inf".to_string(),
            ClosedPoint::Affine(m) if m.len() == 2 => ((p - m[0]) % p).to_string(),
            ClosedPoint::Affine(m) => {
                let field = FqField::prime(p).expect("prime");
                FqPoly::from_u64s(&field, m).to_string().replace('T', "t")
            }
        }
    }

    fn sort_key(&self) -> (u8, usize, Vec<u64>) {
        match self {
            ClosedPoint::Infinity => (1, 1, Vec::new()),
            // residue p - m[0] grows as m[0] shrinks
            ClosedPoint::Affine(m) if m.len() == 2 => {
                (0, 1, vec![if m[0] == 0 { 0 } else { u64::MAX - m[0] }])
            }
            ClosedPoint::Affine(m) => (0, m.len() - 1, m.iter().rev().copied().collect()),
        }
    }
}

impl Ord for ClosedPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for ClosedPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimal polynomial over F_p of an element of F_{p^k}.
pub fn min_poly(field: &Arc<FqField>, a: &Fq) -> Vec<u64> {
    let mut conjugates = vec![a.clone()];
    let mut c = field.frobenius(a);
    while &c != a {
        conjugates.push(c.clone());
        c = field.frobenius(&c);
    }
    let mut prod = FqPoly::one(field);
    for c in &conjugates {
        prod = prod.mul(&FqPoly::linear(field, c));
    }
    prod.coeffs()
        .iter()
        .map(|c| c.as_prime().expect("conjugate-invariant coefficients"))
        .collect()
}

/// Strict good reduction data of the p-primitive model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SgrReport {
    pub p: u64,
    pub degree: usize,
    pub res_valuation: Valuation,
    pub reduced_degree: usize,
    /// The reduced map as an expression in `z` over F_p.
    pub reduced_map: String,
    pub is_strict_good_reduction: bool,
    pub inseparable_reduction: bool,
}

/// Reduces the p-primitive model.
pub fn reduction(map: &RationalMapModel, p: u64) -> Result<ReducedMap> {
    reduce_map(&normalize_integral(map, p)?)
}

pub fn strict_good_reduction(map: &RationalMapModel, p: u64) -> Result<SgrReport> {
    let model = normalize_integral(map, p)?;
    let res_valuation = vp(p, &model.model().resultant())?;
    let red = reduce_map(&model)?;
    let d = map.degree();
    let sgr = res_valuation == Valuation::Finite(0);
    if sgr != (red.reduced_degree() == d) {
        return Err(Error::internal(format!(
            "resultant valuation {res_valuation} disagrees with reduced degree {}",
            red.reduced_degree()
        )));
    }
    Ok(SgrReport {
        p,
        degree: d,
        res_valuation,
        reduced_degree: red.reduced_degree(),
        reduced_map: red.expression(),
        is_strict_good_reduction: sgr,
        inseparable_reduction: red.reduced_degree() >= 1 && critical_divisor(&red).is_zero(),
    })
}

/// The Wronskian `F_X G_Y - F_Y G_X` of the coprime reduced pair, of degree `2e - 2`.
pub fn critical_divisor(red: &ReducedMap) -> FqForm {
    let (f, g) = red.forms();
    wronskian(f, g)
}

pub(crate) fn wronskian(f: &FqForm, g: &FqForm) -> FqForm {
    f.partial_x()
        .mul(&g.partial_y())
        .sub(&f.partial_y().mul(&g.partial_x()))
}

/// Closed points cut out by a nonzero form over F_p, with multiplicities.
pub fn closed_points_of_form(form: &FqForm) -> Result<Vec<(ClosedPoint, usize)>> {
    if form.is_zero() {
        return Err(Error::input("the zero form has no point set"));
    }
    let mut out = Vec::new();
    if !form.poly().is_constant() {
        for (factor, mult) in fq_factor_seeded(form.poly(), 0)? {
            let m = factor
                .prime_coeffs()
                .ok_or_else(|| Error::input("form must be over F_p"))?;
            out.push((ClosedPoint::Affine(m), mult));
        }
    }
    match form.infinity_multiplicity() {
        Some(k) if k > 0 => out.push((ClosedPoint::Infinity, k)),
        _ => {}
    }
    out.sort();
    Ok(out)
}

/// The image of a closed point under the reduced map.
pub fn pushforward(point: &ClosedPoint, red: &ReducedMap) -> Result<ClosedPoint> {
    let p = red.p();
    match point {
        ClosedPoint::Infinity => Ok(ClosedPoint::of_point(
            red.field(),
            &red.eval(&FqPoint::Infinity),
        )),
        ClosedPoint::Affine(m) => {
            let (field, alpha) = if m.len() == 2 {
                let f = red.field().clone();
                let a = f.from_u64((p - m[0]) % p);
                (f, a)
            } else {
                let f = FqField::from_monic(p, m.clone())?;
                let a = f.generator();
                (f, a)
            };
            let (f, g) = red.forms();
            let image =
                crate::map::eval_forms(&f.embed(&field), &g.embed(&field), &FqPoint::Affine(alpha));
            Ok(ClosedPoint::of_point(&field, &image))
        }
    }
}

/// `PC = union over m >= 1 of the m-th images of the critical points`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostcriticalSet {
    pub p: u64,
    /// Set when the critical divisor vanishes identically.
    pub everything: bool,
    pub points: Vec<ClosedPoint>,
    /// Critical closed points with multiplicities.
    pub critical: Vec<(ClosedPoint, usize)>,
}

impl PostcriticalSet {
    pub fn contains(&self, x: &ClosedPoint) -> bool {
        self.everything || self.points.binary_search(x).is_ok()
    }

    pub fn labels(&self) -> Vec<String> {
        self.points.iter().map(|x| x.label(self.p)).collect()
    }
}

impl fmt::Display for PostcriticalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.everything {
            write!(f, "everything")
        } else {
            write!(f, "{{{}}}", self.labels().join(", "))
        }
    }
}

impl Serialize for PostcriticalSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PostcriticalSet", 3)?;
        st.serialize_field("everything", &self.everything)?;
        st.serialize_field("points", &self.labels())?;
        let crit: Vec<(String, usize)> = self
            .critical
            .iter()
            .map(|(c, m)| (c.label(self.p), *m))
            .collect();
        st.serialize_field("critical", &crit)?;
        st.end()
    }
}

pub fn postcritical_set(red: &ReducedMap, limits: &Limits) -> Result<PostcriticalSet> {
    let p = red.p();
    let w = critical_divisor(red);
    if w.is_zero() {
        return Ok(PostcriticalSet {
            p,
            everything: true,
            points: Vec::new(),
            critical: Vec::new(),
        });
    }
    let critical = closed_points_of_form(&w)?;
    let max_deg = critical.iter().map(|(c, _)| c.degree()).max().unwrap_or(1);
    let possible: u128 = 1
        + (1..=max_deg)
            .map(|k| count_irreducibles(p, k))
            .sum::<u128>();
    let cap = possible.min(limits.max_pc_points as u128) as usize;

    let mut seen = BTreeSet::new();
    let mut frontier: Vec<ClosedPoint> = critical.iter().map(|(c, _)| c.clone()).collect();
    while let Some(x) = frontier.pop() {
        let y = pushforward(&x, red)?;
        if seen.insert(y.clone()) {
            if seen.len() > cap {
                return Err(Error::resource(format!(
                    "postcritical set exceeds {cap} points"
                )));
            }
            frontier.push(y);
        }
    }
    Ok(PostcriticalSet {
        p,
        everything: false,
        points: seen.into_iter().collect(),
        critical,
    })
}

/// The F_p-rational points off PC.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoodLocus {
    pub p: u64,
    pub points: Vec<String>,
    #[serde(skip)]
    pub fq_points: Vec<FqPoint>,
    /// PC is everything, so the locus is empty.
    pub everything_flag: bool,
    /// The reduction drops degree; the locus is computed for the reduced map anyway.
    pub degenerate_reduction: bool,
}

fn rational_points(field: &Arc<FqField>, limits: &Limits) -> Result<Vec<FqPoint>> {
    let mut pts: Vec<FqPoint> = field
        .elements(limits)?
        .into_iter()
        .map(FqPoint::Affine)
        .collect();
    pts.push(FqPoint::Infinity);
    Ok(pts)
}

pub fn good_locus(map: &RationalMapModel, p: u64, limits: &Limits) -> Result<GoodLocus> {
    let red = reduction(map, p)?;
    let pc = postcritical_set(&red, limits)?;
    locus_from(&red, &pc, map.degree(), limits)
}

fn locus_from(
    red: &ReducedMap,
    pc: &PostcriticalSet,
    d: usize,
    limits: &Limits,
) -> Result<GoodLocus> {
    let field = red.field();
    let fq_points: Vec<FqPoint> = rational_points(field, limits)?
        .into_iter()
        .filter(|x| !pc.contains(&ClosedPoint::of_point(field, x)))
        .collect();
    Ok(GoodLocus {
        p: red.p(),
        points: fq_points.iter().map(|x| x.format(field)).collect(),
        fq_points,
        everything_flag: pc.everything,
        degenerate_reduction: red.reduced_degree() < d,
    })
}

/// Level-1 reduced fiber over one residue point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberCheck {
    pub point: String,
    pub degree: usize,
    pub separable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition2Report {
    pub holds: bool,
    /// Degree of the residue field the checked points live in (1 unless every
    /// F_p-point lies in PC).
    pub field_degree: usize,
    pub witnesses: Vec<FiberCheck>,
    pub violations: Vec<FiberCheck>,
    /// The geometric signal: the reduced map keeps degree d.
    pub reduced_degree_full: bool,
    pub strict_good_reduction: bool,
    /// Set when the fiberwise verdict and strict good reduction disagree.
    pub consistency_alarm: Option<String>,
}

/// Checks that every reduced level-1 fiber over the residual locus has degree d and
/// is separable.
pub fn condition2_check(
    map: &RationalMapModel,
    p: u64,
    limits: &Limits,
) -> Result<Condition2Report> {
    let sgr = strict_good_reduction(map, p)?;
    let red = reduction(map, p)?;
    let pc = postcritical_set(&red, limits)?;
    let d = map.degree();

    let mut field_degree = 1;
    let mut field = red.field().clone();
    let mut locus = Vec::new();
    if !pc.everything {
        loop {
            locus = rational_points(&field, limits)?
                .into_iter()
                .filter(|x| !pc.contains(&ClosedPoint::of_point(&field, x)))
                .collect();
            if !locus.is_empty() {
                break;
            }
            field_degree += 1;
            match fq_extension(p, field_degree, limits) {
                Ok(f) => field = f,
                Err(Error::Resource(_)) => break,
                Err(e) => return Err(e),
            }
        }
    }

    let (f, g) = red.forms();
    let (f, g) = (f.embed(&field), g.embed(&field));
    let mut witnesses = Vec::new();
    let mut violations = Vec::new();
    for x in &locus {
        let fiber = FqForm::fiber(&f, &g, x);
        let check = FiberCheck {
            point: x.format(&field),
            degree: fiber.degree(),
            separable: fiber.is_squarefree(),
        };
        if check.degree == d && check.separable {
            witnesses.push(check);
        } else {
            violations.push(check);
        }
    }
    let holds = !locus.is_empty() && violations.is_empty();
    let consistency_alarm = (holds != sgr.is_strict_good_reduction).then(|| {
        if sgr.inseparable_reduction {
            "strict good reduction with inseparable reduced map: PC is everything, so no residual \
             locus exists"
                .to_string()
        } else {
            format!(
                "fiber criterion {} but strict good reduction is {}",
                if holds { "holds" } else { "fails" },
                sgr.is_strict_good_reduction
            )
        }
    });
    Ok(Condition2Report {
        holds,
        field_degree,
        witnesses,
        violations,
        reduced_degree_full: sgr.reduced_degree == d,
        strict_good_reduction: sgr.is_strict_good_reduction,
        consistency_alarm,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EtaleVerdict {
    pub etale: bool,
    pub inseparable: bool,
}

/// Brute force: is the fiber of the n-th iterate of the reduced map over `x` squarefree of
/// full degree? `x` lives in `field`, an extension of the reduction's prime field.
pub fn etale_fiber_oracle(
    red: &ReducedMap,
    field: &Arc<FqField>,
    x: &FqPoint,
    n: usize,
) -> EtaleVerdict {
    if critical_divisor(red).is_zero() {
        return EtaleVerdict {
            etale: false,
            inseparable: true,
        };
    }
    let (f, g) = red.iterate_forms(n);
    let fiber = FqForm::fiber(&f.embed(field), &g.embed(field), x);
    let full = red.reduced_degree().pow(n as u32);
    EtaleVerdict {
        etale: fiber.degree() == full && fiber.is_squarefree(),
        inseparable: false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeOneReport {
    pub det: String,
    pub det_valuation: Valuation,
    pub is_sgr: bool,
    /// Every fiber of every iterate is a single point, so each tower is trivial.
    pub trivial_towers: bool,
}

pub fn degree_one_check(map: &RationalMapModel, p: u64) -> Result<DegreeOneReport> {
    if map.degree() != 1 {
        return Err(Error::input(format!(
            "degree {} map given to the degree-one check",
            map.degree()
        )));
    }
    let model = normalize_integral(map, p)?;
    let f = model.model().f().high_coeffs();
    let g = model.model().g().high_coeffs();
    let det = &f[0] * &g[1] - &f[1] * &g[0];
    let det_valuation = vp(p, &det)?;
    Ok(DegreeOneReport {
        det: crate::arith::rat_string(&det),
        det_valuation,
        is_sgr: det_valuation == Valuation::Finite(0),
        trivial_towers: true,
    })
}

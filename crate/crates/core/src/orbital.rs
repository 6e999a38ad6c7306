//! Forward orbits, tower data aggregated along them, and the conjugation search for a
//! good model.

use std::collections::HashMap;

use serde::Serialize;

use crate::arith::{check_prime, p_power, rat, Valuation};
use crate::error::{Error, Result};
use crate::form::FqPoint;
use crate::limits::Limits;
use crate::map::{conjugate, MapSummary, Mobius, ProjPointQ, RationalMapModel};
use crate::reduction::{
    condition2_check, postcritical_set, reduction, strict_good_reduction, ClosedPoint,
    PostcriticalSet, SgrReport,
};
use crate::tower::{
    fiber_polynomial, fiber_report, frobenius_cycle_type, shift_divisibility_check, Certificate,
    FiberReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitPoint {
    pub point: ProjPointQ,
    /// The reduction in P^1(F_p).
    pub reduction: String,
    pub integral: bool,
    pub in_pc: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub preperiod: usize,
    pub period: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitProfile {
    pub points: Vec<OrbitPoint>,
    /// `None` when no repetition occurs among `x_0, ..., x_N`.
    pub cycle: Option<Cycle>,
}

impl OrbitProfile {
    pub fn raw_points(&self) -> Vec<ProjPointQ> {
        self.points.iter().map(|o| o.point.clone()).collect()
    }
}

fn reduce_point(x: &ProjPointQ, p: u64) -> (FqPoint, ClosedPoint) {
    let field = crate::fq::FqField::prime(p).expect("checked prime");
    let xbar = x.reduce(&field);
    let cp = ClosedPoint::of_point(&field, &xbar);
    (xbar, cp)
}

fn profile_point(x: ProjPointQ, p: u64, pc: &PostcriticalSet) -> OrbitPoint {
    let (xbar, cp) = reduce_point(&x, p);
    let field = crate::fq::FqField::prime(p).expect("checked prime");
    OrbitPoint {
        reduction: xbar.format(&field),
        integral: x.is_integral(p),
        in_pc: pc.contains(&cp),
        point: x,
    }
}

/// `x_0 = x, x_{j+1} = phi(x_j)` for `j < N`, with exact cycle detection.
pub fn forward_orbit(
    map: &RationalMapModel,
    x: &ProjPointQ,
    steps: usize,
    p: u64,
    limits: &Limits,
) -> Result<OrbitProfile> {
    check_prime(p)?;
    if steps == 0 {
        return Err(Error::input("orbit length must be at least 1"));
    }
    let pc = postcritical_set(&reduction(map, p)?, limits)?;
    let mut seen: HashMap<ProjPointQ, usize> = HashMap::new();
    let mut raw = vec![x.clone()];
    let mut cycle = None;
    seen.insert(x.clone(), 0);
    for j in 1..=steps {
        let next = match cycle {
            // inside a detected cycle the remaining points repeat
            Some(Cycle { preperiod, period }) => raw[preperiod + (j - preperiod) % period].clone(),
            None => map.eval(&raw[j - 1]),
        };
        if next.height_bits() > limits.max_height_bits {
            return Err(Error::resource(format!(
                "orbit point {j} has {} bits, above the cap {}",
                next.height_bits(),
                limits.max_height_bits
            )));
        }
        if cycle.is_none() {
            if let Some(&i) = seen.get(&next) {
                cycle = Some(Cycle {
                    preperiod: i,
                    period: j - i,
                });
            } else {
                seen.insert(next.clone(), j);
            }
        }
        raw.push(next);
    }
    Ok(OrbitProfile {
        points: raw.into_iter().map(|x| profile_point(x, p, &pc)).collect(),
        cycle,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasepointReport {
    pub index: usize,
    pub basepoint: ProjPointQ,
    /// Integral with reduction outside PC.
    pub in_locus: bool,
    pub fibers: Vec<FiberReport>,
    /// Frobenius cycle types per level, where the certificate holds.
    pub cycle_types: Vec<Option<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftCheck {
    /// The level-`n` fiber over `x_j` against the level-`n+1` fiber over `x_{j+1}`.
    pub j: usize,
    pub n: usize,
    /// `None` when the check does not apply (a point at infinity or an inseparable fiber).
    pub divides: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitalReport {
    pub sgr: SgrReport,
    pub condition2_holds: bool,
    pub orbit: OrbitProfile,
    pub basepoints: Vec<BasepointReport>,
    pub shift_checks: Vec<ShiftCheck>,
    pub locus_basepoints: usize,
    pub all_unramified_on_locus: bool,
}

pub fn orbital_report(
    map: &RationalMapModel,
    x: &ProjPointQ,
    steps: usize,
    n_max: usize,
    p: u64,
    limits: &Limits,
) -> Result<OrbitalReport> {
    if n_max == 0 {
        return Err(Error::input("depth must be at least 1"));
    }
    crate::tower::check_iterate_degree(map.degree(), n_max, limits)?;
    let sgr = strict_good_reduction(map, p)?;
    let condition2 = condition2_check(map, p, limits)?;
    let orbit = forward_orbit(map, x, steps, p, limits)?;

    let mut basepoints = Vec::new();
    for (index, op) in orbit.points.iter().enumerate() {
        let mut fibers = Vec::new();
        let mut cycle_types = Vec::new();
        for n in 1..=n_max {
            let report = fiber_report(
                &fiber_polynomial(map, n, &op.point, p, limits)?,
                limits.seed,
            )?;
            let ct = if report.certificate == Certificate::Unramified {
                let (xbar, _) = reduce_point(&op.point, p);
                match frobenius_cycle_type(map, n, &xbar, p, limits) {
                    Ok(c) => Some(c),
                    Err(Error::Precondition(_)) => None,
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            fibers.push(report);
            cycle_types.push(ct);
        }
        basepoints.push(BasepointReport {
            index,
            basepoint: op.point.clone(),
            in_locus: op.integral && !op.in_pc,
            fibers,
            cycle_types,
        });
    }

    let mut shift_checks = Vec::new();
    let pts = orbit.raw_points();
    for j in 0..pts.len() - 1 {
        for n in 1..=n_max.saturating_sub(1).max(1) {
            let divides = if pts[j].is_infinity() || pts[j + 1].is_infinity() {
                None
            } else {
                match shift_divisibility_check(map, n, &pts[j], limits) {
                    Ok(b) => Some(b),
                    Err(Error::Precondition(_)) => None,
                    Err(e) => return Err(e),
                }
            };
            shift_checks.push(ShiftCheck { j, n, divides });
        }
    }

    let locus: Vec<&BasepointReport> = basepoints.iter().filter(|b| b.in_locus).collect();
    let all_unramified_on_locus = locus.iter().all(|b| {
        b.fibers
            .iter()
            .all(|f| f.certificate == Certificate::Unramified)
    });
    Ok(OrbitalReport {
        sgr,
        condition2_holds: condition2.holds,
        orbit,
        locus_basepoints: locus.len(),
        basepoints,
        shift_checks,
        all_unramified_on_locus,
    })
}

/// The searched family `z -> p^a z + b`, optionally precomposed with `z -> 1/z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuliBounds {
    pub a_min: i64,
    pub a_max: i64,
    pub b_values: Vec<i64>,
    pub include_inversion: bool,
}

impl ModuliBounds {
    pub fn default_for(p: u64) -> Self {
        ModuliBounds {
            a_min: -3,
            a_max: 3,
            b_values: (0..p as i64).collect(),
            include_inversion: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuliReport {
    pub best_m: Mobius,
    pub best_res_valuation: Valuation,
    /// A valuation-0 conjugate was found and re-verified; otherwise the search is
    /// inconclusive.
    pub achieved_zero: bool,
    pub best_conjugate: MapSummary,
    pub candidates_checked: usize,
}

fn candidates(bounds: &ModuliBounds) -> Vec<(bool, i64, i64)> {
    let mut out = Vec::new();
    let inversions: &[bool] = if bounds.include_inversion {
        &[false, true]
    } else {
        &[false]
    };
    for &inv in inversions {
        let mut as_: Vec<i64> = (bounds.a_min..=bounds.a_max).collect();
        as_.sort_by_key(|&a| (a.abs(), a));
        for a in as_ {
            let mut bs = bounds.b_values.clone();
            bs.sort_by_key(|&b| (b.abs(), b));
            bs.dedup();
            for b in bs {
                out.push((inv, a, b));
            }
        }
    }
    out
}

fn candidate_matrix(p: u64, inv: bool, a: i64, b: i64) -> Mobius {
    let t = Mobius::new(p_power(p, a), rat(b), rat(0), rat(1)).expect("p^a is nonzero");
    if inv {
        t.compose(&Mobius::inversion())
    } else {
        t
    }
}

pub fn moduli_search(
    map: &RationalMapModel,
    p: u64,
    bounds: &ModuliBounds,
) -> Result<ModuliReport> {
    check_prime(p)?;
    if bounds.a_min > bounds.a_max || bounds.b_values.is_empty() {
        return Err(Error::input("empty search bounds"));
    }
    let mut best: Option<(Valuation, Mobius, RationalMapModel)> = None;
    let mut checked = 0;
    for (inv, a, b) in candidates(bounds) {
        let m = candidate_matrix(p, inv, a, b);
        let conj = conjugate(map, &m)?;
        let v = strict_good_reduction(&conj, p)?.res_valuation;
        checked += 1;
        if best.as_ref().is_none_or(|(bv, _, _)| v < *bv) {
            best = Some((v, m, conj));
        }
        if v == Valuation::Finite(0) {
            break;
        }
    }
    let (v, m, conj) = best.expect("nonempty candidate family");
    let achieved_zero =
        v == Valuation::Finite(0) && strict_good_reduction(&conj, p)?.is_strict_good_reduction;
    Ok(ModuliReport {
        best_m: m,
        best_res_valuation: v,
        achieved_zero,
        best_conjugate: MapSummary::from(&conj),
        candidates_checked: checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_map;

    fn map(s: &str, p: u64) -> RationalMapModel {
        parse_map(s, Some(p)).unwrap()
    }

    fn pt(s: &str) -> ProjPointQ {
        ProjPointQ::parse(s).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let l = Limits::default();
        let o = forward_orbit(&map("z^2-1", 5), &pt("0"), 6, 5, &l).unwrap();
        assert_eq!(
            o.cycle,
            Some(Cycle {
                preperiod: 0,
                period: 2
            })
        );
        let labels: Vec<String> = o.points.iter().map(|x| x.point.to_string()).collect();
        assert_eq!(labels, vec!["0", "-1", "0", "-1", "0", "-1", "0"]);

        let o = forward_orbit(&map("z^2+5", 5), &pt("0"), 3, 5, &l).unwrap();
        let labels: Vec<String> = o.points.iter().map(|x| x.point.to_string()).collect();
        assert_eq!(labels, vec!["0", "5", "30", "905"]);
        assert_eq!(o.cycle, None);
        assert!(o.points.iter().all(|x| x.in_pc));

        let o = forward_orbit(&map("z^2", 5), &pt("inf"), 2, 5, &l).unwrap();
        assert_eq!(
            o.cycle,
            Some(Cycle {
                preperiod: 0,
                period: 1
            })
        );

        let tight = Limits {
            max_height_bits: 64,
            ..l
        };
        assert!(matches!(
            forward_orbit(&map("z^2+5", 5), &pt("1"), 12, 5, &tight),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn report_examples() {
        let l = Limits::default();
        let r = orbital_report(&map("z^2+5", 5), &pt("1"), 2, 2, 5, &l).unwrap();
        assert!(r.all_unramified_on_locus);
        assert_eq!(r.locus_basepoints, 3);
        assert!(r.basepoints.iter().all(|b| b
            .fibers
            .iter()
            .all(|f| f.certificate == Certificate::Unramified)));
        assert!(r.shift_checks.iter().all(|s| s.divides == Some(true)));

        let r = orbital_report(&map("z^2+5", 5), &pt("5"), 1, 1, 5, &l).unwrap();
        assert!(r.orbit.points[0].in_pc);
        assert!(!r.basepoints[0].in_locus);
        assert_eq!(r.locus_basepoints, 0);

        let r = orbital_report(&map("5z^2+z", 5), &pt("1"), 1, 1, 5, &l).unwrap();
        assert!(!r.condition2_holds && !r.sgr.is_strict_good_reduction);
        assert!(!r.all_unramified_on_locus);
    }

    #[test]
    fn moduli_examples() {
        let p = 5;
        let r = moduli_search(&map("z^2+p", p), p, &ModuliBounds::default_for(p)).unwrap();
        assert!(r.achieved_zero);
        assert_eq!(r.best_m, Mobius::identity());
        assert_eq!(r.candidates_checked, 1);

        let r = moduli_search(&map("p*z^2+z", p), p, &ModuliBounds::default_for(p)).unwrap();
        assert!(r.achieved_zero);
        assert_eq!(r.best_m, Mobius::from_ints(5, 0, 0, 1).unwrap());
        assert_eq!(r.best_conjugate.expression, "z^2 + z");

        let r = moduli_search(&map("p^2*z^2", p), p, &ModuliBounds::default_for(p)).unwrap();
        assert!(r.achieved_zero);
        assert_eq!(r.best_m, Mobius::from_ints(25, 0, 0, 1).unwrap());

        // the identity alone leaves the search inconclusive
        let narrow = ModuliBounds {
            a_min: 0,
            a_max: 0,
            b_values: vec![0],
            include_inversion: false,
        };
        let r = moduli_search(&map("p*z^2+z", p), p, &narrow).unwrap();
        assert!(!r.achieved_zero);
        assert_eq!(r.best_res_valuation, Valuation::Finite(2));
    }
}

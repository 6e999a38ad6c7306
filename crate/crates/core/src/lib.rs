//! Good reduction of rational maps of the projective line over p-adic fields.

pub mod arith;
pub mod error;
pub mod form;
pub mod fq;
pub mod fq_poly;
pub mod limits;
pub mod map;
pub mod orbital;
pub mod parse;
pub mod poly;
pub mod reduction;
pub mod report;
pub mod tower;

pub use arith::{vp, Rational, Valuation};
pub use error::{Error, Result};
pub use fq::{fq_extension, Fq, FqField};
pub use fq_poly::{fq_factor, FqPoly};
pub use limits::Limits;
pub use map::{
    conjugate, iterate, normalize_integral, reduce_map, Mobius, ProjPointQ, RationalMapModel,
};
pub use orbital::{forward_orbit, moduli_search, orbital_report, ModuliBounds};
pub use parse::parse_map;
pub use poly::{binary_form_resultant, discriminant, resultant, PolyQ};
pub use reduction::{
    condition2_check, critical_divisor, degree_one_check, etale_fiber_oracle, good_locus,
    postcritical_set, pushforward, strict_good_reduction, ClosedPoint, PostcriticalSet,
};
pub use tower::{
    fiber_polynomial, fiber_report, frobenius_cycle_type, newton_polygon, preimage_tree,
    shift_divisibility_check, Certificate,
};

//! Centered Morrey and small Morrey norms of piecewise-power radial
//! functions, with the geometric quantities built on top of them.
//!
//! The norm N(R) = |B(0,R)|^{1/q−1/p} (∫_{B(0,R)} |f|^p)^{1/p} is taken to
//! its supremum over R ∈ (0,∞) (classical variant) or R ∈ (0,1) (small
//! variant). For piecewise powers the radial integral is elementary, so
//! [`centered_norm`] resolves the supremum segment by segment in closed
//! form, reporting where it sits and whether it is attained. An independent
//! quadrature path ([`oracle_norm`]) and a Monte Carlo off-center probe
//! ([`offcenter_probe`]) exist purely to check it.
//!
//! On extremal families built from the critical profile r^{−d/q}, the
//! von Neumann–Jordan, James, and Dunkl–Williams quotients approach 2, 2,
//! and 4 as the split radius ε shrinks, and the octahedral sign patterns
//! stay above 3·(1−ε^γ)^{1/p}; see the `quotient` functions and
//! [`closed_form_bound`].
//!
//! ```
//! use morrey_core::{centered_norm, PowerPiece, RadialFunction, SpaceParams, Variant};
//!
//! let sp = SpaceParams::new(1, 1.0, 2.0, Variant::Small).unwrap();
//! let f = RadialFunction::new(vec![PowerPiece::new(0.0, 1.0, 1.0, -0.5).unwrap()]).unwrap();
//! let n = centered_norm(&f, &sp).unwrap();
//! assert!((n.value - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
//! ```

mod engine;
mod error;
mod num;
mod oracle;
mod quad;
mod quotient;
mod search;
mod space;
mod witness;

pub mod corpus;

pub use engine::{
    centered_norm, cumulative_integral, CumulativeIntegral, Method, NormResult, SupremumRadius,
};
pub use error::{MorreyError, Result};
pub use oracle::{offcenter_probe, offcenter_probe_report, oracle_norm, ProbeReport};
pub use quotient::{
    closed_form_bound, dw_quotient, dw_quotient_with_method, james_quotient,
    james_quotient_with_method, nj_quotient, nj_quotient_with_method, octahedral_min,
    octahedral_min_with_method, octahedral_pattern_norms, quotient_report, sweep, QuotientKind,
    QuotientReport, CSV_HEADER,
};
pub use space::{
    membership_failure, sphere_area, validate_membership, PowerPiece, RadialFunction, SpaceParams,
    Variant,
};
pub use witness::{
    build_octahedral_witnesses, build_witnesses, OctahedralWitnesses, QuotientWitnesses,
};

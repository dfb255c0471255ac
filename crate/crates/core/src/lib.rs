//! Exact p-adic analysis of Laurent series: valuation polygons, zero counting
//! and localization, singularity classification at a puncture, and image
//! discs.
//!
//! Everything is computed over `BigRational`; valuations of elements are
//! integers, valuations of radii and corners are rationals.

pub mod cli;
pub mod error;
pub mod picard;
pub mod polygon;
pub mod series;
pub mod solver;
pub mod valuation;

pub use error::{Error, Result};
pub use picard::{
    check_zero_free, classify_singularity, contains_value, extend_across_puncture,
    open_image_disc, ImageDisc, SingularityClassification,
};
pub use polygon::{
    certified_horizon, duality_check, envelope_value, newton_polygon, valuation_envelope,
    zero_count_annulus, NewtonPolygon, ValuationEnvelope,
};
pub use series::{
    Evaluation, LaurentSeries, RadiusVal, TailCertificate, TailDirection, TailKind, ValRange,
};
pub use solver::{
    hensel_refine_root, oracle_zero_count, slope_factorization, PadicApprox, PrecisionPolicy,
    SlopeFactorization,
};
pub use valuation::{p_adic_valuation, val_add, val_min, PrimeContext, Valuation};

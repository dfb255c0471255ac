//! Constructive zero localization: Hensel lifting of simple roots, slope
//! factorization, and an independent zero-count oracle for tests.

mod factor;
mod hensel;
mod oracle;

pub use factor::{
    slope_factorization, slope_factorization_with, PrecisionPolicy, SlopeFactor,
    SlopeFactorization,
};
pub use hensel::{derivative, eval_int, hensel_refine_root, IntPoly, PadicApprox};
pub use oracle::{oracle_zero_count, KnownFactor, RootConstruction};

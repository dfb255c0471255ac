//! Newton polygons, valuation envelopes and zero counting.
//!
//! Sign convention: a Newton segment of slope `σ` and length `ℓ` accounts for
//! `ℓ` zeros (in the algebraic closure, with multiplicity) of valuation `-σ`.
//! Dually the envelope has a corner at `s0 = -σ` of sharpness `ℓ`.

mod envelope;
mod hull;

pub use envelope::{
    certified_horizon, duality_check, envelope_value, valuation_envelope, zero_count_annulus,
    Corner, Piece, ValuationEnvelope,
};
pub use hull::{newton_polygon, NewtonPolygon, Segment};

//! Decision procedures for singularities at the puncture and for image discs.
//!
//! A function on the punctured disc that omits two values of `P^1` may be
//! normalized (by a Möbius map) to omit `0` and `inf`; we take such inputs as
//! series and check zero-freeness ourselves. A zero-free series can only have
//! a removable singularity or a pole at the origin: infinitely many negative
//! terms would force infinitely many envelope corners, hence zeros.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::polygon::{certified_horizon, ValuationEnvelope};
use crate::series::{int, LaurentSeries, RadiusVal, TailKind, ValRange};
use crate::valuation::Valuation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SingularityClassification {
    RemovableAnalytic,
    Pole(u64),
    EssentialDeclared,
}

/// `f(D(r)) = D(f(0), δ)` with `v(δ) = delta_val`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageDisc {
    pub center: BigRational,
    pub delta_val: Valuation,
    pub lead_exponent: i64,
}

/// Valuation of the first certified zero in `[s_r, inf)`, if any.
fn first_zero(f: &LaurentSeries, s_r: &RadiusVal) -> Result<Option<BigRational>> {
    let range = ValRange::disc(s_r.s().clone());
    if !f.converges_on(&range) {
        return Err(Error::NonConvergent);
    }
    let lines = f.points();
    if lines.is_empty() {
        if f.is_zero() {
            return Ok(Some(s_r.s().clone()));
        }
        return Err(Error::WindowInsufficient("window holds no nonzero coefficient".into()));
    }
    let env = ValuationEnvelope::of_lines(&lines, &range);

    // Corners past the horizon are not certified; an essential tail is
    // certified on [s_r, horizon) only.
    let horizon = certified_horizon(f, s_r.s())?;
    if let Some(h) = &horizon {
        if h <= s_r.s() {
            return Err(Error::WindowInsufficient(format!(
                "negative tail may undercut the window already at s = {}",
                s_r.s()
            )));
        }
    }
    let in_scope = |s: &BigRational| horizon.as_ref().is_none_or(|h| s < h);

    let checkpoints = std::iter::once(s_r.s())
        .chain(env.corners.iter().map(|c| &c.s0))
        .filter(|s| in_scope(s));
    for s in checkpoints {
        if let Some(t) = f.pos_tail_min(s)? {
            if t <= env.value_at(s) {
                return Err(Error::WindowInsufficient(format!(
                    "positive tail may reach the envelope at s = {s}"
                )));
            }
        }
    }

    Ok(env.corners.iter().map(|c| &c.s0).find(|s| in_scope(s)).cloned())
}

/// Whether `f` has no zero `z` with `0 < |z| <= r` that the window certifies.
///
/// With an essential tail only `[s_r, horizon)` is certified, see
/// [`certified_horizon`].
pub fn check_zero_free(f: &LaurentSeries, s_r: &RadiusVal) -> Result<bool> {
    Ok(first_zero(f, s_r)?.is_none())
}

pub fn classify_singularity(f: &LaurentSeries) -> SingularityClassification {
    if let TailKind::EssentialQuadratic { .. } = f.tail_neg().kind {
        return SingularityClassification::EssentialDeclared;
    }
    match f.n_min() {
        Some(n) if n < 0 => SingularityClassification::Pole(n.unsigned_abs()),
        _ => SingularityClassification::RemovableAnalytic,
    }
}

/// Extend a zero-free `f` on the punctured disc across the puncture.
///
/// Errors with `HypothesisViolated` when `f` has a zero in the disc and with
/// `ContradictionDetected` when a zero-free `f` declares an essential
/// singularity. Never returns `EssentialDeclared`.
pub fn extend_across_puncture(
    f: &LaurentSeries,
    s_r: &RadiusVal,
) -> Result<SingularityClassification> {
    if let Some(corner) = first_zero(f, s_r)? {
        return Err(Error::HypothesisViolated { corner });
    }
    match classify_singularity(f) {
        SingularityClassification::EssentialDeclared => Err(Error::ContradictionDetected),
        c => Ok(c),
    }
}

/// The disc `f(D(r))`: centre `f(0)` and `v(δ) = min_{n >= m} v(a_n) + n*s_r`
/// where `m` is the least positive exponent with `a_m != 0`.
pub fn open_image_disc(f: &LaurentSeries, s_r: &RadiusVal) -> Result<ImageDisc> {
    if f.n_min().is_some_and(|n| n < 0) || !f.tail_neg().is_zero() {
        return Err(Error::PoleAtOrigin);
    }
    let s = s_r.s();
    if !f.converges_on(&ValRange::disc(s.clone())) {
        return Err(Error::NonConvergent);
    }
    let hi = f.window().map(|w| w.1);
    let tail_open = !f.tail_pos().is_zero();
    if tail_open && hi.is_some_and(|h| h < 0) {
        return Err(Error::WindowInsufficient("constant term lies in the tail".into()));
    }
    let center = f.coefficient(0).cloned().unwrap_or_else(BigRational::zero);

    let Some((&m, _)) = f.entries().range(1..).next() else {
        return Err(if tail_open {
            Error::WindowInsufficient("no nonconstant term in the window".into())
        } else {
            Error::ConstantFunction
        });
    };
    let ctx = f.ctx();
    let delta = f
        .entries()
        .range(m..)
        .map(|(n, c)| int(ctx.rational_valuation(c).expect("nonzero")) + int(*n) * s)
        .min()
        .expect("a_m is present");
    if let Some(t) = f.pos_tail_min(s)? {
        if t < delta {
            return Err(Error::WindowInsufficient(format!(
                "positive tail may exceed the window's sup at s = {s}"
            )));
        }
    }
    Ok(ImageDisc {
        center,
        delta_val: Valuation::Finite(delta),
        lead_exponent: m,
    })
}

/// Whether `w` lies in `f(D(r))`, i.e. `v(f(0) - w) >= v(δ)`.
pub fn contains_value(f: &LaurentSeries, s_r: &RadiusVal, w: &BigRational) -> Result<bool> {
    let disc = open_image_disc(f, s_r)?;
    Ok(f.ctx().valuation(&(&disc.center - w)) >= disc.delta_val)
}

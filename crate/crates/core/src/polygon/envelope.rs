//! The valuation envelope `V_f(s) = min_n v(a_n) + n*s`, i.e. `-log_p |f|_t`
//! at `t = p^(-s)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::series::{floor_sqrt, int, LaurentSeries, TailKind, ValRange};
use crate::valuation::Valuation;

/// One affine piece `intercept + exponent*s` on `[start, end]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub start: Option<BigRational>,
    pub end: Option<BigRational>,
    pub exponent: i64,
    pub intercept: BigRational,
}

impl Piece {
    pub fn value_at(&self, s: &BigRational) -> BigRational {
        &self.intercept + int(self.exponent) * s
    }
}

/// A breakpoint of the envelope. Both `n_left` and `n_right` attain the
/// minimum at `s0`; `sharpness = n_left - n_right` counts the zeros on the
/// circle of valuation `s0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corner {
    pub s0: BigRational,
    pub value: BigRational,
    pub n_left: i64,
    pub n_right: i64,
    pub sharpness: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationEnvelope {
    pub range: ValRange,
    pub pieces: Vec<Piece>,
    pub corners: Vec<Corner>,
}

impl ValuationEnvelope {
    /// Lower envelope of the lines `v + n*s` over `range`, ignoring tails.
    /// `lines` must be nonempty with strictly increasing exponents.
    pub(crate) fn of_lines(lines: &[(i64, BigRational)], range: &ValRange) -> Self {
        assert!(!lines.is_empty());
        let at = |s: &BigRational| {
            lines
                .iter()
                .map(|(n, v)| v + int(*n) * s)
                .min()
                .expect("nonempty")
        };
        let minimizers = |s: &BigRational, m: &BigRational| -> Vec<usize> {
            (0..lines.len())
                .filter(|&i| &(&lines[i].1 + int(lines[i].0) * s) == m)
                .collect()
        };

        let mut pieces = Vec::new();
        let mut corners = Vec::new();

        // index into `lines` of the current piece
        let mut cur = match range.lo() {
            None => lines.len() - 1,
            Some(lo) => {
                let m = at(lo);
                let idx = minimizers(lo, &m);
                let (first, last) = (idx[0], idx[idx.len() - 1]);
                if first != last {
                    corners.push(Corner {
                        s0: lo.clone(),
                        value: m,
                        n_left: lines[last].0,
                        n_right: lines[first].0,
                        sharpness: (lines[last].0 - lines[first].0) as u64,
                    });
                }
                first
            }
        };
        let mut start = range.lo().cloned();

        loop {
            let (n_cur, v_cur) = &lines[cur];
            // earliest crossing with a line of smaller exponent; on ties keep
            // the smallest exponent
            let mut next: Option<(BigRational, usize)> = None;
            for (i, (n, v)) in lines[..cur].iter().enumerate() {
                let t = (v - v_cur) / int(n_cur - n);
                match &next {
                    Some((best, _)) if &t >= best => {}
                    _ => next = Some((t, i)),
                }
            }
            let piece = |end: Option<BigRational>| Piece {
                start: start.clone(),
                end,
                exponent: *n_cur,
                intercept: v_cur.clone(),
            };
            let Some((t, j)) = next.filter(|(t, _)| range.hi().is_none_or(|h| t <= h)) else {
                pieces.push(piece(range.hi().cloned()));
                break;
            };
            pieces.push(piece(Some(t.clone())));
            corners.push(Corner {
                value: lines[j].1.clone() + int(lines[j].0) * &t,
                n_left: *n_cur,
                n_right: lines[j].0,
                sharpness: (n_cur - lines[j].0) as u64,
                s0: t.clone(),
            });
            if range.hi() == Some(&t) {
                break;
            }
            cur = j;
            start = Some(t);
        }

        Self {
            range: range.clone(),
            pieces,
            corners,
        }
    }

    /// `V(s)` for `s` in the range.
    pub fn value_at(&self, s: &BigRational) -> BigRational {
        self.pieces
            .iter()
            .map(|p| p.value_at(s))
            .min()
            .expect("an envelope has at least one piece")
    }

    /// Finite points where the envelope changes slope or stops.
    fn breakpoints(&self) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = self.range.lo().into_iter().cloned().collect();
        out.extend(self.corners.iter().map(|c| c.s0.clone()));
        out.extend(self.range.hi().cloned());
        out
    }

    pub fn total_sharpness(&self) -> u64 {
        self.corners.iter().map(|c| c.sharpness).sum()
    }
}

/// Check the tails sit strictly above the window envelope on its whole range.
///
/// On each piece the envelope is a line `L`; the linear tail bound minus `L`
/// is affine and the quadratic tail bound minus `L` is concave, so both are
/// minimized at the piece ends. Checking every breakpoint is therefore exact.
fn certify(f: &LaurentSeries, env: &ValuationEnvelope) -> Result<()> {
    if f.is_finite_support() {
        return Ok(());
    }
    if !f.converges_on(&env.range) {
        return Err(Error::NonConvergent);
    }
    if !f.tail_neg().is_zero() && env.range.hi().is_none() {
        return Err(Error::WindowInsufficient(
            "an essential tail cannot be bounded near the origin".into(),
        ));
    }
    for s in env.breakpoints() {
        let tail = f.tail_min(&s)?;
        if tail.cmp_rational(&env.value_at(&s)).is_le() {
            return Err(Error::WindowInsufficient(format!(
                "tail may reach the envelope at s = {s}"
            )));
        }
    }
    Ok(())
}

fn lines_of(f: &LaurentSeries) -> Result<Vec<(i64, BigRational)>> {
    if f.is_zero() {
        return Err(Error::ZeroSeries);
    }
    let lines = f.points();
    if lines.is_empty() {
        return Err(Error::WindowInsufficient("window holds no nonzero coefficient".into()));
    }
    Ok(lines)
}

/// Exact lower envelope over `range`, certified against the tails.
pub fn valuation_envelope(f: &LaurentSeries, range: &ValRange) -> Result<ValuationEnvelope> {
    let lines = lines_of(f)?;
    if !f.converges_on(range) {
        return Err(Error::NonConvergent);
    }
    let env = ValuationEnvelope::of_lines(&lines, range);
    certify(f, &env)?;
    Ok(env)
}

/// `V_f(s)`; `Infinity` for the zero series.
pub fn envelope_value(f: &LaurentSeries, s: &BigRational) -> Result<Valuation> {
    if f.is_zero() {
        return Ok(Valuation::Infinity);
    }
    let env = valuation_envelope(f, &ValRange::point(s.clone()))?;
    Ok(Valuation::Finite(env.value_at(s)))
}

/// Zeros (with multiplicity) whose valuation lies in the closed `range`.
///
/// When the range reaches the origin (`hi` unbounded) the zero of order
/// `n_min > 0` at `z = 0` is included.
pub fn zero_count_annulus(f: &LaurentSeries, range: &ValRange) -> Result<u64> {
    let env = valuation_envelope(f, range)?;
    let origin = match (range.hi(), f.n_min()) {
        (None, Some(n)) if n > 0 && f.tail_neg().is_zero() => n as u64,
        _ => 0,
    };
    Ok(env.total_sharpness() + origin)
}

/// Cross-check the two polygon views: every envelope corner in `range`
/// matches a Newton segment with `-slope = s0` and `length = sharpness`.
pub fn duality_check(f: &LaurentSeries, range: &ValRange) -> Result<bool> {
    let env = valuation_envelope(f, range)?;
    let poly = super::newton_polygon(f)?;
    let mut from_segments: Vec<(BigRational, u64)> = poly
        .segments
        .iter()
        .map(|s| (s.root_valuation(), s.length))
        .filter(|(s0, _)| range.contains(s0))
        .collect();
    from_segments.sort();
    let from_corners: Vec<(BigRational, u64)> = env
        .corners
        .iter()
        .map(|c| (c.s0.clone(), c.sharpness))
        .collect();
    Ok(from_segments == from_corners)
}

/// How far towards the origin the negative tail is certified to stay above
/// the window envelope, starting from `from`.
///
/// Returns `None` when the negative tail is zero (no limit). Otherwise
/// returns `h` such that the tail is strictly above the envelope on
/// `[from, h)`; `h <= from` means nothing is certified.
pub fn certified_horizon(f: &LaurentSeries, from: &BigRational) -> Result<Option<BigRational>> {
    let TailKind::EssentialQuadratic { a, c } = &f.tail_neg().kind else {
        return Ok(None);
    };
    let lines = lines_of(f)?;
    let lo = f.window().expect("tail implies window").0;
    let env = ValuationEnvelope::of_lines(&lines, &ValRange::disc(from.clone()));
    for piece in &env.pieces {
        let start = piece.start.as_ref().expect("disc ranges start at `from`");
        let t = crossing_threshold(a, c, piece.exponent, &piece.intercept, lo);
        if &t <= start {
            return Ok(Some(start.clone()));
        }
        if piece.end.as_ref().is_none_or(|e| &t <= e) {
            return Ok(Some(t));
        }
    }
    unreachable!("the last piece of a disc envelope is unbounded")
}

/// `min { (a + c*n^2 - v) / (k - n) : n <= lo - 1 }`: below this `s` every
/// tail line lies strictly above the line `v + k*s`.
fn crossing_threshold(
    a: &BigRational,
    c: &BigRational,
    k: i64,
    v: &BigRational,
    lo: i64,
) -> BigRational {
    // substitute m = k - n >= k - lo + 1 >= 1:
    // g(m) = d/m - 2ck + c*m with d = a - v + c*k^2
    let d = a - v + c * int(k) * int(k);
    let m0 = BigInt::from(k - lo + 1);
    let g = |m: &BigInt| {
        let m = BigRational::from_integer(m.clone());
        &d / &m - c * int(2 * k) + c * m
    };
    if !d.is_positive() {
        return g(&m0);
    }
    let r = floor_sqrt(&(&d / c));
    let clamp = |m: BigInt| if m < m0 { m0.clone() } else { m };
    let a1 = g(&clamp(r.clone()));
    let a2 = g(&clamp(r + 1));
    a1.min(a2)
}

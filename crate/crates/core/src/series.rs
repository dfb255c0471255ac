//! Windowed Laurent series `f = sum a_n z^n` with tail certificates.
//!
//! A series stores finitely many known coefficients inside a window of
//! exponents `[lo, hi]`. Everything outside the window is described by a
//! [`TailCertificate`]: either the coefficients are zero, or their valuations
//! are bounded below by a line (positive side) or a parabola (negative side).
//! Operations either prove the tails cannot affect their answer or fail with
//! [`Error::WindowInsufficient`].

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::valuation::{PrimeContext, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TailDirection {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TailKind {
    ZeroBeyondWindow,
    /// `v(a_n) >= a + b*n` for every `n` above the window.
    LinearBound { a: BigRational, b: BigRational },
    /// `v(a_n) >= a + c*n^2` for every `n` below the window, with infinitely
    /// many of those coefficients nonzero.
    EssentialQuadratic { a: BigRational, c: BigRational },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TailCertificate {
    pub direction: TailDirection,
    pub kind: TailKind,
}

impl TailCertificate {
    pub fn zero(direction: TailDirection) -> Self {
        Self {
            direction,
            kind: TailKind::ZeroBeyondWindow,
        }
    }

    pub fn linear(a: BigRational, b: BigRational) -> Self {
        Self {
            direction: TailDirection::Positive,
            kind: TailKind::LinearBound { a, b },
        }
    }

    pub fn essential(a: BigRational, c: BigRational) -> Self {
        Self {
            direction: TailDirection::Negative,
            kind: TailKind::EssentialQuadratic { a, c },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.kind == TailKind::ZeroBeyondWindow
    }

    fn validate(&self, slot: TailDirection) -> Result<()> {
        if self.direction != slot {
            return Err(Error::MalformedCertificate(format!(
                "{:?} certificate supplied for the {:?} tail",
                self.direction, slot
            )));
        }
        match (&self.kind, slot) {
            (TailKind::ZeroBeyondWindow, _) => Ok(()),
            (TailKind::LinearBound { .. }, TailDirection::Positive) => Ok(()),
            (TailKind::EssentialQuadratic { c, .. }, TailDirection::Negative) => {
                if c.is_positive() {
                    Ok(())
                } else {
                    Err(Error::MalformedCertificate(
                        "quadratic coefficient must be positive".into(),
                    ))
                }
            }
            (TailKind::LinearBound { .. }, TailDirection::Negative) => Err(
                Error::MalformedCertificate("linear bound on the negative tail".into()),
            ),
            (TailKind::EssentialQuadratic { .. }, TailDirection::Positive) => Err(
                Error::MalformedCertificate("essential declaration on the positive tail".into()),
            ),
        }
    }
}

/// A radius `p^(-s)` recorded by its valuation `s`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RadiusVal(pub BigRational);

impl RadiusVal {
    pub fn new(s: BigRational) -> Self {
        Self(s)
    }

    pub fn integer(s: i64) -> Self {
        Self(BigRational::from_integer(s.into()))
    }

    pub fn s(&self) -> &BigRational {
        &self.0
    }
}

/// A closed interval of valuations `[lo, hi]`, either end possibly unbounded.
///
/// `lo` is the outer boundary (largest radius) and `hi` the inner one. An
/// unbounded `hi` reaches the origin, an unbounded `lo` reaches infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValRange {
    lo: Option<BigRational>,
    hi: Option<BigRational>,
}

impl ValRange {
    pub fn new(lo: Option<BigRational>, hi: Option<BigRational>) -> Result<Self> {
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l > h {
                return Err(Error::InvalidRange(format!("{l} > {h}")));
            }
        }
        Ok(Self { lo, hi })
    }

    pub fn closed(lo: BigRational, hi: BigRational) -> Result<Self> {
        Self::new(Some(lo), Some(hi))
    }

    /// `[s, +inf)`: the closed disc of radius-valuation `s`, down to the origin.
    pub fn disc(s: BigRational) -> Self {
        Self { lo: Some(s), hi: None }
    }

    pub fn point(s: BigRational) -> Self {
        Self {
            lo: Some(s.clone()),
            hi: Some(s),
        }
    }

    pub fn everything() -> Self {
        Self { lo: None, hi: None }
    }

    pub fn lo(&self) -> Option<&BigRational> {
        self.lo.as_ref()
    }

    pub fn hi(&self) -> Option<&BigRational> {
        self.hi.as_ref()
    }

    pub fn contains(&self, s: &BigRational) -> bool {
        self.lo.as_ref().is_none_or(|l| l <= s) && self.hi.as_ref().is_none_or(|h| s <= h)
    }
}

/// Result of [`LaurentSeries::eval_at`]: the exact window sum plus a lower
/// bound on the valuation of everything that was left out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: BigRational,
    pub discarded: Valuation,
}

impl Evaluation {
    /// `v(f(z))`, when the window sum alone determines it.
    pub fn certified_valuation(&self, ctx: &PrimeContext) -> Option<Valuation> {
        let v = ctx.valuation(&self.value);
        (v < self.discarded).then_some(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    ctx: PrimeContext,
    entries: BTreeMap<i64, BigRational>,
    // Known exponent span. Equals the entry span on any side whose tail is
    // zero; `None` only for the zero series.
    window: Option<(i64, i64)>,
    tail_pos: TailCertificate,
    tail_neg: TailCertificate,
}

impl LaurentSeries {
    /// Build a series from `(exponent, coefficient)` terms.
    ///
    /// Zero coefficients are dropped, but their exponents still count towards
    /// the window on a side with a nontrivial tail: listing `a_5 = 0` records
    /// that the coefficient is known.
    pub fn build(
        ctx: PrimeContext,
        terms: impl IntoIterator<Item = (i64, BigRational)>,
        tail_pos: TailCertificate,
        tail_neg: TailCertificate,
    ) -> Result<Self> {
        tail_pos.validate(TailDirection::Positive)?;
        tail_neg.validate(TailDirection::Negative)?;
        let mut entries = BTreeMap::new();
        let mut span: Option<(i64, i64)> = None;
        let mut seen = std::collections::BTreeSet::new();
        for (n, c) in terms {
            if !seen.insert(n) {
                return Err(Error::DuplicateExponent(n));
            }
            span = Some(match span {
                None => (n, n),
                Some((l, h)) => (l.min(n), h.max(n)),
            });
            if !c.is_zero() {
                entries.insert(n, c);
            }
        }
        if span.is_none() && !(tail_pos.is_zero() && tail_neg.is_zero()) {
            return Err(Error::MalformedCertificate(
                "a nontrivial tail needs at least one listed term".into(),
            ));
        }
        Ok(Self::assemble(ctx, entries, span, tail_pos, tail_neg))
    }

    fn assemble(
        ctx: PrimeContext,
        entries: BTreeMap<i64, BigRational>,
        span: Option<(i64, i64)>,
        tail_pos: TailCertificate,
        tail_neg: TailCertificate,
    ) -> Self {
        let first = entries.keys().next().copied();
        let last = entries.keys().next_back().copied();
        let window = span.and_then(|(lo, hi)| {
            let hi = if tail_pos.is_zero() { last.unwrap_or(lo) } else { hi };
            let lo = if tail_neg.is_zero() { first.unwrap_or(hi) } else { lo };
            match (tail_pos.is_zero(), tail_neg.is_zero(), first) {
                (true, true, None) => None,
                _ => Some((lo.min(hi), hi)),
            }
        });
        Self {
            ctx,
            entries,
            window,
            tail_pos,
            tail_neg,
        }
    }

    /// A finite-support series from integer coefficients `c_0 + c_1 z + ...`.
    pub fn polynomial(ctx: PrimeContext, coefficients: &[i64]) -> Self {
        Self::finite(
            ctx,
            coefficients
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as i64, BigRational::from_integer(c.into()))),
        )
        .expect("distinct exponents")
    }

    /// A finite-support series (both tails zero).
    pub fn finite(
        ctx: PrimeContext,
        terms: impl IntoIterator<Item = (i64, BigRational)>,
    ) -> Result<Self> {
        Self::build(
            ctx,
            terms,
            TailCertificate::zero(TailDirection::Positive),
            TailCertificate::zero(TailDirection::Negative),
        )
    }

    pub fn constant(ctx: PrimeContext, c: BigRational) -> Self {
        Self::finite(ctx, [(0, c)]).expect("single term")
    }

    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn entries(&self) -> &BTreeMap<i64, BigRational> {
        &self.entries
    }

    pub fn coefficient(&self, n: i64) -> Option<&BigRational> {
        self.entries.get(&n)
    }

    pub fn tail_pos(&self) -> &TailCertificate {
        &self.tail_pos
    }

    pub fn tail_neg(&self) -> &TailCertificate {
        &self.tail_neg
    }

    /// Known exponent span `[lo, hi]`.
    pub fn window(&self) -> Option<(i64, i64)> {
        self.window
    }

    pub fn n_min(&self) -> Option<i64> {
        self.entries.keys().next().copied()
    }

    pub fn n_max(&self) -> Option<i64> {
        self.entries.keys().next_back().copied()
    }

    pub fn is_finite_support(&self) -> bool {
        self.tail_pos.is_zero() && self.tail_neg.is_zero()
    }

    /// True for the zero series: no entries and nothing in the tails.
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty() && self.is_finite_support()
    }

    /// `(n, v(a_n))` for every stored coefficient, in exponent order.
    pub fn points(&self) -> Vec<(i64, BigRational)> {
        self.entries
            .iter()
            .map(|(&n, c)| {
                let v = self.ctx.rational_valuation(c).expect("entries are nonzero");
                (n, BigRational::from_integer(v.into()))
            })
            .collect()
    }

    // Window edges that border a nontrivial tail.
    fn known_hi(&self) -> Option<i64> {
        (!self.tail_pos.is_zero()).then(|| self.window.expect("tail implies window").1)
    }

    fn known_lo(&self) -> Option<i64> {
        (!self.tail_neg.is_zero()).then(|| self.window.expect("tail implies window").0)
    }

    /// Whether the certificates guarantee `v(a_n) + n*s -> +inf` in both
    /// directions for every `s` in the range.
    pub fn converges_on(&self, range: &ValRange) -> bool {
        let pos_ok = match &self.tail_pos.kind {
            TailKind::LinearBound { b, .. } => range.lo().is_some_and(|lo| (b + lo).is_positive()),
            _ => true,
        };
        // The quadratic bound beats n*s for every finite s, and the negative
        // tail needs nothing at s = +inf beyond that.
        pos_ok
    }

    /// Lower bound on `min_{n > hi} v(a_n) + n*s` from the positive tail,
    /// `None` when the tail is zero.
    pub(crate) fn pos_tail_min(&self, s: &BigRational) -> Result<Option<BigRational>> {
        match &self.tail_pos.kind {
            TailKind::LinearBound { a, b } => {
                let slope = b + s;
                if !slope.is_positive() {
                    return Err(Error::NonConvergent);
                }
                let first = int(self.known_hi().expect("nontrivial tail") + 1);
                Ok(Some(a + slope * first))
            }
            _ => Ok(None),
        }
    }

    /// Lower bound on `min_{n < lo} v(a_n) + n*s` from the negative tail.
    pub(crate) fn neg_tail_min(&self, s: &BigRational) -> Option<BigRational> {
        match &self.tail_neg.kind {
            TailKind::EssentialQuadratic { a, c } => {
                let last = self.known_lo().expect("nontrivial tail") - 1;
                Some(quadratic_min(a, c, s, last))
            }
            _ => None,
        }
    }

    /// Lower bound on the valuation of every tail term at `s`.
    pub(crate) fn tail_min(&self, s: &BigRational) -> Result<Valuation> {
        let pos = self.pos_tail_min(s)?;
        let neg = self.neg_tail_min(s);
        Ok(match (pos, neg) {
            (Some(x), Some(y)) => Valuation::Finite(x.min(y)),
            (Some(x), None) | (None, Some(x)) => Valuation::Finite(x),
            (None, None) => Valuation::Infinity,
        })
    }

    /// Coefficientwise sum.
    ///
    /// Nontrivial tails are combined into the weaker certificate. Known
    /// coefficients that fall outside the combined window are folded into
    /// the tail bounds.
    pub fn add(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.check_ctx(other)?;
        if !self.tail_neg.is_zero() && !other.tail_neg.is_zero() {
            return Err(Error::UnsupportedTail(
                "sum of two essential tails may cancel".into(),
            ));
        }
        let hi = [self.known_hi(), other.known_hi()].into_iter().flatten().min();
        let lo = [self.known_lo(), other.known_lo()].into_iter().flatten().max();
        if let (Some(l), Some(h)) = (lo, hi) {
            if l > h {
                return Err(Error::UnsupportedTail("windows do not overlap".into()));
            }
        }

        let tail_pos = match hi {
            None => TailCertificate::zero(TailDirection::Positive),
            Some(hi) => {
                let b = [self, other]
                    .iter()
                    .filter_map(|f| match &f.tail_pos.kind {
                        TailKind::LinearBound { b, .. } => Some(b.clone()),
                        _ => None,
                    })
                    .min()
                    .expect("some linear tail");
                let mut a: Option<BigRational> = None;
                let mut lower = |x: BigRational| {
                    a = Some(match a.take() {
                        Some(cur) => cur.min(x),
                        None => x,
                    })
                };
                for f in [self, other] {
                    if let TailKind::LinearBound { a: fa, b: fb } = &f.tail_pos.kind {
                        let start = int(f.known_hi().expect("linear tail") + 1);
                        lower(fa + (fb - &b) * start);
                    }
                    for (n, c) in f.entries.range(hi + 1..) {
                        lower(f.coeff_val(c) - &b * int(*n));
                    }
                }
                TailCertificate::linear(a.expect("some linear tail"), b)
            }
        };

        let tail_neg = match lo {
            None => TailCertificate::zero(TailDirection::Negative),
            Some(lo) => {
                let ess = if self.tail_neg.is_zero() { other } else { self };
                let TailKind::EssentialQuadratic { a, c } = &ess.tail_neg.kind else {
                    unreachable!("lo is set only by an essential tail")
                };
                let mut a = a.clone();
                for f in [self, other] {
                    for (n, coef) in f.entries.range(..lo) {
                        let n = int(*n);
                        a = a.min(f.coeff_val(coef) - c * &n * &n);
                    }
                }
                TailCertificate::essential(a, c.clone())
            }
        };

        let mut entries = self.entries.clone();
        for (n, c) in &other.entries {
            let sum = entries.remove(n).map_or_else(|| c.clone(), |x| x + c);
            if !sum.is_zero() {
                entries.insert(*n, sum);
            }
        }
        entries.retain(|n, _| lo.is_none_or(|l| *n >= l) && hi.is_none_or(|h| *n <= h));

        let span = match (self.window, other.window) {
            (None, w) | (w, None) => w,
            (Some((l1, h1)), Some((l2, h2))) => Some((l1.min(l2), h1.max(h2))),
        }
        .map(|(l, h)| (lo.unwrap_or(l), hi.unwrap_or(h)));
        Ok(Self::assemble(self.ctx, entries, span, tail_pos, tail_neg))
    }

    /// Exact product; both factors must have finite support.
    pub fn mul(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.check_ctx(other)?;
        if !self.is_finite_support() || !other.is_finite_support() {
            return Err(Error::UnsupportedTail(
                "multiplication needs finite support".into(),
            ));
        }
        let mut out: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (n, a) in &self.entries {
            for (m, b) in &other.entries {
                *out.entry(n + m).or_insert_with(BigRational::zero) += a * b;
            }
        }
        Self::finite(self.ctx, out)
    }

    /// `f - w`.
    pub fn sub_constant(&self, w: &BigRational) -> LaurentSeries {
        if w.is_zero() {
            return self.clone();
        }
        self.add(&Self::constant(self.ctx, -w))
            .expect("a constant has finite support and the same prime")
    }

    /// Evaluate the window at `z`, dropping window terms above `truncation`
    /// when given. The returned bound covers both the dropped window terms and
    /// the tails.
    pub fn eval_at(&self, z: &BigRational, truncation: Option<i64>) -> Result<Evaluation> {
        let keep = |n: i64| truncation.is_none_or(|t| n <= t);
        if z.is_zero() {
            if self.n_min().is_some_and(|n| n < 0) || !self.tail_neg.is_zero() {
                return Err(Error::PoleAtOrigin);
            }
            if self.known_hi().is_some_and(|h| h < 0) {
                return Err(Error::WindowInsufficient(
                    "constant coefficient lies in the uncertified tail".into(),
                ));
            }
            let a0 = self.entries.get(&0);
            return Ok(match a0 {
                Some(c) if keep(0) => Evaluation {
                    value: c.clone(),
                    discarded: Valuation::Infinity,
                },
                Some(c) => Evaluation {
                    value: BigRational::zero(),
                    discarded: self.ctx.valuation(c),
                },
                None => Evaluation {
                    value: BigRational::zero(),
                    discarded: Valuation::Infinity,
                },
            });
        }

        let s = self.ctx.valuation(z).finite().cloned().expect("z is nonzero");
        let mut discarded = self.tail_min(&s).map_err(|_| {
            Error::WindowInsufficient(format!("positive tail is not summable at s = {s}"))
        })?;
        let mut value = BigRational::zero();
        for (&n, c) in &self.entries {
            if keep(n) {
                value += c * rational_pow(z, n);
            } else {
                let v = Valuation::Finite(self.coeff_val(c) + &s * int(n));
                discarded = discarded.min(v);
            }
        }
        Ok(Evaluation { value, discarded })
    }

    fn coeff_val(&self, c: &BigRational) -> BigRational {
        int(self.ctx.rational_valuation(c).expect("entries are nonzero"))
    }

    fn check_ctx(&self, other: &LaurentSeries) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch {
                left: self.ctx.p(),
                right: other.ctx.p(),
            });
        }
        Ok(())
    }
}

pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn rational_pow(z: &BigRational, n: i64) -> BigRational {
    let p = num_traits::pow(z.clone(), n.unsigned_abs() as usize);
    if n >= 0 {
        p
    } else {
        p.recip()
    }
}

/// `min { a + c*n^2 + s*n : n integer, n <= last }` for `c > 0`.
pub(crate) fn quadratic_min(
    a: &BigRational,
    c: &BigRational,
    s: &BigRational,
    last: i64,
) -> BigRational {
    let at = |n: &BigInt| {
        let n = BigRational::from_integer(n.clone());
        a + c * &n * &n + s * &n
    };
    let last = BigInt::from(last);
    // real minimizer -s / 2c
    let vertex = -s / (c * int(2));
    if vertex >= BigRational::from_integer(last.clone()) {
        return at(&last);
    }
    let fl = vertex.floor().to_integer();
    let cl = &fl + BigInt::one();
    let cl = if cl > last { last } else { cl };
    match at(&fl).cmp(&at(&cl)) {
        Ordering::Greater => at(&cl),
        _ => at(&fl),
    }
}

/// `floor(sqrt(x))` for a non-negative rational.
pub(crate) fn floor_sqrt(x: &BigRational) -> BigInt {
    x.floor().to_integer().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn zero_tails() -> (TailCertificate, TailCertificate) {
        (
            TailCertificate::zero(TailDirection::Positive),
            TailCertificate::zero(TailDirection::Negative),
        )
    }

    fn poly(p: u64, cs: &[i64]) -> LaurentSeries {
        LaurentSeries::polynomial(ctx(p), cs)
    }

    #[test]
    fn build_drops_zero_coefficients() {
        let (tp, tn) = zero_tails();
        let f = LaurentSeries::build(ctx(2), [(0, q(1, 1)), (3, q(0, 1))], tp, tn).unwrap();
        assert_eq!(f.entries().len(), 1);
        assert_eq!(f.coefficient(0), Some(&q(1, 1)));
        assert_eq!(f.n_max(), Some(0));
    }

    #[test]
    fn build_rejects_duplicates() {
        let (tp, tn) = zero_tails();
        let err = LaurentSeries::build(ctx(2), [(1, q(1, 1)), (1, q(2, 1))], tp, tn);
        assert_eq!(err, Err(Error::DuplicateExponent(1)));
    }

    #[test]
    fn build_reports_extent() {
        let (tp, tn) = zero_tails();
        let f = LaurentSeries::build(ctx(3), [(-2, q(1, 1)), (0, q(1, 1))], tp, tn).unwrap();
        assert_eq!((f.n_min(), f.n_max()), (Some(-2), Some(0)));
    }

    #[test]
    fn build_rejects_misplaced_certificates() {
        let lin = TailCertificate::linear(q(0, 1), q(1, 1));
        let ess = TailCertificate::essential(q(0, 1), q(1, 1));
        let terms = [(0, q(1, 1))];
        let bad_neg = LaurentSeries::build(ctx(2), terms.clone(), lin.clone(), lin.clone());
        assert!(matches!(bad_neg, Err(Error::MalformedCertificate(_))));
        let bad_pos = LaurentSeries::build(ctx(2), terms.clone(), ess.clone(), ess.clone());
        assert!(matches!(bad_pos, Err(Error::MalformedCertificate(_))));
        let flat = TailCertificate::essential(q(0, 1), q(0, 1));
        let bad_c = LaurentSeries::build(ctx(2), terms, lin, flat);
        assert!(matches!(bad_c, Err(Error::MalformedCertificate(_))));
    }

    #[test]
    fn convergence() {
        let f = poly(2, &[1, 1, 1]);
        assert!(f.converges_on(&ValRange::everything()));

        let lin = LaurentSeries::build(
            ctx(2),
            [(0, q(1, 1))],
            TailCertificate::linear(q(0, 1), q(-1, 1)),
            TailCertificate::zero(TailDirection::Negative),
        )
        .unwrap();
        assert!(!lin.converges_on(&ValRange::disc(q(0, 1))));
        assert!(lin.converges_on(&ValRange::disc(q(3, 2))));

        let ess = LaurentSeries::build(
            ctx(2),
            [(0, q(1, 1))],
            TailCertificate::zero(TailDirection::Positive),
            TailCertificate::essential(q(0, 1), q(1, 1)),
        )
        .unwrap();
        assert!(ess.converges_on(&ValRange::closed(q(-3, 1), q(7, 1)).unwrap()));
    }

    #[test]
    fn addition() {
        let f = poly(2, &[1, 1]).add(&poly(2, &[1, -1])).unwrap();
        assert_eq!(f, poly(2, &[2]));
        let g = poly(2, &[2, 1]);
        assert_eq!(g.add(&poly(2, &[])).unwrap(), g);
        assert_eq!(g.add(&poly(2, &[0, 1])).unwrap(), poly(2, &[2, 2]));
        assert_eq!(
            g.add(&poly(3, &[1])),
            Err(Error::ContextMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn addition_folds_into_linear_tail() {
        // f: window [0, 2], tail v >= 5 + n beyond
        let f = LaurentSeries::build(
            ctx(2),
            [(0, q(1, 1)), (2, q(0, 1))],
            TailCertificate::linear(q(5, 1), q(1, 1)),
            TailCertificate::zero(TailDirection::Negative),
        )
        .unwrap();
        assert_eq!(f.window(), Some((0, 2)));
        // g has a known term at 4 which lands in f's unknown tail
        let g = poly(2, &[0, 0, 0, 0, 8]);
        let h = f.add(&g).unwrap();
        assert_eq!(h.window(), Some((0, 2)));
        assert_eq!(h.entries().len(), 1);
        match &h.tail_pos().kind {
            // v(8) - 1*4 = -1 weakens the intercept
            TailKind::LinearBound { a, b } => assert_eq!((a, b), (&q(-1, 1), &q(1, 1))),
            other => panic!("unexpected tail {other:?}"),
        }
    }

    #[test]
    fn addition_of_essential_tails_is_refused() {
        let e = LaurentSeries::build(
            ctx(2),
            [(0, q(1, 1))],
            TailCertificate::zero(TailDirection::Positive),
            TailCertificate::essential(q(0, 1), q(1, 1)),
        )
        .unwrap();
        assert!(matches!(e.add(&e), Err(Error::UnsupportedTail(_))));
        // essential plus a Laurent polynomial reaching below the window
        let g = LaurentSeries::finite(ctx(2), [(-3, q(1, 1))]).unwrap();
        let h = e.add(&g).unwrap();
        match &h.tail_neg().kind {
            TailKind::EssentialQuadratic { a, c } => {
                assert_eq!(c, &q(1, 1));
                assert_eq!(a, &q(-9, 1));
            }
            other => panic!("unexpected tail {other:?}"),
        }
    }

    #[test]
    fn multiplication() {
        assert_eq!(
            poly(5, &[2, 1]).mul(&poly(5, &[1, 1])).unwrap(),
            poly(5, &[2, 3, 1])
        );
        let f = poly(5, &[3, 0, 7]);
        assert_eq!(f.mul(&poly(5, &[1])).unwrap(), f);
        assert_eq!(
            poly(5, &[-1, 1]).mul(&poly(5, &[1, 1])).unwrap(),
            poly(5, &[-1, 0, 1])
        );
        let lin = LaurentSeries::build(
            ctx(5),
            [(0, q(1, 1))],
            TailCertificate::linear(q(0, 1), q(1, 1)),
            TailCertificate::zero(TailDirection::Negative),
        )
        .unwrap();
        assert!(matches!(lin.mul(&f), Err(Error::UnsupportedTail(_))));
    }

    #[test]
    fn subtract_constant() {
        assert_eq!(poly(3, &[1, 3, 1]).sub_constant(&q(1, 1)), poly(3, &[0, 3, 1]));
        let f = poly(3, &[4, 1]);
        assert_eq!(f.sub_constant(&q(0, 1)), f);
        assert_eq!(poly(3, &[0, 1]).sub_constant(&q(5, 1)), poly(3, &[-5, 1]));
    }

    #[test]
    fn evaluation() {
        let e = poly(2, &[2, 1]).eval_at(&q(2, 1), None).unwrap();
        assert_eq!(e.value, q(4, 1));
        assert_eq!(e.discarded, Valuation::Infinity);
        let e = poly(2, &[1, 1]).eval_at(&q(0, 1), None).unwrap();
        assert_eq!(e.value, q(1, 1));
        let pole = LaurentSeries::finite(ctx(2), [(-1, q(1, 1)), (1, q(1, 1))]).unwrap();
        assert_eq!(pole.eval_at(&q(0, 1), None), Err(Error::PoleAtOrigin));
    }

    #[test]
    fn evaluation_bounds_tails() {
        // 1 + tail with v(a_n) >= n for n >= 1; at z = 2 the tail terms have v >= 2n >= 2
        let f = LaurentSeries::build(
            ctx(2),
            [(0, q(1, 1))],
            TailCertificate::linear(q(0, 1), q(1, 1)),
            TailCertificate::zero(TailDirection::Negative),
        )
        .unwrap();
        let e = f.eval_at(&q(2, 1), None).unwrap();
        assert_eq!(e.value, q(1, 1));
        assert_eq!(e.discarded, Valuation::integer(2));
        assert_eq!(e.certified_valuation(f.ctx()), Some(Valuation::integer(0)));
        // at s = -1 the tail is not summable
        assert!(matches!(
            f.eval_at(&q(1, 2), None),
            Err(Error::WindowInsufficient(_))
        ));
    }

    #[test]
    fn evaluation_truncation() {
        let f = poly(3, &[1, 0, 9]);
        let e = f.eval_at(&q(3, 1), Some(1)).unwrap();
        assert_eq!(e.value, q(1, 1));
        assert_eq!(e.discarded, Valuation::integer(4));
    }

    #[test]
    fn quadratic_minimum_matches_scan() {
        for (a, c, s, last) in [
            (q(0, 1), q(1, 1), q(3, 1), -1),
            (q(1, 1), q(1, 2), q(-5, 3), 4),
            (q(2, 1), q(3, 1), q(7, 2), -2),
            (q(0, 1), q(1, 1), q(-40, 1), 0),
        ] {
            let scan = (last - 60..=last)
                .map(|n| &a + &c * int(n) * int(n) + &s * int(n))
                .min()
                .unwrap();
            assert_eq!(quadratic_min(&a, &c, &s, last), scan);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn coeffs() -> impl Strategy<Value = Vec<i64>> {
            prop::collection::vec(-40i64..40, 0..7)
        }

        fn schoolbook(a: &[i64], b: &[i64]) -> Vec<i64> {
            if a.is_empty() || b.is_empty() {
                return vec![];
            }
            let mut out = vec![0; a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        }

        fn horner(cs: &[i64], z: &BigRational) -> BigRational {
            cs.iter()
                .rev()
                .fold(BigRational::zero(), |acc, c| acc * z + int(*c))
        }

        proptest! {
            #[test]
            fn product_is_convolution(a in coeffs(), b in coeffs()) {
                let f = poly(3, &a).mul(&poly(3, &b)).unwrap();
                prop_assert_eq!(f, poly(3, &schoolbook(&a, &b)));
            }

            #[test]
            fn eval_matches_horner(a in coeffs(), n in -30i64..30, d in 1i64..30) {
                prop_assume!(n != 0);
                let z = q(n, d);
                let e = poly(2, &a).eval_at(&z, None).unwrap();
                prop_assert_eq!(e.value, horner(&a, &z));
                prop_assert_eq!(e.discarded, Valuation::Infinity);
            }

            #[test]
            fn convergence_is_monotone(b in -5i64..5, lo in -6i64..6, w in 0i64..6, sub in 0i64..6) {
                let f = LaurentSeries::build(
                    ctx(2),
                    [(0, q(1, 1))],
                    TailCertificate::linear(q(0, 1), int(b)),
                    TailCertificate::essential(q(0, 1), q(1, 1)),
                ).unwrap();
                let outer = ValRange::closed(int(lo), int(lo + w)).unwrap();
                let inner = ValRange::closed(int(lo + sub.min(w)), int(lo + w)).unwrap();
                if f.converges_on(&outer) {
                    prop_assert!(f.converges_on(&inner));
                }
            }
        }
    }
}

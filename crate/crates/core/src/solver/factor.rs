//! Splitting a polynomial into factors with one Newton slope each.
//!
//! At a vertex `i` of the Newton polygon, pick `μ` strictly between the two
//! adjacent corner positions so that `a_i z^i` dominates `f` in the Gauss
//! norm at `s = μ`. Then `f = a_i * G * H` with `G` monic of degree `i`
//! dominated by `z^i` and `H` dominated by `1`. Starting from the obvious
//! split of the coefficients, each step divides the residual `E = f/a_i - GH`
//! by `G` (`E = QG + R`) and updates `G += R`, `H += Q`; the residual shrinks
//! by a fixed weighted-valuation gap every step. Factors are split off from
//! the leftmost slope onwards.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::hensel::PadicApprox;
use crate::error::{Error, Result};
use crate::polygon::NewtonPolygon;
use crate::series::{int, LaurentSeries};
use crate::valuation::{truncate, PrimeContext};

/// Working-precision schedule for lifting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub initial: u32,
    pub max: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self {
            initial: 20,
            max: 1 << 14,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeFactor {
    pub slope: BigRational,
    pub degree: u64,
    /// Primitive integral coefficients, lowest degree first; monic when the
    /// roots are integral, constant term 1 otherwise.
    pub coefficients: Vec<PadicApprox>,
}

impl SlopeFactor {
    pub fn root_valuation(&self) -> BigRational {
        -&self.slope
    }
}

/// `f = unit * z^shift * prod(factors)`, coefficients agreeing modulo
/// `p^precision` once denominators are cleared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeFactorization {
    pub unit: BigRational,
    pub shift: i64,
    pub factors: Vec<SlopeFactor>,
    pub precision: u32,
    pub working_precision: u32,
}

impl SlopeFactorization {
    /// Product of the factors as integers (lowest degree first).
    pub fn factor_product(&self) -> Vec<BigInt> {
        self.factors.iter().fold(vec![BigInt::one()], |acc, f| {
            let coeffs: Vec<BigInt> = f.coefficients.iter().map(|c| c.value().clone()).collect();
            int_mul(&acc, &coeffs)
        })
    }

    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|f| f.degree).sum()
    }
}

pub fn slope_factorization(f: &LaurentSeries, precision: u32) -> Result<SlopeFactorization> {
    slope_factorization_with(f, precision, &PrecisionPolicy::default())
}

pub fn slope_factorization_with(
    f: &LaurentSeries,
    precision: u32,
    policy: &PrecisionPolicy,
) -> Result<SlopeFactorization> {
    if f.is_zero() {
        return Err(Error::ZeroSeries);
    }
    if !f.is_finite_support() {
        return Err(Error::UnsupportedTail("factorization needs finite support".into()));
    }
    let ctx = *f.ctx();
    let shift = f.n_min().expect("nonzero");
    let degree = (f.n_max().expect("nonzero") - shift) as usize;
    let mut coeffs = vec![BigRational::zero(); degree + 1];
    for (n, c) in f.entries() {
        coeffs[(n - shift) as usize] = c.clone();
    }

    if degree == 0 {
        return Ok(SlopeFactorization {
            unit: coeffs[0].clone(),
            shift,
            factors: Vec::new(),
            precision,
            working_precision: 0,
        });
    }

    let mut work = policy.initial.max(1);
    loop {
        if work >= 2 * precision {
            if let Some(found) = attempt(&coeffs, &ctx, precision, work)? {
                return Ok(SlopeFactorization {
                    shift,
                    ..found
                });
            }
        }
        if work >= policy.max {
            return Err(Error::PrecisionExhausted { precision: work });
        }
        work = work.saturating_mul(2).min(policy.max);
    }
}

type Poly = Vec<BigRational>;

fn points(poly: &[BigRational], ctx: &PrimeContext) -> Vec<(i64, BigRational)> {
    poly.iter()
        .enumerate()
        .filter_map(|(i, c)| ctx.rational_valuation(c).map(|v| (i as i64, int(v))))
        .collect()
}

fn min_valuation(poly: &[BigRational], ctx: &PrimeContext) -> i64 {
    poly.iter()
        .filter_map(|c| ctx.rational_valuation(c))
        .min()
        .expect("nonzero polynomial")
}

/// One factorization pass at a fixed working precision. `Ok(None)` asks the
/// caller for more precision.
fn attempt(
    coeffs: &[BigRational],
    ctx: &PrimeContext,
    precision: u32,
    work: u32,
) -> Result<Option<SlopeFactorization>> {
    let work_i = work as i64;
    let mut unit = BigRational::one();
    let mut parts: Vec<(BigRational, Poly)> = Vec::new();
    let mut rest: Poly = coeffs.to_vec();

    loop {
        let np = NewtonPolygon::from_points(&points(&rest, ctx));
        if np.vertices[0].0 != 0 || np.degree() as usize != rest.len() - 1 {
            // truncation destroyed an end coefficient
            return Ok(None);
        }
        if np.segments.len() == 1 {
            parts.push((np.segments[0].slope.clone(), rest));
            break;
        }
        let i = np.vertices[1].0 as usize;
        let mu = -(&np.segments[0].slope + &np.segments[1].slope) / int(2);
        let Some((lead, g, h)) = split(&rest, i, &mu, ctx, work_i) else {
            return Ok(None);
        };
        unit *= lead;
        parts.push((np.segments[0].slope.clone(), g));
        rest = h;
    }

    let mut factors = Vec::with_capacity(parts.len());
    for (slope, part) in parts {
        // monic when the top coefficient is a unit, else constant term 1
        let e = min_valuation(&part, ctx);
        let top = part.last().expect("nonempty");
        let anchor = if ctx.rational_valuation(top) == Some(e) {
            top.clone()
        } else {
            part[0].clone()
        };
        let scale = anchor.recip();
        unit *= &anchor;
        let coefficients = part
            .iter()
            .map(|c| {
                // p-integral after scaling; reduce the unit part mod p^N
                let x = truncate(&(c * &scale), ctx, precision as i64);
                if !x.is_integer() {
                    return None;
                }
                Some(PadicApprox::new(*ctx, x.to_integer(), precision))
            })
            .collect::<Option<Vec<_>>>();
        let Some(coefficients) = coefficients else {
            return Ok(None);
        };
        factors.push(SlopeFactor {
            slope,
            degree: (part.len() - 1) as u64,
            coefficients,
        });
    }

    let mut found = SlopeFactorization {
        unit,
        shift: 0,
        factors,
        precision,
        working_precision: work,
    };
    if !residual_ok(coeffs, &found, ctx) {
        return Ok(None);
    }
    // The unit is only determined to relative precision p^N; report the
    // simplest representative that still passes.
    let product = found.factor_product();
    let mut candidates: Vec<BigRational> = coeffs
        .iter()
        .zip(&product)
        .filter(|(c, pj)| !c.is_zero() && !pj.is_zero())
        .map(|(c, pj)| c / BigRational::from_integer(pj.clone()))
        .collect();
    candidates.sort_by_key(|u| u.numer().bits() + u.denom().bits());
    let original = found.unit.clone();
    for u in candidates {
        found.unit = u;
        if residual_ok(coeffs, &found, ctx) {
            return Ok(Some(found));
        }
    }
    found.unit = original;
    Ok(Some(found))
}

/// Whether `L*f` and `L*unit*prod(factors)` agree modulo `p^precision`, `L`
/// the lcm of the denominators of `f`.
fn residual_ok(coeffs: &[BigRational], fz: &SlopeFactorization, ctx: &PrimeContext) -> bool {
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let lcm = BigRational::from_integer(lcm);
    let scaled_unit = &lcm * &fz.unit;
    let product = fz.factor_product();
    if product.len() != coeffs.len() {
        return false;
    }
    coeffs.iter().zip(&product).all(|(c, pj)| {
        let diff = &lcm * c - &scaled_unit * BigRational::from_integer(pj.clone());
        ctx.rational_valuation(&diff)
            .is_none_or(|v| v >= fz.precision as i64)
    })
}

/// Weighted valuation `min_j v(c_j) + j*mu` (None for the zero polynomial).
fn weighted(poly: &[BigRational], mu: &BigRational, ctx: &PrimeContext) -> Option<BigRational> {
    poly.iter()
        .enumerate()
        .filter_map(|(j, c)| ctx.rational_valuation(c).map(|v| int(v) + int(j as i64) * mu))
        .min()
}

/// Split `f = lead * G * H` at vertex `i`; `None` if the residual does not
/// vanish to half the working precision within the iteration budget.
fn split(
    f: &[BigRational],
    i: usize,
    mu: &BigRational,
    ctx: &PrimeContext,
    work: i64,
) -> Option<(BigRational, Poly, Poly)> {
    let lead = f[i].clone();
    let fnorm: Poly = f.iter().map(|c| truncate(&(c / &lead), ctx, work)).collect();
    let mut g: Poly = fnorm[..i].to_vec();
    g.push(BigRational::one());
    let mut h: Poly = vec![BigRational::one()];
    h.extend_from_slice(&fnorm[i + 1..]);

    let base = int(i as i64) * mu;
    let gap_g = weighted(&g[..i], mu, ctx).map(|w| w - &base);
    let gap_h = weighted(&h[1..], mu, ctx).map(|w| w + mu);
    let gap = [gap_g, gap_h].into_iter().flatten().min()?;
    debug_assert!(gap.is_positive());

    let stop = work / 2;
    let spread = mu.abs() * int(f.len() as i64) + int(stop + 8);
    let budget = (spread / &gap).ceil().to_integer();
    let budget: usize = budget.try_into().unwrap_or(usize::MAX).saturating_add(16);

    for _ in 0..budget {
        let prod = poly_mul(&g, &h);
        let resid: Poly = (0..fnorm.len())
            .map(|j| {
                let pj = prod.get(j).cloned().unwrap_or_else(BigRational::zero);
                truncate(&(&fnorm[j] - pj), ctx, work)
            })
            .collect();
        let done = resid
            .iter()
            .all(|c| ctx.rational_valuation(c).is_none_or(|v| v >= stop));
        if done {
            return Some((lead, g, h));
        }
        let (quot, rem) = divrem_monic(&resid, &g);
        for (j, r) in rem.into_iter().enumerate() {
            g[j] = truncate(&(&g[j] + r), ctx, work);
        }
        for (j, qj) in quot.into_iter().enumerate() {
            if j < h.len() {
                h[j] = truncate(&(&h[j] + qj), ctx, work);
            } else {
                h.push(truncate(&qj, ctx, work));
            }
        }
    }
    None
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Division by a monic polynomial: `(quotient, remainder)` with
/// `deg remainder < deg divisor`.
fn divrem_monic(num: &[BigRational], den: &[BigRational]) -> (Poly, Poly) {
    let d = den.len() - 1;
    debug_assert!(den[d].is_one());
    let mut rem = num.to_vec();
    if rem.len() <= d {
        rem.resize(d, BigRational::zero());
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - d];
    for k in (0..quot.len()).rev() {
        let c = rem[k + d].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    rem.truncate(d);
    (quot, rem)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, cs: &[i64]) -> LaurentSeries {
        LaurentSeries::polynomial(PrimeContext::new(p).unwrap(), cs)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn single_slope(f: &SlopeFactor) -> bool {
        let pts: Vec<(i64, BigRational)> = f
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.value().is_zero())
            .map(|(i, c)| (i as i64, int(c.valuation() as i64)))
            .collect();
        let np = NewtonPolygon::from_points(&pts);
        np.segments.len() == 1 && np.segments[0].slope == f.slope
    }

    #[test]
    fn splits_distinct_slopes() {
        let ctx = PrimeContext::new(2).unwrap();
        let fz = slope_factorization(&poly(2, &[2, 3, 1]), 20).unwrap();
        let mut slopes: Vec<(BigRational, u64)> =
            fz.factors.iter().map(|f| (f.slope.clone(), f.degree)).collect();
        slopes.sort();
        assert_eq!(slopes, vec![(q(-1, 1), 1), (q(0, 1), 1)]);
        assert_eq!(fz.unit, int(1), "{fz:?}");
        assert!(fz.factors.iter().all(single_slope));
        assert!(residual_ok(
            &[int(2), int(3), int(1)],
            &fz,
            &ctx
        ));
    }

    #[test]
    fn fractional_slope_stays_whole() {
        let fz = slope_factorization(&poly(2, &[-2, 0, 1]), 20).unwrap();
        assert_eq!(fz.factors.len(), 1);
        assert_eq!(fz.factors[0].degree, 2);
        assert_eq!(fz.factors[0].slope, q(-1, 2));
    }

    #[test]
    fn constant_has_no_factors() {
        let fz = slope_factorization(&poly(3, &[7]), 20).unwrap();
        assert!(fz.factors.is_empty());
        assert_eq!(fz.unit, int(7));
    }

    #[test]
    fn monomial_shift_and_rational_coefficients() {
        let ctx = PrimeContext::new(3).unwrap();
        // z^2 * (1/3 + z + 9/2 z^2)
        let f = LaurentSeries::finite(ctx, [(2, q(1, 3)), (3, q(1, 1)), (4, q(9, 2))]).unwrap();
        let fz = slope_factorization(&f, 30).unwrap();
        assert_eq!(fz.shift, 2);
        assert_eq!(fz.degree(), 2);
        assert!(residual_ok(&[q(1, 3), q(1, 1), q(9, 2)], &fz, &ctx));
        assert!(fz.factors.iter().all(single_slope));
    }

    #[test]
    fn many_slopes() {
        let ctx = PrimeContext::new(5).unwrap();
        // (z - 25)(z - 5)(z - 1)(z - 1/5)(5z^2 - 1)
        let lin = |r: BigRational| LaurentSeries::finite(ctx, [(0, -r), (1, int(1))]).unwrap();
        let f = [q(25, 1), q(5, 1), q(1, 1), q(1, 5)]
            .into_iter()
            .map(lin)
            .fold(poly(5, &[-1, 0, 5]), |acc, g| acc.mul(&g).unwrap());
        let fz = slope_factorization(&f, 20).unwrap();
        assert_eq!(fz.degree(), 6);
        assert_eq!(fz.factors.len(), 5);
        assert!(fz.factors.iter().all(single_slope));
    }

    #[test]
    fn unit_denominators_in_a_single_slope() {
        let ctx = PrimeContext::new(3).unwrap();
        // 1/9 z^-2 + 2 - 3/2 z + 27 z^3: one segment, 2 is a 3-adic unit
        let f = LaurentSeries::finite(ctx, [(-2, q(1, 9)), (0, int(2)), (1, q(-3, 2)), (3, int(27))])
            .unwrap();
        let fz = slope_factorization(&f, 12).unwrap();
        assert_eq!((fz.shift, fz.factors.len()), (-2, 1));
        assert!(residual_ok(&[q(1, 9), int(0), int(2), q(-3, 2), int(0), int(27)], &fz, &ctx));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let policy = PrecisionPolicy { initial: 4, max: 8 };
        let r = slope_factorization_with(&poly(2, &[2, 3, 1]), 20, &policy);
        assert!(matches!(r, Err(Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn monic_division() {
        // (z^3 + 2z + 5) / (z - 1) = z^2 + z + 3, remainder 8
        let (quot, rem) = divrem_monic(&[int(5), int(2), int(0), int(1)], &[int(-1), int(1)]);
        assert_eq!(quot, vec![int(3), int(1), int(1)]);
        assert_eq!(rem, vec![int(8)]);
    }
}

//! Zero counts read off a product with known roots, for cross-checking the
//! polygon engine. Nothing here looks at Newton polygons or envelopes.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::series::{LaurentSeries, ValRange};
use crate::valuation::{PrimeContext, Valuation};

/// A factor together with the valuations of its roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnownFactor {
    pub coefficients: Vec<BigRational>,
    pub root_valuations: Vec<Valuation>,
}

impl KnownFactor {
    /// `z - root`.
    pub fn linear(ctx: &PrimeContext, root: BigRational) -> Self {
        let v = ctx.valuation(&root);
        Self {
            coefficients: vec![-root, BigRational::one()],
            root_valuations: vec![v],
        }
    }

    /// `z^2 - c` with `c != 0`: both roots have valuation `v(c)/2`.
    pub fn pure_quadratic(ctx: &PrimeContext, c: BigRational) -> Self {
        assert!(!c.is_zero(), "z^2 has a double root at the origin");
        let half = ctx.valuation(&c).finite().expect("nonzero") / BigRational::from_integer(2.into());
        Self {
            coefficients: vec![-c, BigRational::zero(), BigRational::one()],
            root_valuations: vec![Valuation::Finite(half.clone()), Valuation::Finite(half)],
        }
    }
}

/// An explicit product of factors with known roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootConstruction {
    pub ctx: PrimeContext,
    pub factors: Vec<KnownFactor>,
}

impl RootConstruction {
    pub fn new(ctx: PrimeContext) -> Self {
        Self {
            ctx,
            factors: Vec::new(),
        }
    }

    pub fn with(mut self, factor: KnownFactor) -> Self {
        self.factors.push(factor);
        self
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|f| f.root_valuations.len()).sum()
    }

    /// The expanded polynomial.
    pub fn product(&self) -> LaurentSeries {
        self.factors
            .iter()
            .map(|f| {
                LaurentSeries::finite(
                    self.ctx,
                    f.coefficients.iter().cloned().enumerate().map(|(i, c)| (i as i64, c)),
                )
                .expect("distinct exponents")
            })
            .fold(
                LaurentSeries::constant(self.ctx, BigRational::one()),
                |acc, g| acc.mul(&g).expect("finite support"),
            )
    }
}

/// Roots of the construction whose valuation lies in `range`. A root at the
/// origin counts only when the range reaches it.
pub fn oracle_zero_count(construction: &RootConstruction, range: &ValRange) -> u64 {
    construction
        .factors
        .iter()
        .flat_map(|f| &f.root_valuations)
        .filter(|v| match v {
            Valuation::Finite(s) => range.contains(s),
            Valuation::Infinity => range.hi().is_none(),
        })
        .count() as u64
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::valuation::{mod_inverse, PrimeContext};

/// A p-adic integer known modulo `p^precision`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicApprox {
    ctx: PrimeContext,
    value: BigInt,
    precision: u32,
}

impl PadicApprox {
    /// Reduces `value` into `[0, p^precision)`.
    pub fn new(ctx: PrimeContext, value: BigInt, precision: u32) -> Self {
        let value = value.mod_floor(&ctx.pow(precision));
        Self {
            ctx,
            value,
            precision,
        }
    }

    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> BigInt {
        self.ctx.pow(self.precision)
    }

    /// Valuation, capped at the precision (a value known to be 0 mod p^N
    /// reports N).
    pub fn valuation(&self) -> u32 {
        self.ctx
            .int_valuation(&self.value)
            .map_or(self.precision, |v| v as u32)
    }
}

/// Integer polynomial, lowest degree first.
pub type IntPoly = [BigInt];

pub fn eval_int(poly: &IntPoly, z: &BigInt) -> BigInt {
    poly.iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * z + c)
}

pub fn derivative(poly: &IntPoly) -> Vec<BigInt> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

const MAX_NEWTON_STEPS: usize = 64;

/// Lift `seed` to a root of `poly` known modulo `p^target`.
///
/// Requires `v(f(seed)) >= 2*v(f'(seed)) + 1` with `f'(seed) != 0`. The
/// iteration runs until `v(f(z)) >= target + v(f'(z))`, which pins the root
/// itself down modulo `p^target`.
pub fn hensel_refine_root(
    poly: &IntPoly,
    ctx: &PrimeContext,
    seed: &PadicApprox,
    target: u32,
) -> Result<PadicApprox> {
    let dpoly = derivative(poly);
    let mut z = seed.value().clone();
    let mut fz = eval_int(poly, &z);
    if fz.is_zero() {
        return Ok(PadicApprox::new(*ctx, z, target));
    }
    let dz = eval_int(&dpoly, &z);
    let Some(k) = ctx.int_valuation(&dz) else {
        return Err(Error::NotLiftable("derivative vanishes at the seed".into()));
    };
    let k = k as u32;
    let vf = ctx.int_valuation(&fz).expect("nonzero") as u32;
    if vf < 2 * k + 1 {
        return Err(Error::NotLiftable(format!(
            "v(f(seed)) = {vf} < 2*v(f'(seed)) + 1 = {}",
            2 * k + 1
        )));
    }

    let work = ctx.pow(target + 2 * k + 1);
    let pk = ctx.pow(k);
    for _ in 0..MAX_NEWTON_STEPS {
        match ctx.int_valuation(&fz) {
            None => break,
            Some(v) if v as u32 >= target + k => break,
            Some(_) => {}
        }
        let dz = eval_int(&dpoly, &z);
        let unit = &dz / &pk;
        let inv = mod_inverse(&unit, &work).expect("f'(z) / p^k is a unit");
        z = (&z - (&fz / &pk) * inv).mod_floor(&work);
        fz = eval_int(poly, &z);
    }
    if ctx.int_valuation(&fz).is_some_and(|v| (v as u32) < target + k) {
        return Err(Error::PrecisionExhausted { precision: target });
    }
    Ok(PadicApprox::new(*ctx, z, target))
}

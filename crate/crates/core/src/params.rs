//! Parameter arithmetic for t-designs: the replication numbers
//! `λ_s = λ·C(v−s, t−s)/C(k−s, t−s)` and admissibility of `t` for a
//! block-transitive group of given order.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for j in 0..r {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// Exact `λ_s` for a `t-(v,k,λ)` design.
pub fn lambda_s(t: u64, v: u64, k: u64, lambda: u64, s: u64) -> Result<BigRational> {
    if !(s <= t && t <= k && k <= v) {
        return Err(Error::Precondition(format!(
            "need s <= t <= k <= v, got s={s} t={t} k={k} v={v}"
        )));
    }
    let num = BigUint::from(lambda) * binomial(v - s, t - s);
    let den = binomial(k - s, t - s);
    Ok(BigRational::new(num.into(), den.into()))
}

/// `∏(v−j)/∏(k−j)` over `j < t`, reduced. This is `b/λ_t`.
pub fn block_ratio(v: u64, k: u64, t: u64) -> (BigUint, BigUint) {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..t {
        num *= v - j;
        den *= k - j;
    }
    let g = num.gcd(&den);
    (num / &g, den / g)
}

/// Whether some `λ_t ≥ 1` makes `b = λ_t·∏(v−j)/∏(k−j)` an integer dividing
/// `group_order`. With the ratio reduced to `p/q`, the smallest such `b` is
/// `p`, and every admissible `b` is a multiple of it.
pub fn admissible_t(v: u64, k: u64, t: u64, group_order: &BigUint) -> bool {
    let (p, _) = block_ratio(v, k, t);
    (group_order % p).is_zero()
}

/// Derived counts of a `t-(v,k,λ)` design.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignParams {
    pub t: u64,
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub b: u64,
    pub gamma: u64,
}

impl DesignParams {
    /// Fails unless every `λ_s`, `0 ≤ s ≤ t`, is an integer.
    pub fn new(t: u64, v: u64, k: u64, lambda: u64) -> Result<Self> {
        if t == 0 || lambda == 0 {
            return Err(Error::Precondition("t and λ must be positive".into()));
        }
        let mut ls = Vec::with_capacity(t as usize + 1);
        for s in 0..=t {
            let r = lambda_s(t, v, k, lambda, s)?;
            if !r.is_integer() {
                return Err(Error::Precondition(format!(
                    "λ_{s} = {r} is not an integer for {t}-({v},{k},{lambda})"
                )));
            }
            let n: u64 = r.to_integer().try_into().map_err(|_| {
                Error::Unsupported(format!("λ_{s} does not fit in 64 bits"))
            })?;
            ls.push(n);
        }
        Ok(Self {
            t,
            v,
            k,
            lambda,
            b: ls[0],
            gamma: ls[1],
        })
    }

    /// The `2-(k²,k,λ)` parameters, with `b = λk(k+1)`.
    pub fn square(k: u64, lambda: u64) -> Result<Self> {
        Self::new(2, k * k, k, lambda)
    }
}

//! Exact integer helpers: prime powers, p-parts, factorization strings and
//! the orders of the classical groups that appear in point-stabilizer
//! formulas.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_prime::nt_funcs::{factorize64, is_prime64};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    is_prime64(n)
}

/// `q = p^f` with `p` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimePower {
    pub p: u64,
    pub f: u32,
    pub q: u64,
}

impl PrimePower {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::Precondition(format!("{q} is not a prime power")));
        }
        let p = (2..).find(|d| q % d == 0).unwrap();
        if !is_prime(p) {
            unreachable!("least divisor is prime");
        }
        let mut r = q;
        let mut f = 0;
        while r % p == 0 {
            r /= p;
            f += 1;
        }
        if r != 1 {
            return Err(Error::Precondition(format!("{q} is not a prime power")));
        }
        Ok(Self { p, f, q })
    }

    pub fn is_prime(&self) -> bool {
        self.f == 1
    }

    pub fn big(&self) -> BigUint {
        BigUint::from(self.q)
    }
}

impl TryFrom<u64> for PrimePower {
    type Error = Error;
    fn try_from(q: u64) -> Result<Self> {
        Self::new(q)
    }
}

impl From<PrimePower> for u64 {
    fn from(q: PrimePower) -> u64 {
        q.q
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

/// Prime powers in `lo..=hi`, ascending.
pub fn prime_powers(lo: u64, hi: u64) -> Vec<PrimePower> {
    (lo.max(2)..=hi).filter_map(|q| PrimePower::new(q).ok()).collect()
}

/// Largest power of `p` dividing `m` (`m ≥ 1`).
pub fn p_part(m: &BigUint, p: u64) -> BigUint {
    let mut r = BigUint::one();
    if m.is_zero() {
        return r;
    }
    let mut m = m.clone();
    let p = BigUint::from(p);
    loop {
        let (d, rem) = m.div_rem(&p);
        if !rem.is_zero() {
            return r;
        }
        r *= &p;
        m = d;
    }
}

/// `m` with every factor of `p` removed.
pub fn p_prime_part(m: &BigUint, p: u64) -> BigUint {
    m / p_part(m, p)
}

/// Exact square root, if `m` is a perfect square.
pub fn exact_sqrt(m: &BigUint) -> Option<BigUint> {
    let r = m.sqrt();
    (&r * &r == *m).then_some(r)
}

pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

/// Prime factorization, when `m` fits in 64 bits.
pub fn factorize(m: &BigUint) -> Option<BTreeMap<u64, usize>> {
    let m = m.to_u64()?;
    if m == 0 {
        return None;
    }
    Some(factorize64(m))
}

/// Table-style factorization, e.g. `2^4·3^2`; `1` for the empty product.
pub fn format_factors(f: &BTreeMap<u64, usize>) -> String {
    if f.is_empty() {
        return "1".into();
    }
    f.iter()
        .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join("·")
}

/// Parses the output of [`format_factors`] back into an integer.
pub fn parse_factors(s: &str) -> Result<BigUint> {
    let mut acc = BigUint::one();
    for term in s.split('·') {
        let (b, e) = match term.split_once('^') {
            Some((b, e)) => (b, e),
            None => (term, "1"),
        };
        let b: u64 = b.trim().parse().map_err(|_| Error::Format(format!("bad factor {term:?}")))?;
        let e: u32 = e.trim().parse().map_err(|_| Error::Format(format!("bad exponent {term:?}")))?;
        acc *= BigUint::from(b).pow(e);
    }
    Ok(acc)
}

fn pow(q: u64, e: u64) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

/// `q^e − 1`.
fn qm1(q: u64, e: u64) -> BigUint {
    pow(q, e) - 1u32
}

/// `∏_{j=1..n} (q^j − 1)`.
fn cyclotomic_product(n: u64, q: u64) -> BigUint {
    (1..=n).map(|j| qm1(q, j)).product()
}

pub fn gl_order(n: u64, q: u64) -> BigUint {
    pow(q, n * (n - 1) / 2) * cyclotomic_product(n, q)
}

pub fn sl_order(n: u64, q: u64) -> BigUint {
    sl_order_big(n, &BigUint::from(q))
}

/// `|SL(n,Q)|` for a field order `Q` that may not fit in 64 bits.
pub fn sl_order_big(n: u64, q: &BigUint) -> BigUint {
    let mut acc = q.pow((n * n.saturating_sub(1) / 2) as u32);
    for j in 2..=n {
        acc *= q.pow(j as u32) - 1u32;
    }
    acc
}

/// `|PGL(n,q)| = |SL(n,q)|`.
pub fn pgl_order(n: u64, q: u64) -> BigUint {
    sl_order(n, q)
}

pub fn psl_order(n: u64, q: u64) -> BigUint {
    sl_order(n, q) / n.gcd(&(q - 1))
}

/// `|Sp(n,q)|`, `n` even.
pub fn sp_order(n: u64, q: u64) -> BigUint {
    let m = n / 2;
    pow(q, m * m) * (1..=m).map(|j| qm1(q, 2 * j)).product::<BigUint>()
}

/// Sign of an orthogonal form: `+`, `−`, or `∘` for odd dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FormSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "o")]
    Circle,
}

/// `|SO^ε(n,q)|`, `q` odd.
pub fn so_order(n: u64, q: u64, eps: FormSign) -> BigUint {
    if n % 2 == 1 {
        let m = (n - 1) / 2;
        return pow(q, m * m) * (1..=m).map(|j| qm1(q, 2 * j)).product::<BigUint>();
    }
    let m = n / 2;
    let qm = pow(q, m);
    let top = match eps {
        FormSign::Minus => qm + 1u32,
        _ => qm - 1u32,
    };
    pow(q, m * (m - 1)) * top * (1..m).map(|j| qm1(q, 2 * j)).product::<BigUint>()
}

/// `|PSO^ε(n,q)|`, `q` odd: the centre `{±1}` of `SO` is nontrivial only in
/// even dimension.
pub fn pso_order(n: u64, q: u64, eps: FormSign) -> BigUint {
    let so = so_order(n, q, eps);
    if n % 2 == 0 {
        so / 2u32
    } else {
        so
    }
}

/// `|SU(n,q0)|`.
pub fn su_order(n: u64, q0: u64) -> BigUint {
    let mut acc = pow(q0, n * (n - 1) / 2);
    for j in 2..=n {
        let qj = pow(q0, j);
        acc *= if j % 2 == 0 { qj - 1u32 } else { qj + 1u32 };
    }
    acc
}

/// Gaussian binomial `[n, i]_q`.
pub fn gaussian_binomial(n: u64, i: u64, q: u64) -> BigUint {
    if i > n {
        return BigUint::zero();
    }
    let num: BigUint = (0..i).map(|j| qm1(q, n - j)).product();
    let den: BigUint = (1..=i).map(|j| qm1(q, j)).product();
    num / den
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

//! Arithmetic screening of `2-(k²,k,λ)` parameters for a block-transitive
//! group with socle `X = PSL(n,q)`, one maximal point-stabilizer type at a
//! time.
//!
//! Each case yields `v = |X|/|H₀|`, a perfect-square test, the divisibility
//! gate (`k+1` divides every subdegree and `|Out X|·|H₀|`, modulo `v−1`) and
//! the order inequality `|X| < |Out X|²·|H₀|·|H₀|²_{p′}` for non-parabolic
//! stabilizers. All arithmetic is exact.

pub mod arith;
pub mod sporadic;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use arith::{p_part, FormSign, PrimePower};
use arith::*;
use sporadic::S_ROWS;

/// Largest dimension accepted by [`case_screen`].
pub const MAX_N: u32 = 12;
/// Largest field order accepted by [`case_screen`].
pub const MAX_Q: u64 = 1 << 14;
/// Field orders scanned by default, except for the subfield families.
pub const DEFAULT_Q_MAX: u64 = 1 << 10;

/// Order of `PSL(n,q)`.
pub fn x_order(n: u32, q: u64) -> BigUint {
    psl_order(n as u64, q)
}

/// `|Out(PSL(n,q))| = 2f·(n, q−1)`.
pub fn out_order(n: u32, q: PrimePower) -> u64 {
    2 * q.f as u64 * (n as u64).gcd(&(q.q - 1))
}

/// Maximal subgroup types, with their structural parameters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Family {
    /// Stabilizer of an `i`-space.
    C1Parabolic { i: u32 },
    /// Stabilizer of `{U, W}`, `dim U = i < n/2`, under a graph automorphism;
    /// `nested` when `U ⊂ W`, otherwise `U ∩ W = 0`.
    C1Novelty { i: u32, nested: bool },
    /// `GL(e,q) ≀ S_a`.
    C2 { a: u32, e: u32 },
    /// `GL(i, q^θ)`, `θ` prime.
    C3 { i: u32, theta: u32 },
    /// `GL(i,q) ⊗ GL(n/i,q)`.
    C4 { i: u32 },
    /// `GL(n, q₀)`, `q = q₀^u`.
    C5 { q0: u64, u: u32 },
    /// `ω^{2i}.Sp(2i,ω)`; `quoted_order` selects the order 360 stated for
    /// `(i,ω) = (2,2)` instead of the order 5760 of `2⁴:A₆`.
    C6 { i: u32, omega: u32, quoted_order: bool },
    /// `GL(i,q) ≀ S_ℓ` acting on a tensor power.
    C7 { i: u32, l: u32 },
    C8Symplectic,
    C8Orthogonal { sign: FormSign },
    /// `GU(n, q₀)`, `q = q₀²`.
    C8Unitary { q0: u64 },
    /// Almost simple, by line of the data table in [`sporadic`].
    S { line: u8 },
}

/// Coarse family, as used by filters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FamilyKey {
    C1,
    #[serde(rename = "C1'")]
    C1Novelty,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    S,
}

impl FamilyKey {
    pub const ALL: [FamilyKey; 10] = [
        FamilyKey::C1,
        FamilyKey::C1Novelty,
        FamilyKey::C2,
        FamilyKey::C3,
        FamilyKey::C4,
        FamilyKey::C5,
        FamilyKey::C6,
        FamilyKey::C7,
        FamilyKey::C8,
        FamilyKey::S,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        let k = match s.to_ascii_uppercase().as_str() {
            "C1" => FamilyKey::C1,
            "C1'" | "C1P" | "C1PRIME" => FamilyKey::C1Novelty,
            "C2" => FamilyKey::C2,
            "C3" => FamilyKey::C3,
            "C4" => FamilyKey::C4,
            "C5" => FamilyKey::C5,
            "C6" => FamilyKey::C6,
            "C7" => FamilyKey::C7,
            "C8" => FamilyKey::C8,
            "S" => FamilyKey::S,
            _ => return Err(Error::Precondition(format!("unknown family {s:?}"))),
        };
        Ok(k)
    }
}

impl fmt::Display for FamilyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyKey::C1 => "C1",
            FamilyKey::C1Novelty => "C1'",
            FamilyKey::C2 => "C2",
            FamilyKey::C3 => "C3",
            FamilyKey::C4 => "C4",
            FamilyKey::C5 => "C5",
            FamilyKey::C6 => "C6",
            FamilyKey::C7 => "C7",
            FamilyKey::C8 => "C8",
            FamilyKey::S => "S",
        };
        f.write_str(s)
    }
}

impl Family {
    pub fn key(&self) -> FamilyKey {
        match self {
            Family::C1Parabolic { .. } => FamilyKey::C1,
            Family::C1Novelty { .. } => FamilyKey::C1Novelty,
            Family::C2 { .. } => FamilyKey::C2,
            Family::C3 { .. } => FamilyKey::C3,
            Family::C4 { .. } => FamilyKey::C4,
            Family::C5 { .. } => FamilyKey::C5,
            Family::C6 { .. } => FamilyKey::C6,
            Family::C7 { .. } => FamilyKey::C7,
            Family::C8Symplectic | Family::C8Orthogonal { .. } | Family::C8Unitary { .. } => FamilyKey::C8,
            Family::S { .. } => FamilyKey::S,
        }
    }

    fn is_parabolic(&self) -> bool {
        matches!(self, Family::C1Parabolic { .. } | Family::C1Novelty { nested: true, .. })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::C1Parabolic { i } => write!(f, "C1(P_{i})"),
            Family::C1Novelty { i, nested: true } => write!(f, "C1'(U⊂W,i={i})"),
            Family::C1Novelty { i, nested: false } => write!(f, "C1'(U∩W=0,i={i})"),
            Family::C2 { a, e } => write!(f, "C2(a={a},e={e})"),
            Family::C3 { i, theta } => write!(f, "C3(i={i},θ={theta})"),
            Family::C4 { i } => write!(f, "C4(i={i})"),
            Family::C5 { q0, u } => write!(f, "C5(q0={q0},u={u})"),
            Family::C6 { i, omega, quoted_order } => {
                write!(f, "C6(i={i},ω={omega}")?;
                if *quoted_order {
                    write!(f, ",|H0|=360")?;
                }
                write!(f, ")")
            }
            Family::C7 { i, l } => write!(f, "C7(i={i},ℓ={l})"),
            Family::C8Symplectic => write!(f, "C8(Sp)"),
            Family::C8Orthogonal { sign } => {
                let s = match sign {
                    FormSign::Plus => "+",
                    FormSign::Minus => "-",
                    FormSign::Circle => "o",
                };
                write!(f, "C8(O{s})")
            }
            Family::C8Unitary { q0 } => write!(f, "C8(U,q0={q0})"),
            Family::S { line } => {
                let name = sporadic::row(*line).map_or("?", |r| r.name);
                write!(f, "S({name})")
            }
        }
    }
}

/// One screening case: a family with its parameters, `n`, and `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseSpec {
    pub family: Family,
    pub n: u32,
    pub q: PrimePower,
}

impl CaseSpec {
    /// Checks the structural constraints tying the family parameters to
    /// `n` and `q`.
    pub fn new(family: Family, n: u32, q: PrimePower) -> Result<Self> {
        let bad = |why: String| Err(Error::Precondition(format!("{family} with n={n}, q={}: {why}", q.q)));
        if n < 3 {
            return bad("need n ≥ 3".into());
        }
        match family {
            Family::C1Parabolic { i } => {
                if i == 0 || 2 * i > n {
                    return bad("need 1 ≤ i ≤ n/2".into());
                }
            }
            Family::C1Novelty { i, .. } => {
                if i == 0 || 2 * i >= n {
                    return bad("need 1 ≤ i < n/2".into());
                }
            }
            Family::C2 { a, e } => {
                if a < 2 || e == 0 || a * e != n {
                    return bad("need n = a·e with a ≥ 2".into());
                }
            }
            Family::C3 { i, theta } => {
                if i == 0 || !is_prime(theta as u64) || i * theta != n {
                    return bad("need n = i·θ with θ prime".into());
                }
            }
            Family::C4 { i } => {
                if i < 2 || n % i != 0 || i >= n / i {
                    return bad("need n = i·m with 1 < i < m".into());
                }
            }
            Family::C5 { q0, u } => {
                let ok = is_prime(u as u64)
                    && PrimePower::new(q0).is_ok()
                    && (q0 as u128).checked_pow(u).is_some_and(|x| x == q.q as u128);
                if !ok {
                    return bad("need q = q0^u with u prime".into());
                }
            }
            Family::C6 { i, omega, quoted_order } => {
                let pair = matches!((i, omega), (1, 3) | (1, 5) | (2, 2) | (3, 2));
                if !pair || (omega as u64).pow(i) != n as u64 || q.p == omega as u64 {
                    return bad("need (i,ω) ∈ {(1,3),(1,5),(2,2),(3,2)}, n = ω^i, p ≠ ω".into());
                }
                if quoted_order && (i, omega) != (2, 2) {
                    return bad("the quoted order applies only to (i,ω) = (2,2)".into());
                }
            }
            Family::C7 { i, l } => {
                if i < 3 || l < 2 || (i as u64).checked_pow(l) != Some(n as u64) {
                    return bad("need n = i^ℓ with i ≥ 3, ℓ ≥ 2".into());
                }
            }
            Family::C8Symplectic => {
                if n % 2 != 0 {
                    return bad("need n even".into());
                }
            }
            Family::C8Orthogonal { sign } => {
                if q.p == 2 {
                    return bad("need q odd".into());
                }
                if (n % 2 == 1) != (sign == FormSign::Circle) {
                    return bad("odd dimension takes sign o, even takes ±".into());
                }
            }
            Family::C8Unitary { q0 } => {
                if PrimePower::new(q0).is_err() || q0.checked_mul(q0) != Some(q.q) {
                    return bad("need q = q0²".into());
                }
            }
            Family::S { line } => match sporadic::row(line) {
                Some(r) if r.n == n => {}
                _ => return bad("no such row for this n".into()),
            },
        }
        Ok(Self { family, n, q })
    }

    pub fn label(&self) -> String {
        format!("{} n={} q={}", self.family, self.n, self.q.q)
    }

    /// Arithmetic conditions for the subgroup to exist as a maximal
    /// subgroup, where they are recorded (C6 and S only).
    pub fn class_conditions_hold(&self) -> bool {
        match self.family {
            Family::C6 { omega, .. } => c6_field_condition(omega as u64, self.q),
            Family::S { line } => sporadic::row(line).is_some_and(|r| r.condition.holds(self.q)),
            _ => true,
        }
    }

    fn sort_key(&self) -> (FamilyKey, u32, u64, &Family) {
        (self.family.key(), self.n, self.q.q, &self.family)
    }
}

/// `f` is odd and minimal with `ω·(2,ω) | p^f − 1`.
fn c6_field_condition(omega: u64, q: PrimePower) -> bool {
    let m = omega * if omega == 2 { 2 } else { 1 };
    if q.p % omega == 0 {
        return false;
    }
    let mut x = q.p % m;
    let mut ord = 1;
    while x != 1 {
        x = x * q.p % m;
        ord += 1;
    }
    ord == q.f && q.f % 2 == 1
}

/// Order of `H₀ = X ∩ G_α`: exact where a formula is available, otherwise
/// an upper bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilizerOrder {
    Exact(BigUint),
    UpperBound(BigUint),
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn stabilizer_order(case: &CaseSpec) -> StabilizerOrder {
    let (n, q) = (case.n as u64, case.q.q);
    let x = x_order(case.n, q);
    let ng = n.gcd(&(q - 1));
    match case.family {
        Family::C1Parabolic { i } => StabilizerOrder::Exact(x / gaussian_binomial(n, i as u64, q)),
        Family::C1Novelty { i, nested: true } => {
            let i = i as u64;
            StabilizerOrder::Exact(x / (gaussian_binomial(n, i, q) * gaussian_binomial(n - i, i, q)))
        }
        Family::C1Novelty { i, nested: false } => {
            let i = i as u64;
            StabilizerOrder::Exact(sl_order(i, q) * sl_order(n - i, q) * (q - 1) / ng)
        }
        Family::C2 { a, e } => {
            let (a, e) = (a as u64, e as u64);
            let h = sl_order(e, q).pow(a as u32) * factorial(a) * big(q - 1).pow(a as u32 - 1);
            StabilizerOrder::Exact(h / ng)
        }
        Family::C3 { i, theta } => {
            let (i, t) = (i as u64, theta as u64);
            let qt = big(q).pow(t as u32);
            StabilizerOrder::Exact(sl_order_big(i, &qt) * (qt - 1u32) * t / ((q - 1) * ng))
        }
        Family::C4 { i } => {
            let i = i as u64;
            StabilizerOrder::UpperBound(pgl_order(i, q) * pgl_order(n / i, q))
        }
        Family::C5 { q0, .. } => {
            let m = n.gcd(&((q - 1) / (q0 - 1)));
            StabilizerOrder::Exact(pgl_order(n, q0) * m / ng)
        }
        Family::C6 { i, omega, quoted_order } => match (i, omega, quoted_order) {
            (1, 3, _) => StabilizerOrder::Exact(big(72)),
            (2, 2, false) => StabilizerOrder::Exact(big(5760)),
            (2, 2, true) => StabilizerOrder::Exact(big(360)),
            _ => {
                let w = omega as u64;
                StabilizerOrder::UpperBound(big(w).pow(2 * i) * sp_order(2 * i as u64, w))
            }
        },
        Family::C7 { i, l } => {
            StabilizerOrder::UpperBound(pgl_order(i as u64, q).pow(l) * factorial(l as u64))
        }
        Family::C8Symplectic => StabilizerOrder::Exact(sp_order(n, q) * (n / 2).gcd(&(q - 1)) / ng),
        Family::C8Orthogonal { sign } => StabilizerOrder::Exact(pso_order(n, q, sign) * n.gcd(&2)),
        Family::C8Unitary { q0 } => StabilizerOrder::Exact(su_order(n, q0) * n.gcd(&(q0 - 1)) / ng),
        Family::S { line } => {
            let row = sporadic::row(line).expect("validated row");
            StabilizerOrder::Exact(row.h0_order(case.q))
        }
    }
}

/// Exact `|H₀|`; families known only through a bound are `Unsupported`.
pub fn h0_order(case: &CaseSpec) -> Result<BigUint> {
    match stabilizer_order(case) {
        StabilizerOrder::Exact(h) => Ok(h),
        StabilizerOrder::UpperBound(_) => Err(Error::Unsupported(format!(
            "{} is screened by order bounds only",
            case.family
        ))),
    }
}

/// Exact `v = |X|/|H₀|`.
pub fn point_count(case: &CaseSpec) -> Result<BigUint> {
    let h = h0_order(case)?;
    let (v, r) = x_order(case.n, case.q.q).div_rem(&h);
    if !r.is_zero() {
        return Err(Error::Inconsistent(format!(
            "|H0| = {h} does not divide |X| for {}",
            case.label()
        )));
    }
    Ok(v)
}

/// A subdegree together with the formula it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subdegree {
    #[serde(with = "dec")]
    pub value: BigUint,
    pub source: String,
}

fn qp(q: u64, e: u64) -> BigUint {
    big(q).pow(e as u32)
}

fn exact_div(a: BigUint, b: BigUint, what: &str) -> Result<BigUint> {
    let (d, r) = a.div_rem(&b);
    if r.is_zero() {
        Ok(d)
    } else {
        Err(Error::Inconsistent(format!("{what} is not an integer")))
    }
}

/// Non-trivial subdegrees available for the case; empty when none is
/// known, which makes the subdegree part of the divisibility gate vacuous.
pub fn subdegrees(case: &CaseSpec) -> Result<Vec<Subdegree>> {
    let (n, q) = (case.n as u64, case.q.q);
    let sd = |value, source: &str| Subdegree { value, source: source.into() };
    let out = match case.family {
        Family::C1Parabolic { i: 1 } => vec![],
        Family::C1Parabolic { i: 2 } => {
            let d1 = exact_div(q * (q + 1) * (qp(q, n - 2) - 1u32), big(q - 1), "d1")?;
            let d2 = exact_div(
                qp(q, 4) * (qp(q, n - 2) - 1u32) * (qp(q, n - 3) - 1u32),
                big((q * q - 1) * (q - 1)),
                "d2",
            )?;
            vec![
                sd(d1, "q(q+1)(q^(n-2)-1)/(q-1)"),
                sd(d2, "q^4(q^(n-2)-1)(q^(n-3)-1)/((q^2-1)(q-1))"),
            ]
        }
        Family::C1Parabolic { i } => {
            let i = i as u64;
            let d = exact_div(
                q * (qp(q, i) - 1u32) * (qp(q, n - i) - 1u32),
                big((q - 1) * (q - 1)),
                "parabolic subdegree",
            )?;
            vec![sd(d, "q(q^i-1)(q^(n-i)-1)/(q-1)^2")]
        }
        Family::C1Novelty { nested: true, .. } => {
            let v = point_count(case)?;
            vec![sd(p_part(&(v - 1u32), case.q.p), "p-power subdegree (assumed): (v-1)_p")]
        }
        Family::C1Novelty { i: 1, nested: false } => {
            let d = exact_div(qp(q, n - 2) * (qp(q, n - 1) - 1u32), big(q - 1), "C1' subdegree")?;
            vec![sd(d, "q^(n-2)(q^(n-1)-1)/(q-1)")]
        }
        Family::C1Novelty { i, nested: false } => {
            let i = i as u64;
            vec![sd(2u32 * (qp(q, i) - 1u32) * (qp(q, n - i) - 1u32), "2(q^i-1)(q^(n-i)-1)")]
        }
        Family::C2 { e: 1, .. } => vec![sd(big(2 * n * (n - 1) * (q - 1)), "2n(n-1)(q-1)")],
        Family::C2 { a, e } => {
            let (a, e) = (a as u64, e as u64);
            let d = exact_div(a * (a - 1) * (qp(q, e) - 1u32).pow(2), big(q - 1), "C2 subdegree")?;
            vec![sd(d, "a(a-1)(q^e-1)^2/(q-1)")]
        }
        Family::C3 { i, theta: 2 } if i >= 2 => {
            let i = i as u64;
            vec![sd((qp(q, 2 * i) - 1u32) * (qp(q, 2 * i - 2) - 1u32), "(q^(2i)-1)(q^(2i-2)-1)")]
        }
        Family::C5 { q0, u: 2 } => {
            vec![sd((qp(q0, n) - 1u32) * (qp(q0, n - 1) - 1u32), "(q0^n-1)(q0^(n-1)-1)")]
        }
        Family::C8Symplectic => vec![sd((qp(q, n) - 1u32) * (qp(q, n - 2) - 1u32), "(q^n-1)(q^(n-2)-1)")],
        Family::C8Unitary { q0 } => {
            let signed = |e: u64| if e % 2 == 0 { qp(q0, e) - 1u32 } else { qp(q0, e) + 1u32 };
            vec![sd(signed(n) * signed(n - 1), "(q0^n-(-1)^n)(q0^(n-1)-(-1)^(n-1))")]
        }
        _ => vec![],
    };
    Ok(out)
}

/// Gate outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    Pass,
    Fail,
    NotApplicable,
}

impl Gate {
    fn from_bool(b: bool) -> Self {
        if b {
            Gate::Pass
        } else {
            Gate::Fail
        }
    }
}

/// `k+1 | (v−1, d)` for every subdegree `d`, and `k+1 | (v−1, |Out X|·|H₀|)`,
/// with `k = √v`. Not applicable unless `v` is a perfect square.
pub fn divisibility_gate(v: &BigUint, subdegrees: &[BigUint], out_order: u64, h0_order: &BigUint) -> Gate {
    let Some(k) = exact_sqrt(v) else {
        return Gate::NotApplicable;
    };
    if v <= &BigUint::one() {
        return Gate::NotApplicable;
    }
    let k1 = k + 1u32;
    let vm1 = v - 1u32;
    let divides = |m: &BigUint| gcd(&vm1, m).is_multiple_of(&k1);
    let ok = subdegrees.iter().all(divides) && divides(&(h0_order * out_order));
    Gate::from_bool(ok)
}

/// `|X| < |Out X|²·|H₀|·|H₀|²_{p′}`.
pub fn order_inequality(x: &BigUint, out_order: u64, h0: &BigUint, p: u64) -> bool {
    let pp = p_prime_part(h0, p);
    *x < big(out_order).pow(2) * h0 * &pp * &pp
}

/// The order inequality, plus `(p, v−1) = 1` when `v` is an exact integer.
/// Not applicable to parabolic stabilizers.
pub fn bound_gate(case: &CaseSpec) -> Gate {
    if case.family.is_parabolic() {
        return Gate::NotApplicable;
    }
    let x = x_order(case.n, case.q.q);
    let out = out_order(case.n, case.q);
    let h = match stabilizer_order(case) {
        StabilizerOrder::Exact(h) | StabilizerOrder::UpperBound(h) => h,
    };
    let mut ok = order_inequality(&x, out, &h, case.q.p);
    if let Ok(v) = point_count(case) {
        ok &= !(v - 1u32).is_multiple_of(&big(case.q.p));
    }
    Gate::from_bool(ok)
}

/// Number of points: exact, a non-integral quotient (the stated `|H₀|`
/// does not divide `|X|`), or a lower bound from an order bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointCount {
    Exact(#[serde(with = "dec")] BigUint),
    Fraction {
        #[serde(with = "dec")]
        num: BigUint,
        #[serde(with = "dec")]
        den: BigUint,
    },
    LowerBound(#[serde(with = "dec")] BigUint),
}

impl PointCount {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            PointCount::Exact(v) => Some(v),
            _ => None,
        }
    }
}

/// Screening outcome for one case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenReport {
    pub case: CaseSpec,
    pub label: String,
    #[serde(with = "dec")]
    pub x_order: BigUint,
    pub out_order: u64,
    #[serde(with = "dec_opt")]
    pub h0_order: Option<BigUint>,
    #[serde(with = "dec_opt")]
    pub h0_upper_bound: Option<BigUint>,
    pub v: PointCount,
    /// `v` factored as `2^4·3^2`, for `v` below `2^64`; a quotient is
    /// written `num/den`.
    pub v_factorization: Option<String>,
    pub subdegrees: Vec<Subdegree>,
    pub square_ok: Gate,
    pub divisibility_ok: Gate,
    pub bound_ok: Gate,
    pub candidate_k: Option<u64>,
    /// Outside the default scan ranges.
    pub exploratory: bool,
    pub notes: Vec<String>,
}

impl ScreenReport {
    /// Some applicable gate failed.
    pub fn eliminated(&self) -> bool {
        [self.square_ok, self.divisibility_ok, self.bound_ok].contains(&Gate::Fail)
    }

    pub fn survives(&self) -> bool {
        self.candidate_k.is_some()
    }
}

fn factor_string(m: &BigUint) -> Option<String> {
    factorize(m).map(|f| format_factors(&f))
}

fn structural_notes(case: &CaseSpec) -> Vec<String> {
    let mut notes = Vec::new();
    match case.family {
        Family::C6 { i: 2, omega: 2, quoted_order } => notes.push(if quoted_order {
            "|H0| = 360 as stated in the source; 2^4:A6 has order 5760".into()
        } else {
            "|H0| = |2^4:A6| = 5760; the source states 360".into()
        }),
        Family::C8Symplectic if case.n == 4 => notes.push(
            "v = q^2(q^3-1)/(2,q-1) from the group orders; the source writes (q^2+1)(q^3-1)/(2,q-1)".into(),
        ),
        Family::C8Orthogonal { .. } if case.n == 3 => notes.push(
            "|H0| = |SO(3,q)| = q(q^2-1) from |PSO|·(n,2); the source uses q(q^2-1)/2".into(),
        ),
        Family::C1Novelty { nested: true, .. } => notes.push(
            "assumes a unique subdegree that is a power of p; its size is bounded by (v-1)_p".into(),
        ),
        _ => {}
    }
    if !case.class_conditions_hold() {
        notes.push("field conditions for maximality do not hold".into());
    }
    notes
}

/// Screens a single case.
pub fn screen_case(case: &CaseSpec) -> Result<ScreenReport> {
    let x = x_order(case.n, case.q.q);
    let out = out_order(case.n, case.q);
    let stab = stabilizer_order(case);
    let mut notes = structural_notes(case);
    let (h0, ub, v) = match &stab {
        StabilizerOrder::Exact(h) => {
            let (v, r) = x.div_rem(h);
            let v = if r.is_zero() {
                PointCount::Exact(v)
            } else {
                let g = gcd(&x, h);
                notes.push("|H0| does not divide |X|".into());
                PointCount::Fraction { num: &x / &g, den: h / &g }
            };
            (Some(h.clone()), None, v)
        }
        StabilizerOrder::UpperBound(b) => {
            notes.push("bound-only: no exact |H0|".into());
            (None, Some(b.clone()), PointCount::LowerBound(x.div_ceil(b)))
        }
    };
    let v_factorization = match &v {
        PointCount::Exact(v) => factor_string(v),
        PointCount::Fraction { num, den } => {
            factor_string(num).zip(factor_string(den)).map(|(a, b)| format!("{a}/{b}"))
        }
        PointCount::LowerBound(_) => None,
    };
    let subs = match &v {
        PointCount::Exact(_) => subdegrees(case)?,
        _ => vec![],
    };
    let square_ok = match &v {
        PointCount::Exact(v) => Gate::from_bool(exact_sqrt(v).is_some()),
        PointCount::Fraction { .. } => Gate::Fail,
        PointCount::LowerBound(_) => Gate::NotApplicable,
    };
    let divisibility_ok = match (&v, &h0) {
        (PointCount::Exact(v), Some(h)) => {
            let ds: Vec<BigUint> = subs.iter().map(|s| s.value.clone()).collect();
            divisibility_gate(v, &ds, out, h)
        }
        _ => Gate::NotApplicable,
    };
    let bound_ok = bound_gate(case);
    let candidate_k = match (&v, square_ok, divisibility_ok, bound_ok) {
        (PointCount::Exact(v), Gate::Pass, Gate::Pass, Gate::Pass | Gate::NotApplicable) => {
            exact_sqrt(v).and_then(|k| k.to_u64())
        }
        _ => None,
    };
    Ok(ScreenReport {
        case: case.clone(),
        label: case.label(),
        x_order: x,
        out_order: out,
        h0_order: h0,
        h0_upper_bound: ub,
        v,
        v_factorization,
        subdegrees: subs,
        square_ok,
        divisibility_ok,
        bound_ok,
        candidate_k,
        exploratory: !is_default_case(case),
        notes,
    })
}

fn divisors(n: u32) -> impl Iterator<Item = u32> {
    (1..=n).filter(move |d| n % d == 0)
}

/// Every case of the given family for `(n, q)` whose structural
/// constraints hold.
pub fn cases_for(key: FamilyKey, n: u32, q: PrimePower) -> Vec<CaseSpec> {
    let mut fams = Vec::new();
    match key {
        FamilyKey::C1 => fams.extend((1..=n / 2).map(|i| Family::C1Parabolic { i })),
        FamilyKey::C1Novelty => {
            for i in (1..n).filter(|i| 2 * i < n) {
                fams.push(Family::C1Novelty { i, nested: true });
                fams.push(Family::C1Novelty { i, nested: false });
            }
        }
        FamilyKey::C2 => fams.extend(divisors(n).filter(|&a| a >= 2).map(|a| Family::C2 { a, e: n / a })),
        FamilyKey::C3 => fams.extend(
            divisors(n)
                .filter(|&t| is_prime(t as u64))
                .map(|theta| Family::C3 { i: n / theta, theta }),
        ),
        FamilyKey::C4 => fams.extend(divisors(n).filter(|&i| i > 1 && i < n / i).map(|i| Family::C4 { i })),
        FamilyKey::C5 => {
            for u in (2..=q.f).filter(|&u| q.f % u == 0 && is_prime(u as u64)) {
                let q0 = q.p.pow(q.f / u);
                fams.push(Family::C5 { q0, u });
            }
        }
        FamilyKey::C6 => {
            for (i, omega) in [(1, 3), (1, 5), (2, 2), (3, 2)] {
                fams.push(Family::C6 { i, omega, quoted_order: false });
                if (i, omega) == (2, 2) {
                    fams.push(Family::C6 { i, omega, quoted_order: true });
                }
            }
        }
        FamilyKey::C7 => {
            for l in 2..=4u32 {
                for i in 3..=n {
                    fams.push(Family::C7 { i, l });
                }
            }
        }
        FamilyKey::C8 => {
            fams.push(Family::C8Symplectic);
            fams.extend([FormSign::Plus, FormSign::Minus, FormSign::Circle].map(|sign| Family::C8Orthogonal { sign }));
            if q.f % 2 == 0 {
                fams.push(Family::C8Unitary { q0: q.p.pow(q.f / 2) });
            }
        }
        FamilyKey::S => fams.extend(S_ROWS.iter().filter(|r| r.n == n).map(|r| Family::S { line: r.line })),
    }
    fams.into_iter().filter_map(|f| CaseSpec::new(f, n, q).ok()).collect()
}

/// Membership in the default scan: `n ≤ 12`, the recorded field conditions,
/// and `q ≤ 2^10` (`q ≤ 2^14` for the subfield families C5 and unitary C8,
/// whose smallest cases already have `q = q₀²`).
pub fn is_default_case(case: &CaseSpec) -> bool {
    let q_max = match case.family {
        Family::C5 { .. } | Family::C8Unitary { .. } => MAX_Q,
        _ => DEFAULT_Q_MAX,
    };
    case.n <= MAX_N && case.q.q <= q_max && case.class_conditions_hold()
}

/// All default cases of the given families.
pub fn default_cases(keys: &[FamilyKey]) -> Vec<CaseSpec> {
    let qs = prime_powers(2, MAX_Q);
    let mut out = Vec::new();
    for &key in keys {
        for n in 3..=MAX_N {
            for &q in &qs {
                out.extend(cases_for(key, n, q).into_iter().filter(is_default_case));
            }
        }
    }
    out
}

fn run(mut cases: Vec<CaseSpec>) -> Result<Vec<ScreenReport>> {
    cases.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    cases.dedup();
    cases.par_iter().map(screen_case).collect()
}

/// The default scan over the given families, sorted by family, `n`, `q`.
pub fn default_screen(keys: &[FamilyKey]) -> Result<Vec<ScreenReport>> {
    run(default_cases(keys))
}

/// Screens every case of the given families over explicit `n` and `q`
/// values. Field conditions are not enforced here; reports note them.
pub fn case_screen(keys: &[FamilyKey], ns: &[u32], qs: &[u64]) -> Result<Vec<ScreenReport>> {
    let mut cases = Vec::new();
    for &n in ns {
        if !(3..=MAX_N).contains(&n) {
            return Err(Error::Precondition(format!("n = {n} outside 3..={MAX_N}")));
        }
        for &q in qs {
            if q > MAX_Q {
                return Err(Error::Unsupported(format!("q = {q} exceeds {MAX_Q}")));
            }
            let q = PrimePower::new(q)?;
            for &key in keys {
                cases.extend(cases_for(key, n, q));
            }
        }
    }
    run(cases)
}

/// `(n, q, v, k)` of every surviving case.
pub fn survivors(reports: &[ScreenReport]) -> BTreeSet<(u32, u64, u64, u64)> {
    reports
        .iter()
        .filter_map(|r| {
            let k = r.candidate_k?;
            Some((r.case.n, r.case.q.q, k * k, k))
        })
        .collect()
}

mod dec {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| D::Error::custom(format!("bad integer {s:?}")))
    }
}

mod dec_opt {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => super::dec::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| {
            BigUint::parse_bytes(s.as_bytes(), 10)
                .ok_or_else(|| serde::de::Error::custom(format!("bad integer {s:?}")))
        })
        .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(q: u64) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    fn case(f: Family, n: u32, q: u64) -> CaseSpec {
        CaseSpec::new(f, n, pp(q)).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(x_order(3, 3), big(5616));
        assert_eq!(out_order(3, pp(3)), 2);
        assert_eq!(out_order(3, pp(4)), 12);
        assert_eq!(out_order(4, pp(7)), 4);
        let c3 = case(Family::C3 { i: 1, theta: 3 }, 3, 3);
        assert_eq!(h0_order(&c3).unwrap(), big(39));
        assert_eq!(point_count(&c3).unwrap(), big(144));
        assert_eq!(h0_order(&case(Family::C6 { i: 1, omega: 3, quoted_order: false }, 3, 7)).unwrap(), big(72));
        assert_eq!(point_count(&case(Family::C1Parabolic { i: 1 }, 4, 7)).unwrap(), big(400));
        assert_eq!(point_count(&case(Family::C1Parabolic { i: 1 }, 5, 3)).unwrap(), big(121));
        assert!(h0_order(&case(Family::C4 { i: 2 }, 6, 2)).is_err());
    }

    #[test]
    fn subdegree_values() {
        // Lines of PG(3,2): 18 meet a given line, 16 miss it.
        let d = subdegrees(&case(Family::C1Parabolic { i: 2 }, 4, 2)).unwrap();
        assert_eq!(d.iter().map(|s| s.value.clone()).collect::<Vec<_>>(), [big(18), big(16)]);
        for n in 4..=9 {
            for q in [2, 3, 4, 5, 7] {
                let c = case(Family::C1Parabolic { i: 2 }, n, q);
                let total: BigUint = subdegrees(&c).unwrap().into_iter().map(|s| s.value).sum();
                assert_eq!(total + 1u32, point_count(&c).unwrap(), "rank 3 at n={n} q={q}");
            }
        }
        let d = subdegrees(&case(Family::C8Symplectic, 4, 2)).unwrap();
        assert_eq!(d[0].value, big(45));
        let d = subdegrees(&case(Family::C5 { q0: 2, u: 2 }, 3, 4)).unwrap();
        assert_eq!(d[0].value, big(21));
    }

    #[test]
    fn gates() {
        assert_eq!(divisibility_gate(&big(144), &[], 2, &big(39)), Gate::Pass);
        assert_eq!(divisibility_gate(&big(121), &[], 2, &big(120)), Gate::Pass);
        assert_eq!(divisibility_gate(&big(145), &[], 2, &big(39)), Gate::NotApplicable);
        assert_eq!(divisibility_gate(&big(144), &[big(14)], 2, &big(39)), Gate::Fail);
        assert!(order_inequality(&big(5616), 2, &big(72), 3));
        assert_eq!(bound_gate(&case(Family::C3 { i: 1, theta: 3 }, 3, 3)), Gate::Pass);
        assert_eq!(bound_gate(&case(Family::C1Parabolic { i: 1 }, 4, 7)), Gate::NotApplicable);
    }

    #[test]
    fn structural_constraints() {
        assert!(CaseSpec::new(Family::C2 { a: 2, e: 2 }, 5, pp(3)).is_err());
        assert!(CaseSpec::new(Family::C3 { i: 1, theta: 4 }, 4, pp(3)).is_err());
        assert!(CaseSpec::new(Family::C5 { q0: 2, u: 2 }, 3, pp(8)).is_err());
        assert!(CaseSpec::new(Family::C8Unitary { q0: 3 }, 3, pp(9)).is_ok());
        assert!(CaseSpec::new(Family::C8Orthogonal { sign: FormSign::Plus }, 3, pp(3)).is_err());
        assert!(CaseSpec::new(Family::C6 { i: 1, omega: 3, quoted_order: false }, 3, pp(3)).is_err());
    }

    #[test]
    fn single_case_reports() {
        let r = case_screen(&[FamilyKey::C3], &[3], &[3]).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].candidate_k, Some(12));
        assert_eq!(r[0].v_factorization.as_deref(), Some("2^4·3^2"));
        let r = case_screen(&[FamilyKey::C1], &[3], &[5]).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].v, PointCount::Exact(big(31)));
        assert_eq!(r[0].square_ok, Gate::Fail);
        assert!(r[0].eliminated());
        assert!(case_screen(&[FamilyKey::C1], &[2], &[5]).is_err());
        assert!(case_screen(&[FamilyKey::C1], &[3], &[6]).is_err());
    }

    #[test]
    fn report_json_round_trip() {
        let r = case_screen(&FamilyKey::ALL, &[3], &[4]).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: Vec<ScreenReport> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}

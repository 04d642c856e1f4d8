//! The almost-simple (class S) point stabilizers of PSL(n,q), `3 ≤ n ≤ 7`,
//! with the arithmetic conditions on `q` under which they are maximal.

use num_bigint::BigUint;

use super::arith::{psl_order, PrimePower};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QCondition {
    /// `q = p`, odd.
    OddPrime,
    /// `q = p` or `p²`, odd.
    OddPrimeOrSquare,
    /// `q = p`.
    Prime,
    /// `q = p ≡ r (mod m)`.
    PrimeMod(u64, u64),
    Exactly(u64),
    Odd,
}

impl QCondition {
    pub fn holds(self, q: PrimePower) -> bool {
        match self {
            QCondition::OddPrime => q.f == 1 && q.p != 2,
            QCondition::OddPrimeOrSquare => q.f <= 2 && q.p != 2,
            QCondition::Prime => q.f == 1,
            QCondition::PrimeMod(m, r) => q.f == 1 && q.q % m == r,
            QCondition::Exactly(v) => q.q == v,
            QCondition::Odd => q.p != 2,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SRow {
    pub line: u8,
    pub n: u32,
    pub name: &'static str,
    /// `None` for the one row whose order depends on `q`.
    pub order: Option<u64>,
    pub condition: QCondition,
}

impl SRow {
    pub fn h0_order(&self, q: PrimePower) -> BigUint {
        match self.order {
            Some(o) => BigUint::from(o),
            None => psl_order(3, q.q),
        }
    }
}

use QCondition::*;

pub const S_ROWS: [SRow; 19] = [
    SRow { line: 1, n: 3, name: "PSL(2,7)", order: Some(168), condition: OddPrime },
    SRow { line: 2, n: 3, name: "A6", order: Some(360), condition: OddPrimeOrSquare },
    SRow { line: 3, n: 4, name: "PSL(2,7)", order: Some(168), condition: OddPrime },
    SRow { line: 4, n: 4, name: "A7", order: Some(2520), condition: Prime },
    SRow { line: 5, n: 4, name: "PSU(4,2)", order: Some(25920), condition: PrimeMod(6, 1) },
    SRow { line: 6, n: 5, name: "PSL(2,11)", order: Some(660), condition: OddPrime },
    SRow { line: 7, n: 5, name: "M11", order: Some(7920), condition: Exactly(3) },
    SRow { line: 8, n: 5, name: "PSU(4,2)", order: Some(25920), condition: PrimeMod(6, 1) },
    SRow { line: 9, n: 6, name: "A6.2_3", order: Some(720), condition: OddPrime },
    SRow { line: 10, n: 6, name: "A6", order: Some(360), condition: OddPrimeOrSquare },
    SRow { line: 11, n: 6, name: "PSL(2,11)", order: Some(660), condition: OddPrime },
    SRow { line: 12, n: 6, name: "A7", order: Some(2520), condition: OddPrimeOrSquare },
    SRow { line: 13, n: 6, name: "PSL(3,4).2_1", order: Some(40320), condition: OddPrime },
    SRow { line: 14, n: 6, name: "PSU(3,4)", order: Some(62400), condition: OddPrime },
    SRow { line: 15, n: 6, name: "M12", order: Some(95040), condition: Exactly(3) },
    SRow { line: 16, n: 6, name: "PSU(4,3).2_2", order: Some(6531840), condition: PrimeMod(12, 1) },
    SRow { line: 17, n: 6, name: "PSU(4,3)", order: Some(3265920), condition: PrimeMod(12, 7) },
    SRow { line: 18, n: 6, name: "PSL(3,q)", order: None, condition: Odd },
    SRow { line: 19, n: 7, name: "PSU(3,3)", order: Some(6048), condition: OddPrime },
];

pub fn row(line: u8) -> Option<&'static SRow> {
    S_ROWS.iter().find(|r| r.line == line)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::screen::arith::{psl_order, su_order};

    #[test]
    fn constant_orders_match_group_formulas() {
        assert_eq!(BigUint::from(row(1).unwrap().order.unwrap()), psl_order(2, 7));
        assert_eq!(BigUint::from(row(6).unwrap().order.unwrap()), psl_order(2, 11));
        assert_eq!(BigUint::from(row(19).unwrap().order.unwrap()), su_order(3, 3) / 1u32);
        // PSU(4,2) ≅ PSp(4,3); PSU(3,4) has trivial centre.
        assert_eq!(BigUint::from(row(5).unwrap().order.unwrap()), su_order(4, 2));
        assert_eq!(BigUint::from(row(14).unwrap().order.unwrap()), su_order(3, 4));
        assert_eq!(BigUint::from(row(17).unwrap().order.unwrap()), su_order(4, 3) / 4u32);
        assert_eq!(BigUint::from(row(13).unwrap().order.unwrap()), psl_order(3, 4) * 2u32);
    }

    #[test]
    fn conditions() {
        let q = |x| PrimePower::new(x).unwrap();
        assert!(OddPrime.holds(q(7)) && !OddPrime.holds(q(9)) && !OddPrime.holds(q(2)));
        assert!(OddPrimeOrSquare.holds(q(9)) && !OddPrimeOrSquare.holds(q(27)));
        assert!(PrimeMod(12, 7).holds(q(19)) && !PrimeMod(12, 7).holds(q(13)));
    }
}

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{check_len, AbstractClone, Budget, Carrier};

/// One basic operation of a finite algebra. The table is row-major over
/// argument tuples, last argument fastest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Operation {
    pub arity: usize,
    pub table: Vec<usize>,
}

/// A finite algebra on `{0, .., carrier-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawAlgebra")]
pub struct FiniteAlgebra {
    carrier: usize,
    operations: BTreeMap<String, Operation>,
}

#[derive(Deserialize)]
struct RawAlgebra {
    carrier: usize,
    #[serde(default)]
    operations: BTreeMap<String, Operation>,
}

impl TryFrom<RawAlgebra> for FiniteAlgebra {
    type Error = Error;

    fn try_from(raw: RawAlgebra) -> Result<Self> {
        FiniteAlgebra::new(raw.carrier, raw.operations)
    }
}

impl FiniteAlgebra {
    pub fn new(carrier: usize, operations: BTreeMap<String, Operation>) -> Result<Self> {
        if carrier == 0 || carrier > 256 {
            return Err(Error::Invalid(format!(
                "carrier size must be between 1 and 256, got {carrier}"
            )));
        }
        for (name, op) in &operations {
            let expected = carrier
                .checked_pow(op.arity as u32)
                .ok_or_else(|| Error::Invalid(format!("operation `{name}` is too large")))?;
            if op.table.len() != expected {
                return Err(Error::Invalid(format!(
                    "operation `{name}` of arity {} needs {expected} entries, got {}",
                    op.arity,
                    op.table.len()
                )));
            }
            if let Some((position, &entry)) =
                op.table.iter().enumerate().find(|(_, &e)| e >= carrier)
            {
                return Err(Error::MapEntry {
                    position,
                    entry,
                    cod: carrier,
                });
            }
        }
        Ok(FiniteAlgebra {
            carrier,
            operations,
        })
    }

    /// `<{0,1}, meet>`
    pub fn meet_semilattice() -> Self {
        let mut ops = BTreeMap::new();
        ops.insert(
            "meet".to_string(),
            Operation {
                arity: 2,
                table: vec![0, 0, 0, 1],
            },
        );
        FiniteAlgebra::new(2, ops).expect("valid table")
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn operations(&self) -> &BTreeMap<String, Operation> {
        &self.operations
    }
}

/// A function `k^n -> k` as its value table, row-major, last argument fastest.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OpTable(pub Vec<u8>);

impl OpTable {
    pub fn projection(k: usize, n: usize, i: usize) -> OpTable {
        let len = k.pow(n as u32);
        // x_i is digit i (most significant first) of the tuple index
        let stride = k.pow((n - 1 - i) as u32);
        OpTable((0..len).map(|x| ((x / stride) % k) as u8).collect())
    }

    pub fn constant(k: usize, n: usize, value: u8) -> OpTable {
        OpTable(vec![value; k.pow(n as u32)])
    }
}

/// The clone of term operations of a finite algebra: functions generated from
/// projections by the basic operations, composed pointwise.
#[derive(Debug, Clone)]
pub struct FiniteClone {
    algebra: FiniteAlgebra,
    carriers: Vec<Vec<OpTable>>,
}

pub fn finite_clone_of_algebra(algebra: FiniteAlgebra, max_arity: usize) -> FiniteClone {
    let carriers = (0..=max_arity).map(|n| closure(&algebra, n)).collect();
    FiniteClone { algebra, carriers }
}

// least set of functions k^n -> k containing the projections and closed under
// every basic operation; semi-naive, so each round only combines tuples that
// involve something new
fn closure(alg: &FiniteAlgebra, n: usize) -> Vec<OpTable> {
    let k = alg.carrier;
    let len = k.pow(n as u32);
    let mut seen: HashSet<OpTable> = HashSet::new();
    let mut all: Vec<OpTable> = Vec::new();
    let mut push = |t: OpTable, all: &mut Vec<OpTable>| {
        if seen.insert(t.clone()) {
            all.push(t);
        }
    };
    for i in 0..n {
        push(OpTable::projection(k, n, i), &mut all);
    }
    for op in alg.operations.values().filter(|op| op.arity == 0) {
        push(OpTable::constant(k, n, op.table[0] as u8), &mut all);
    }
    let mut old = 0;
    while old < all.len() {
        let known = all.len();
        for op in alg.operations.values().filter(|op| op.arity > 0) {
            let r = op.arity;
            let mut idx = vec![0usize; r];
            loop {
                if idx.iter().any(|&i| i >= old) {
                    let table = (0..len)
                        .map(|x| {
                            let arg = idx.iter().fold(0usize, |acc, &i| acc * k + all[i].0[x] as usize);
                            op.table[arg] as u8
                        })
                        .collect();
                    push(OpTable(table), &mut all);
                }
                let mut j = r;
                let mut done = true;
                while j > 0 {
                    j -= 1;
                    idx[j] += 1;
                    if idx[j] < known {
                        done = false;
                        break;
                    }
                    idx[j] = 0;
                }
                if done {
                    break;
                }
            }
        }
        old = known;
    }
    all.sort();
    all
}

impl FiniteClone {
    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    fn arity_len(&self, n: usize) -> usize {
        self.algebra.carrier.pow(n as u32)
    }

    fn check_table(&self, n: usize, t: &OpTable) -> Result<()> {
        if t.0.len() == self.arity_len(n) {
            Ok(())
        } else {
            Err(Error::NotInCarrier {
                stage: n,
                detail: format!("table of length {} for arity {n}", t.0.len()),
            })
        }
    }
}

impl AbstractClone for FiniteClone {
    type Elem = OpTable;

    fn describe(&self) -> String {
        let ops: Vec<&str> = self.algebra.operations.keys().map(String::as_str).collect();
        format!(
            "clone of <{}, {}>",
            self.algebra.carrier,
            ops.join(", ")
        )
    }

    fn elems(&self, n: usize, _budget: &Budget) -> Result<Carrier<OpTable>> {
        Ok(Carrier::complete(match self.carriers.get(n) {
            Some(c) => c.clone(),
            None => closure(&self.algebra, n),
        }))
    }

    fn mu(&self, m: usize, n: usize, t: &OpTable, us: &[OpTable]) -> Result<OpTable> {
        check_len("substitution", m, us.len())?;
        self.check_table(m, t)?;
        for u in us {
            self.check_table(n, u)?;
        }
        let k = self.algebra.carrier;
        Ok(OpTable(
            (0..self.arity_len(n))
                .map(|x| t.0[us.iter().fold(0usize, |acc, u| acc * k + u.0[x] as usize)])
                .collect(),
        ))
    }

    fn iota(&self, m: usize, i: usize) -> Result<OpTable> {
        if i < m {
            Ok(OpTable::projection(self.algebra.carrier, m, i))
        } else {
            Err(Error::Index { index: i, arity: m })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meet_clone_sizes() {
        let k = finite_clone_of_algebra(FiniteAlgebra::meet_semilattice(), 4);
        let b = Budget::default();
        let sizes: Vec<usize> = (0..=4).map(|n| k.elems(n, &b).unwrap().len()).collect();
        assert_eq!(sizes, vec![0, 1, 3, 7, 15]);
    }

    #[test]
    fn single_constant_gives_three_binary_operations() {
        let mut ops = BTreeMap::new();
        ops.insert(
            "e".to_string(),
            Operation {
                arity: 0,
                table: vec![1],
            },
        );
        let k = finite_clone_of_algebra(FiniteAlgebra::new(2, ops).unwrap(), 2);
        let c2 = k.elems(2, &Budget::default()).unwrap();
        assert_eq!(c2.len(), 3);
        assert!(c2.elems.contains(&OpTable(vec![1, 1, 1, 1])));
    }

    #[test]
    fn projections_are_members() {
        let k = finite_clone_of_algebra(FiniteAlgebra::meet_semilattice(), 3);
        for n in 1..=3 {
            let c = k.elems(n, &Budget::default()).unwrap();
            for i in 0..n {
                assert!(c.elems.contains(&k.iota(n, i).unwrap()));
            }
        }
        assert_eq!(OpTable::projection(2, 2, 0), OpTable(vec![0, 0, 1, 1]));
        assert_eq!(OpTable::projection(2, 2, 1), OpTable(vec![0, 1, 0, 1]));
    }

    #[test]
    fn mu_composes_functions() {
        let k = finite_clone_of_algebra(FiniteAlgebra::meet_semilattice(), 2);
        let meet = OpTable(vec![0, 0, 0, 1]);
        let x0 = k.iota(1, 0).unwrap();
        // meet(x, x) = x
        assert_eq!(k.mu(2, 1, &meet, &[x0.clone(), x0.clone()]).unwrap(), x0);
        assert!(k.mu(2, 1, &meet, &[x0]).is_err());
    }

    #[test]
    fn algebra_validation() {
        let bad: std::result::Result<FiniteAlgebra, _> = serde_json::from_str(
            r#"{"carrier": 2, "operations": {"meet": {"arity": 2, "table": [0,0,1]}}}"#,
        );
        assert!(bad.is_err());
        let bad: std::result::Result<FiniteAlgebra, _> = serde_json::from_str(
            r#"{"carrier": 2, "operations": {"meet": {"arity": 2, "table": [0,0,0,2]}}}"#,
        );
        assert!(bad.is_err());
        let ok: FiniteAlgebra = serde_json::from_str(
            r#"{"carrier": 2, "operations": {"meet": {"arity": 2, "table": [0,0,0,1]}}}"#,
        )
        .unwrap();
        assert_eq!(ok, FiniteAlgebra::meet_semilattice());
    }
}

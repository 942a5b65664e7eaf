use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::clone::Carrier;
use crate::error::{Error, Result};
use crate::fin_cat::FinMap;
use crate::presheaf::{Presheaf, TruncatedPresheaf};

use super::SubstAlgebra;

/// A substitution algebra stored as tables over a truncated presheaf.
/// `s_m` and `v_m` are given for `m < bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedAlgebra {
    presheaf: TruncatedPresheaf,
    // s[m][x * |A(m)| + y]
    s: Vec<Vec<usize>>,
    v: Vec<usize>,
}

impl TruncatedAlgebra {
    pub fn new(presheaf: TruncatedPresheaf, s: Vec<Vec<usize>>, v: Vec<usize>) -> Result<Self> {
        let bound = presheaf.bound();
        let sizes = presheaf.sizes();
        if s.len() != bound || v.len() != bound {
            return Err(Error::Shape(format!(
                "bound {bound} needs {bound} substitution tables and variables, got {} and {}",
                s.len(),
                v.len()
            )));
        }
        for m in 0..bound {
            if s[m].len() != sizes[m + 1] * sizes[m] {
                return Err(Error::Shape(format!(
                    "substitution table {m} needs {} entries, got {}",
                    sizes[m + 1] * sizes[m],
                    s[m].len()
                )));
            }
            if let Some((position, &entry)) = s[m].iter().enumerate().find(|(_, &e)| e >= sizes[m]) {
                return Err(Error::MapEntry {
                    position,
                    entry,
                    cod: sizes[m],
                });
            }
            if v[m] >= sizes[m + 1] {
                return Err(Error::MapEntry {
                    position: m,
                    entry: v[m],
                    cod: sizes[m + 1],
                });
            }
        }
        Ok(TruncatedAlgebra { presheaf, s, v })
    }

    /// Tabulate an algebra whose carriers up to `bound` are complete and closed
    /// under action and substitution. Also returns the element behind each
    /// index.
    pub fn tabulate<A: SubstAlgebra>(alg: &A, bound: usize) -> Result<(Self, Vec<Vec<A::Elem>>)> {
        let (presheaf, elems) = TruncatedPresheaf::tabulate(alg, bound)?;
        let index: Vec<HashMap<&A::Elem, usize>> = elems
            .iter()
            .map(|es| es.iter().enumerate().map(|(i, e)| (e, i)).collect())
            .collect();
        let find = |m: usize, e: A::Elem| {
            index[m].get(&e).copied().ok_or_else(|| Error::NotInCarrier {
                stage: m,
                detail: format!("{e:?}"),
            })
        };
        let mut s = Vec::with_capacity(bound);
        let mut v = Vec::with_capacity(bound);
        for m in 0..bound {
            let mut table = Vec::with_capacity(elems[m + 1].len() * elems[m].len());
            for x in &elems[m + 1] {
                for y in &elems[m] {
                    table.push(find(m, alg.subst(m, x, y)?)?);
                }
            }
            s.push(table);
            v.push(find(m + 1, alg.var(m)?)?);
        }
        Ok((TruncatedAlgebra::new(presheaf, s, v)?, elems))
    }

    pub fn presheaf(&self) -> &TruncatedPresheaf {
        &self.presheaf
    }

    pub fn bound(&self) -> usize {
        self.presheaf.bound()
    }

    /// The table of `s_m`, row-major over `A(m+1) x A(m)`.
    pub fn subst_table(&self, m: usize) -> Option<&[usize]> {
        self.s.get(m).map(Vec::as_slice)
    }

    pub fn vars(&self) -> &[usize] {
        &self.v
    }

    fn s_index(&self, m: usize, x: usize, y: usize) -> Result<usize> {
        if m >= self.bound() {
            return Err(Error::Range {
                stage: m + 1,
                bound: self.bound(),
            });
        }
        let sizes = self.presheaf.sizes();
        if x >= sizes[m + 1] || y >= sizes[m] {
            return Err(Error::NotInCarrier {
                stage: m,
                detail: format!("pair ({x}, {y})"),
            });
        }
        Ok(x * sizes[m] + y)
    }

    pub fn set_action(&mut self, f: &FinMap, x: usize, y: usize) -> Result<()> {
        self.presheaf.set_action(f, x, y)
    }

    pub fn set_subst(&mut self, m: usize, x: usize, y: usize, z: usize) -> Result<()> {
        let i = self.s_index(m, x, y)?;
        if z >= self.presheaf.sizes()[m] {
            return Err(Error::Index {
                index: z,
                arity: self.presheaf.sizes()[m],
            });
        }
        self.s[m][i] = z;
        Ok(())
    }

    pub fn set_var(&mut self, m: usize, x: usize) -> Result<()> {
        if m >= self.bound() || x >= self.presheaf.sizes()[m + 1] {
            return Err(Error::Index {
                index: x,
                arity: self.presheaf.sizes().get(m + 1).copied().unwrap_or(0),
            });
        }
        self.v[m] = x;
        Ok(())
    }
}

impl Presheaf for TruncatedAlgebra {
    type Elem = usize;

    fn describe(&self) -> String {
        format!("truncated algebra (bound {})", self.bound())
    }

    fn carrier(&self, m: usize) -> Result<Carrier<usize>> {
        self.presheaf.carrier(m)
    }

    fn act(&self, f: &FinMap, x: &usize) -> Result<usize> {
        self.presheaf.act(f, x)
    }

    fn max_stage(&self) -> Option<usize> {
        Some(self.bound())
    }
}

impl SubstAlgebra for TruncatedAlgebra {
    fn subst(&self, m: usize, x: &usize, y: &usize) -> Result<usize> {
        Ok(self.s[m][self.s_index(m, *x, *y)?])
    }

    fn var(&self, m: usize) -> Result<usize> {
        self.v.get(m).copied().ok_or(Error::Range {
            stage: m + 1,
            bound: self.bound(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct RawAlgebra {
    #[serde(flatten)]
    presheaf: TruncatedPresheaf,
    s: BTreeMap<usize, Vec<usize>>,
    v: BTreeMap<usize, usize>,
}

impl Serialize for TruncatedAlgebra {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        RawAlgebra {
            presheaf: self.presheaf.clone(),
            s: self.s.iter().cloned().enumerate().collect(),
            v: self.v.iter().copied().enumerate().collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TruncatedAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawAlgebra::deserialize(d)?;
        let bound = raw.presheaf.bound();
        let keys_ok = |keys: Vec<usize>| keys == (0..bound).collect::<Vec<_>>();
        if !keys_ok(raw.s.keys().copied().collect()) || !keys_ok(raw.v.keys().copied().collect()) {
            return Err(serde::de::Error::custom(format!(
                "\"s\" and \"v\" must have exactly the stages 0..{bound}"
            )));
        }
        TruncatedAlgebra::new(
            raw.presheaf,
            raw.s.into_values().collect(),
            raw.v.into_values().collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

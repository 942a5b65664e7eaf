use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::clone::Carrier;
use crate::error::{Error, Result};
use crate::fin_cat::{enumerate_maps, hom_count, FinMap};

use super::Presheaf;

/// A presheaf stored as tables up to stage `bound`: element `x` of stage `m`
/// is the index `x < carriers[m]`, and every map between stages `<= bound`
/// has an image table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPresheaf {
    bound: usize,
    carriers: Vec<usize>,
    // actions[m][n][index of f in enumerate_maps(m, n)][x]
    actions: Vec<Vec<Vec<Vec<usize>>>>,
}

impl TruncatedPresheaf {
    pub fn new(carriers: Vec<usize>, actions: Vec<Vec<Vec<Vec<usize>>>>) -> Result<Self> {
        if carriers.is_empty() {
            return Err(Error::Invalid("a truncated presheaf needs stage 0".into()));
        }
        let bound = carriers.len() - 1;
        if actions.len() != carriers.len() {
            return Err(Error::Shape(format!(
                "expected actions out of {} stages, got {}",
                carriers.len(),
                actions.len()
            )));
        }
        for (m, row) in actions.iter().enumerate() {
            if row.len() != carriers.len() {
                return Err(Error::Shape(format!("stage {m} has actions into {} stages", row.len())));
            }
            for (n, tables) in row.iter().enumerate() {
                if tables.len() != hom_count(m, n) {
                    return Err(Error::Shape(format!(
                        "{m}->{n} needs {} tables, got {}",
                        hom_count(m, n),
                        tables.len()
                    )));
                }
                for (fi, table) in tables.iter().enumerate() {
                    if table.len() != carriers[m] {
                        return Err(Error::Shape(format!(
                            "table of {} has {} entries, stage {m} has {}",
                            FinMap::from_index(m, n, fi),
                            table.len(),
                            carriers[m]
                        )));
                    }
                    if let Some((position, &entry)) =
                        table.iter().enumerate().find(|(_, &y)| y >= carriers[n])
                    {
                        return Err(Error::MapEntry {
                            position,
                            entry,
                            cod: carriers[n],
                        });
                    }
                }
            }
        }
        Ok(TruncatedPresheaf {
            bound,
            carriers,
            actions,
        })
    }

    /// Tabulate a presheaf whose carriers up to `bound` are complete and
    /// closed under the action. Also returns the element behind each index.
    pub fn tabulate<P: Presheaf>(p: &P, bound: usize) -> Result<(Self, Vec<Vec<P::Elem>>)> {
        let mut elems = Vec::with_capacity(bound + 1);
        for m in 0..=bound {
            let c = p.carrier(m)?;
            if !c.complete {
                return Err(Error::Invalid(format!(
                    "stage {m} of {} is not fully enumerated",
                    p.describe()
                )));
            }
            elems.push(c.elems);
        }
        let index: Vec<HashMap<&P::Elem, usize>> = elems
            .iter()
            .map(|es| es.iter().enumerate().map(|(i, e)| (e, i)).collect())
            .collect();
        let mut actions = Vec::with_capacity(bound + 1);
        for m in 0..=bound {
            let mut row = Vec::with_capacity(bound + 1);
            for n in 0..=bound {
                let mut tables = Vec::with_capacity(hom_count(m, n));
                for f in enumerate_maps(m, n) {
                    let table = elems[m]
                        .iter()
                        .map(|x| {
                            let y = p.act(&f, x)?;
                            index[n].get(&y).copied().ok_or_else(|| Error::NotInCarrier {
                                stage: n,
                                detail: format!("{y:?}, image of {x:?} under {f}"),
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    tables.push(table);
                }
                row.push(tables);
            }
            actions.push(row);
        }
        let carriers = elems.iter().map(Vec::len).collect();
        Ok((TruncatedPresheaf::new(carriers, actions)?, elems))
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn sizes(&self) -> &[usize] {
        &self.carriers
    }

    fn check_map(&self, f: &FinMap) -> Result<()> {
        for stage in [f.dom(), f.cod()] {
            if stage > self.bound {
                return Err(Error::Range {
                    stage,
                    bound: self.bound,
                });
            }
        }
        Ok(())
    }

    /// The image table of `f`.
    pub fn table(&self, f: &FinMap) -> Result<&[usize]> {
        self.check_map(f)?;
        Ok(&self.actions[f.dom()][f.cod()][f.index()])
    }

    /// Overwrite one entry of the action; used to build mutants.
    pub fn set_action(&mut self, f: &FinMap, x: usize, y: usize) -> Result<()> {
        self.check_map(f)?;
        let (m, n) = (f.dom(), f.cod());
        if x >= self.carriers[m] || y >= self.carriers[n] {
            return Err(Error::Index {
                index: x.max(y),
                arity: self.carriers[m].min(self.carriers[n]),
            });
        }
        self.actions[m][n][f.index()][x] = y;
        Ok(())
    }
}

impl Presheaf for TruncatedPresheaf {
    type Elem = usize;

    fn describe(&self) -> String {
        format!("truncated presheaf (bound {})", self.bound)
    }

    fn carrier(&self, m: usize) -> Result<Carrier<usize>> {
        if m > self.bound {
            return Err(Error::Range {
                stage: m,
                bound: self.bound,
            });
        }
        Ok(Carrier::complete((0..self.carriers[m]).collect()))
    }

    fn act(&self, f: &FinMap, x: &usize) -> Result<usize> {
        let table = self.table(f)?;
        table.get(*x).copied().ok_or_else(|| Error::NotInCarrier {
            stage: f.dom(),
            detail: format!("index {x} of {}", table.len()),
        })
    }

    fn max_stage(&self) -> Option<usize> {
        Some(self.bound)
    }
}

#[derive(Serialize, Deserialize)]
struct RawTruncated {
    bound: usize,
    carriers: Vec<usize>,
    actions: BTreeMap<String, BTreeMap<String, Vec<usize>>>,
}

impl Serialize for TruncatedPresheaf {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut actions = BTreeMap::new();
        for m in 0..=self.bound {
            for n in 0..=self.bound {
                let tables = enumerate_maps(m, n)
                    .into_iter()
                    .zip(&self.actions[m][n])
                    .map(|(f, t)| (f.table_key(), t.clone()))
                    .collect();
                actions.insert(format!("{m}->{n}"), tables);
            }
        }
        RawTruncated {
            bound: self.bound,
            carriers: self.carriers.clone(),
            actions,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedPresheaf {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawTruncated::deserialize(d)?;
        from_raw(raw).map_err(serde::de::Error::custom)
    }
}

fn from_raw(raw: RawTruncated) -> Result<TruncatedPresheaf> {
    if raw.carriers.len() != raw.bound + 1 {
        return Err(Error::Shape(format!(
            "bound {} needs {} carrier sizes, got {}",
            raw.bound,
            raw.bound + 1,
            raw.carriers.len()
        )));
    }
    let mut actions = Vec::with_capacity(raw.bound + 1);
    for m in 0..=raw.bound {
        let mut row = Vec::with_capacity(raw.bound + 1);
        for n in 0..=raw.bound {
            let key = format!("{m}->{n}");
            let given = raw
                .actions
                .get(&key)
                .ok_or_else(|| Error::Invalid(format!("missing actions for {key}")))?;
            if given.len() != hom_count(m, n) {
                return Err(Error::Invalid(format!(
                    "{key} lists {} maps, expected {}",
                    given.len(),
                    hom_count(m, n)
                )));
            }
            let tables = enumerate_maps(m, n)
                .into_iter()
                .map(|f| {
                    given.get(&f.table_key()).cloned().ok_or_else(|| {
                        Error::Invalid(format!("missing table for map [{}] in {key}", f.table_key()))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            row.push(tables);
        }
        actions.push(row);
    }
    TruncatedPresheaf::new(raw.carriers, actions)
}

//! The category of finite ordinals `ord n = {0, .., n-1}` and all functions
//! between them.
//!
//! Composition is diagrammatic throughout the crate: `compose(f, g)` is
//! "first `f`, then `g`", which matches the direction in which covariant
//! presheaves act.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{witness, CheckResult, Report};

/// A function `ord dom -> ord cod` stored as its table of images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawFinMap")]
pub struct FinMap {
    dom: usize,
    cod: usize,
    table: Vec<usize>,
}

#[derive(Deserialize)]
struct RawFinMap {
    dom: usize,
    cod: usize,
    table: Vec<usize>,
}

impl TryFrom<RawFinMap> for FinMap {
    type Error = Error;

    fn try_from(raw: RawFinMap) -> Result<Self> {
        if raw.table.len() != raw.dom {
            return Err(Error::Shape(format!(
                "table has {} entries but dom is {}",
                raw.table.len(),
                raw.dom
            )));
        }
        FinMap::new(raw.cod, raw.table)
    }
}

impl FinMap {
    /// Validating constructor; `dom` is the table length.
    pub fn new(cod: usize, table: Vec<usize>) -> Result<Self> {
        if let Some((position, &entry)) = table.iter().enumerate().find(|(_, &e)| e >= cod) {
            return Err(Error::MapEntry {
                position,
                entry,
                cod,
            });
        }
        Ok(FinMap {
            dom: table.len(),
            cod,
            table,
        })
    }

    pub fn identity(n: usize) -> Self {
        FinMap {
            dom: n,
            cod: n,
            table: (0..n).collect(),
        }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.table.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `f` then `g`.
    pub fn compose(&self, g: &FinMap) -> Result<FinMap> {
        if self.cod != g.dom {
            return Err(Error::Composable {
                left_dom: self.dom,
                left_cod: self.cod,
                right_dom: g.dom,
                right_cod: g.cod,
            });
        }
        Ok(FinMap {
            dom: self.dom,
            cod: g.cod,
            table: self.table.iter().map(|&i| g.table[i]).collect(),
        })
    }

    /// `f + g`: `f` on the left block, `g` shifted past `f.cod` on the right.
    pub fn coproduct(&self, g: &FinMap) -> FinMap {
        let mut table = Vec::with_capacity(self.dom + g.dom);
        table.extend_from_slice(&self.table);
        table.extend(g.table.iter().map(|&j| self.cod + j));
        FinMap {
            dom: self.dom + g.dom,
            cod: self.cod + g.cod,
            table,
        }
    }

    /// `f + id_k`
    pub fn extend(&self, k: usize) -> FinMap {
        let mut table = self.table.clone();
        table.extend(self.cod..self.cod + k);
        FinMap {
            dom: self.dom + k,
            cod: self.cod + k,
            table,
        }
    }

    /// `id_k + f`
    pub fn shift(&self, k: usize) -> FinMap {
        FinMap::identity(k).coproduct(self)
    }

    /// The point `(0 |-> i) : 1 -> n`.
    pub fn point(i: usize, n: usize) -> Result<FinMap> {
        FinMap::new(n, vec![i])
    }

    /// Position of this map in [`enumerate_maps`]`(dom, cod)`.
    pub fn index(&self) -> usize {
        self.table.iter().fold(0, |acc, &e| acc * self.cod + e)
    }

    /// Inverse of [`FinMap::index`].
    pub fn from_index(dom: usize, cod: usize, mut index: usize) -> FinMap {
        let mut table = vec![0; dom];
        for slot in table.iter_mut().rev() {
            *slot = index % cod.max(1);
            index /= cod.max(1);
        }
        FinMap { dom, cod, table }
    }

    /// Comma-joined table, the key used by the truncated presheaf file format.
    pub fn table_key(&self) -> String {
        self.table
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{} [{}]", self.dom, self.cod, self.table_key())
    }
}

pub fn identity(n: usize) -> FinMap {
    FinMap::identity(n)
}

pub fn compose(f: &FinMap, g: &FinMap) -> Result<FinMap> {
    f.compose(g)
}

pub fn coproduct(f: &FinMap, g: &FinMap) -> FinMap {
    f.coproduct(g)
}

/// Number of maps `m -> n`, i.e. `n^m`.
pub fn hom_count(m: usize, n: usize) -> usize {
    n.pow(m as u32)
}

/// All `n^m` maps `m -> n` in lexicographic order of their tables.
pub fn enumerate_maps(m: usize, n: usize) -> Vec<FinMap> {
    (0..hom_count(m, n))
        .map(|i| FinMap::from_index(m, n, i))
        .collect()
}

/// The generating morphisms of the category, together with the coproduct
/// injections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generators {
    /// contraction `[id_1, id_1] : 2 -> 1`
    pub c: FinMap,
    /// weakening `old_0 : 0 -> 1`
    pub w: FinMap,
    /// exchange `[new_1, old_1] : 2 -> 2`
    pub s: FinMap,
}

pub fn generators() -> Generators {
    Generators {
        c: FinMap {
            dom: 2,
            cod: 1,
            table: vec![0, 0],
        },
        w: FinMap {
            dom: 0,
            cod: 1,
            table: vec![],
        },
        s: FinMap {
            dom: 2,
            cod: 2,
            table: vec![1, 0],
        },
    }
}

/// `old_n : n -> n+1`, the inclusion.
pub fn old(n: usize) -> FinMap {
    FinMap {
        dom: n,
        cod: n + 1,
        table: (0..n).collect(),
    }
}

/// `new_n : 1 -> n+1`, the fresh point.
pub fn new(n: usize) -> FinMap {
    FinMap {
        dom: 1,
        cod: n + 1,
        table: vec![n],
    }
}

/// One of the three generators, named so that diagrams can be replayed both
/// in the category itself and through a presheaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gen {
    C,
    W,
    S,
}

impl Gen {
    pub fn arity(self) -> (usize, usize) {
        match self {
            Gen::C => (2, 1),
            Gen::W => (0, 1),
            Gen::S => (2, 2),
        }
    }
}

/// `id_left + gen + id_right`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub gen: Gen,
    pub left: usize,
    pub right: usize,
}

impl Step {
    /// The placed generator `id_left + gen + id_right` with the standard
    /// interpretation of the generators.
    pub fn map(&self) -> FinMap {
        let g = generators();
        let gen = match self.gen {
            Gen::C => g.c,
            Gen::W => g.w,
            Gen::S => g.s,
        };
        FinMap::identity(self.left)
            .coproduct(&gen)
            .coproduct(&FinMap::identity(self.right))
    }
}

const fn step(gen: Gen, left: usize, right: usize) -> Step {
    Step { gen, left, right }
}

/// A commuting diagram on the object `1`, given as two composable words of
/// generator steps out of `slots` copies of `1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub name: &'static str,
    pub slots: usize,
    pub lhs: Vec<Step>,
    pub rhs: Vec<Step>,
}

impl Diagram {
    /// Largest object passed through by either side.
    pub fn span(&self) -> usize {
        let mut widest = self.slots;
        for word in [&self.lhs, &self.rhs] {
            let mut width = self.slots;
            for st in word.iter() {
                let (dom, cod) = st.gen.arity();
                width = width - dom + cod;
                widest = widest.max(width);
            }
        }
        widest
    }
}

/// The eight diagrams of a symmetric monoid `(1, c, w, s)`.
pub fn symmetric_monoid_diagrams() -> Vec<Diagram> {
    use Gen::*;
    vec![
        Diagram {
            name: "associativity",
            slots: 3,
            lhs: vec![step(C, 0, 1), step(C, 0, 0)],
            rhs: vec![step(C, 1, 0), step(C, 0, 0)],
        },
        Diagram {
            name: "left-unit",
            slots: 1,
            lhs: vec![step(W, 0, 1), step(C, 0, 0)],
            rhs: vec![],
        },
        Diagram {
            name: "right-unit",
            slots: 1,
            lhs: vec![step(W, 1, 0), step(C, 0, 0)],
            rhs: vec![],
        },
        Diagram {
            name: "commutativity",
            slots: 2,
            lhs: vec![step(S, 0, 0), step(C, 0, 0)],
            rhs: vec![step(C, 0, 0)],
        },
        Diagram {
            name: "involution",
            slots: 2,
            lhs: vec![step(S, 0, 0), step(S, 0, 0)],
            rhs: vec![],
        },
        Diagram {
            name: "braid",
            slots: 3,
            lhs: vec![step(S, 0, 1), step(S, 1, 0), step(S, 0, 1)],
            rhs: vec![step(S, 1, 0), step(S, 0, 1), step(S, 1, 0)],
        },
        Diagram {
            name: "unit-exchange",
            slots: 1,
            lhs: vec![step(W, 0, 1), step(S, 0, 0)],
            rhs: vec![step(W, 1, 0)],
        },
        Diagram {
            name: "contraction-exchange",
            slots: 3,
            lhs: vec![step(S, 0, 1), step(S, 1, 0), step(C, 0, 1)],
            rhs: vec![step(C, 1, 0), step(S, 0, 0)],
        },
    ]
}

/// Evaluate a word of steps to a single map, interpreting the generators by
/// the supplied maps.
pub fn evaluate_word(
    slots: usize,
    word: &[Step],
    c: &FinMap,
    w: &FinMap,
    s: &FinMap,
) -> Result<FinMap> {
    word.iter().try_fold(FinMap::identity(slots), |acc, st| {
        let g = match st.gen {
            Gen::C => c,
            Gen::W => w,
            Gen::S => s,
        };
        let placed = FinMap::identity(st.left)
            .coproduct(g)
            .coproduct(&FinMap::identity(st.right));
        acc.compose(&placed)
    })
}

/// Check the eight symmetric-monoid diagrams for `(1, c, w, s)` as equalities
/// of composite maps.
pub fn check_symmetric_monoid(c: &FinMap, w: &FinMap, s: &FinMap) -> Result<Report> {
    for (label, map, want) in [("c", c, (2, 1)), ("w", w, (0, 1)), ("s", s, (2, 2))] {
        if (map.dom, map.cod) != want {
            return Err(Error::Shape(format!(
                "{label} must be {}->{}, got {}->{}",
                want.0, want.1, map.dom, map.cod
            )));
        }
    }
    let mut report = Report::new("symmetric monoid (1, c, w, s)");
    for d in symmetric_monoid_diagrams() {
        let lhs = evaluate_word(d.slots, &d.lhs, c, w, s)?;
        let rhs = evaluate_word(d.slots, &d.rhs, c, w, s)?;
        let ok = lhs == rhs;
        report.push(CheckResult::single(
            d.name,
            ok,
            Some(witness(&d.slots, lhs.table(), rhs.table())),
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(cod: usize, t: &[usize]) -> FinMap {
        FinMap::new(cod, t.to_vec()).unwrap()
    }

    #[test]
    fn identities() {
        assert_eq!(identity(0).table(), &[] as &[usize]);
        assert_eq!(identity(0).cod(), 0);
        assert_eq!(identity(2).table(), &[0, 1]);
        for f in enumerate_maps(3, 2) {
            assert_eq!(identity(3).compose(&f).unwrap(), f);
            assert_eq!(f.compose(&identity(2)).unwrap(), f);
        }
    }

    #[test]
    fn construction_validates_entries() {
        assert_eq!(
            FinMap::new(2, vec![0, 2]),
            Err(Error::MapEntry {
                position: 1,
                entry: 2,
                cod: 2
            })
        );
        assert!(FinMap::new(0, vec![]).is_ok());
    }

    #[test]
    fn composition_examples() {
        let g = generators();
        assert_eq!(g.s.compose(&g.s).unwrap(), identity(2));
        let unit = g.w.coproduct(&identity(1)).compose(&g.c).unwrap();
        assert_eq!(unit, identity(1));
        assert!(matches!(
            g.c.compose(&g.c),
            Err(Error::Composable { .. })
        ));
    }

    #[test]
    fn coproduct_examples() {
        let g = generators();
        assert_eq!(g.c.coproduct(&identity(1)), map(2, &[0, 0, 1]));
        for f in enumerate_maps(2, 3) {
            assert_eq!(identity(0).coproduct(&f), f);
        }
        let ww = g.w.coproduct(&g.w);
        assert_eq!((ww.dom(), ww.cod(), ww.table().len()), (0, 2, 0));
    }

    #[test]
    fn generator_tables() {
        let g = generators();
        assert_eq!(g.c.table(), &[0, 0]);
        assert_eq!(g.s.table(), &[1, 0]);
        assert_eq!((g.w.dom(), g.w.cod()), (0, 1));
        assert_eq!(old(2), map(3, &[0, 1]));
        assert_eq!(new(2), map(3, &[2]));
        // s = [new_1, old_1]
        assert_eq!(g.s.apply(0), new(1).apply(0));
        assert_eq!(g.s.apply(1), old(1).apply(0));
    }

    #[test]
    fn enumeration_examples() {
        let maps: Vec<_> = enumerate_maps(2, 2).into_iter().map(|f| f.table).collect();
        assert_eq!(maps, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(enumerate_maps(0, 5).len(), 1);
        assert_eq!(enumerate_maps(3, 1), vec![map(1, &[0, 0, 0])]);
        assert!(enumerate_maps(2, 0).is_empty());
        assert_eq!(enumerate_maps(0, 0), vec![identity(0)]);
    }

    #[test]
    fn index_roundtrip() {
        for m in 0..4 {
            for n in 0..4 {
                for (i, f) in enumerate_maps(m, n).into_iter().enumerate() {
                    assert_eq!(f.index(), i);
                }
            }
        }
    }

    #[test]
    fn universal_symmetric_monoid_passes() {
        let g = generators();
        let r = check_symmetric_monoid(&g.c, &g.w, &g.s).unwrap();
        assert_eq!(r.checks.len(), 8);
        assert!(r.passed(), "{}", r.render_text());
    }

    #[test]
    fn identity_exchange_breaks_unit_exchange() {
        let g = generators();
        let r = check_symmetric_monoid(&g.c, &g.w, &identity(2)).unwrap();
        let ws = r.check("unit-exchange").unwrap();
        assert!(!ws.passed());
        let w = ws.witness.as_ref().unwrap();
        assert_eq!(w["lhs"], serde_json::json!([1]));
        assert_eq!(w["rhs"], serde_json::json!([0]));
    }

    #[test]
    fn shape_is_validated() {
        let g = generators();
        let bad_c = map(2, &[0, 1]);
        assert!(matches!(
            check_symmetric_monoid(&bad_c, &g.w, &g.s),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn serde_rejects_bad_tables() {
        let ok: FinMap = serde_json::from_str(r#"{"dom":2,"cod":2,"table":[1,0]}"#).unwrap();
        assert_eq!(ok, generators().s);
        assert!(serde_json::from_str::<FinMap>(r#"{"dom":2,"cod":1,"table":[1,0]}"#).is_err());
        assert!(serde_json::from_str::<FinMap>(r#"{"dom":3,"cod":2,"table":[1,0]}"#).is_err());
    }
}

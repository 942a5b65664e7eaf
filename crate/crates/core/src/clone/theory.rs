use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{witness, Report, Tally};

use super::{AbstractClone, Budget, Element};

/// A morphism `src -> dst` of the Lawvere theory of a clone: `dst` elements
/// of `C_src`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoryHom<E> {
    pub src: usize,
    pub dst: usize,
    pub components: Vec<E>,
}

impl<E: Element> TheoryHom<E> {
    pub fn new(src: usize, components: Vec<E>) -> Self {
        TheoryHom {
            src,
            dst: components.len(),
            components,
        }
    }
}

/// `(iota^m_0, .., iota^m_{m-1}) : m -> m`
pub fn theory_identity<K: AbstractClone>(k: &K, m: usize) -> Result<TheoryHom<K::Elem>> {
    let components = (0..m).map(|i| k.iota(m, i)).collect::<Result<Vec<_>>>()?;
    Ok(TheoryHom::new(m, components))
}

/// `F : m -> n` after `G : l -> m`, with `k`-th component
/// `mu_{m,l}(F_k, G)`.
pub fn theory_compose<K: AbstractClone>(
    k: &K,
    f: &TheoryHom<K::Elem>,
    g: &TheoryHom<K::Elem>,
) -> Result<TheoryHom<K::Elem>> {
    if f.src != g.dst || f.components.len() != f.dst || g.components.len() != g.dst {
        return Err(Error::Composable {
            left_dom: g.src,
            left_cod: g.dst,
            right_dom: f.src,
            right_cod: f.dst,
        });
    }
    let components = f
        .components
        .iter()
        .map(|fk| k.mu(f.src, g.src, fk, &g.components))
        .collect::<Result<Vec<_>>>()?;
    Ok(TheoryHom {
        src: g.src,
        dst: f.dst,
        components,
    })
}

/// Every hom `m -> n` with components from the enumerated carrier `C_m`, in
/// lexicographic order.
pub fn enumerate_theory_homs<K: AbstractClone>(
    k: &K,
    m: usize,
    n: usize,
    budget: &Budget,
) -> Result<Vec<TheoryHom<K::Elem>>> {
    let c = k.elems(m, budget)?;
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<K::Elem>| {
                c.elems.iter().map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e.clone());
                    v
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(|v| TheoryHom::new(m, v)).collect())
}

fn homs_equal<K: AbstractClone>(k: &K, a: &TheoryHom<K::Elem>, b: &TheoryHom<K::Elem>) -> bool {
    a.src == b.src
        && a.dst == b.dst
        && a.components
            .iter()
            .zip(&b.components)
            .all(|(x, y)| k.elem_eq(a.src, x, y))
}

/// Associativity and unit laws of theory composition over all objects up to
/// `bound`.
pub fn theory_laws_check<K: AbstractClone>(k: &K, bound: usize, budget: &Budget) -> Result<Report> {
    theory_laws_check_with(k, bound, budget, theory_compose)
}

/// As [`theory_laws_check`] with a caller-supplied composition, for testing
/// the checker itself.
pub fn theory_laws_check_with<K, C>(
    k: &K,
    bound: usize,
    budget: &Budget,
    compose: C,
) -> Result<Report>
where
    K: AbstractClone,
    C: Fn(&K, &TheoryHom<K::Elem>, &TheoryHom<K::Elem>) -> Result<TheoryHom<K::Elem>>,
{
    let carriers = (0..=bound)
        .map(|n| k.elems(n, budget))
        .collect::<Result<Vec<_>>>()?;
    let incomplete = carriers.iter().any(|c| !c.complete);
    let hom = |m: usize, idx: &[usize]| {
        TheoryHom::new(m, idx.iter().map(|&i| carriers[m].elems[i].clone()).collect())
    };
    let mut report = Report::new(format!("theory of the {}", k.describe()));

    // h : a -> b, g : b -> c, f : c -> d
    let mut assoc = Tally::new("associativity", &budget.sampling);
    assoc.mark_incomplete(incomplete);
    for a in 0..=bound {
        for b in 0..=bound {
            for c in 0..=bound {
                for d in 0..=bound {
                    let mut dims = vec![carriers[c].len(); d];
                    dims.extend(std::iter::repeat_n(carriers[b].len(), c));
                    dims.extend(std::iter::repeat_n(carriers[a].len(), b));
                    assoc.sweep(&dims, |idx| {
                        let f = hom(c, &idx[..d]);
                        let g = hom(b, &idx[d..d + c]);
                        let h = hom(a, &idx[d + c..]);
                        let lhs = compose(k, &f, &compose(k, &g, &h)?)?;
                        let rhs = compose(k, &compose(k, &f, &g)?, &h)?;
                        Ok((!homs_equal(k, &lhs, &rhs))
                            .then(|| witness(&serde_json::json!({"f": f, "g": g, "h": h}), &lhs, &rhs)))
                    })?;
                }
            }
        }
    }
    report.push(assoc.finish());

    let mut unit = Tally::new("identity", &budget.sampling);
    unit.mark_incomplete(incomplete);
    for m in 0..=bound {
        for n in 0..=bound {
            let id_m = theory_identity(k, m)?;
            let id_n = theory_identity(k, n)?;
            unit.sweep(&vec![carriers[m].len(); n], |idx| {
                let f = hom(m, idx);
                for (side, composite) in [
                    ("right", compose(k, &f, &id_m)?),
                    ("left", compose(k, &id_n, &f)?),
                ] {
                    if !homs_equal(k, &composite, &f) {
                        return Ok(Some(witness(
                            &serde_json::json!({"f": f, "side": side}),
                            &composite,
                            &f,
                        )));
                    }
                }
                Ok(None)
            })?;
        }
    }
    report.push(unit.finish());
    Ok(report)
}

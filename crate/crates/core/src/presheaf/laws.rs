use std::collections::HashMap;

use serde_json::{json, Value};

use crate::clone::Element;
use crate::error::Result;
use crate::fin_cat::{enumerate_maps, hom_count, symmetric_monoid_diagrams, FinMap};
use crate::report::{witness, CheckResult, Report, Sampling, Tally};

use super::{delta_power, delta_structure, strengths, within, Presheaf, Product, Terminal};

/// Carriers of every stage up to `bound`.
pub(crate) struct Stages<E> {
    pub elems: Vec<Vec<E>>,
    pub incomplete: bool,
}

impl<E: Element> Stages<E> {
    pub fn load<P: Presheaf<Elem = E>>(p: &P, bound: usize) -> Result<Self> {
        within(p, bound)?;
        let mut elems = Vec::with_capacity(bound + 1);
        let mut incomplete = false;
        for m in 0..=bound {
            let c = p.carrier(m)?;
            incomplete |= !c.complete;
            elems.push(c.elems);
        }
        Ok(Stages { elems, incomplete })
    }

    pub fn len(&self, m: usize) -> usize {
        self.elems[m].len()
    }

    pub fn bound(&self) -> usize {
        self.elems.len() - 1
    }

    /// Stage `m + span` exists, for `m` ranging from 0.
    pub fn stages(&self, span: usize) -> std::ops::RangeInclusive<usize> {
        match self.bound().checked_sub(span) {
            Some(top) => 0..=top,
            #[allow(clippy::reversed_empty_ranges)]
            None => 1..=0,
        }
    }
}

/// A map `f : m -> n` with `f + id_1` and `f + id_2` precomputed.
pub(crate) struct Shifted {
    pub f: FinMap,
    pub f1: FinMap,
    pub f2: FinMap,
}

pub(crate) fn shifted_maps(m: usize, n: usize) -> Vec<Shifted> {
    enumerate_maps(m, n)
        .into_iter()
        .map(|f| Shifted {
            f1: f.extend(1),
            f2: f.extend(2),
            f,
        })
        .collect()
}

fn mismatch<I: serde::Serialize, T: serde::Serialize + PartialEq>(
    instance: I,
    lhs: &T,
    rhs: &T,
) -> Option<Value> {
    (lhs != rhs).then(|| witness(&instance, lhs, rhs))
}

// action tables: for each f : a -> b and x in P(a), the image and, when the
// image lies in the enumerated P(b), its index there
struct ActTable<E> {
    image: Vec<E>,
    index: Vec<Option<u32>>,
}

/// Identity and composition laws of the action, over all maps between stages
/// up to `bound`.
pub(crate) fn functoriality_checks<P: Presheaf>(
    p: &P,
    st: &Stages<P::Elem>,
    sampling: &Sampling,
) -> Result<Vec<CheckResult>> {
    let bound = st.bound();
    let mut identity = Tally::new("functoriality-identity", sampling);
    identity.mark_incomplete(st.incomplete);
    for m in 0..=bound {
        let id = FinMap::identity(m);
        let c = &st.elems[m];
        identity.sweep(&[c.len()], |i| {
            let x = &c[i[0]];
            let y = p.act(&id, x)?;
            Ok(mismatch(json!({"m": m, "x": x}), &y, x))
        })?;
    }

    let index: Vec<HashMap<&P::Elem, u32>> = st
        .elems
        .iter()
        .map(|es| es.iter().enumerate().map(|(i, e)| (e, i as u32)).collect())
        .collect();
    let maps: Vec<Vec<Vec<FinMap>>> = (0..=bound)
        .map(|a| (0..=bound).map(|b| enumerate_maps(a, b)).collect())
        .collect();
    // tables[a][b][f]
    let mut tables: Vec<Vec<Vec<ActTable<P::Elem>>>> = Vec::with_capacity(bound + 1);
    for a in 0..=bound {
        let mut row = Vec::with_capacity(bound + 1);
        for b in 0..=bound {
            let mut per_map = Vec::with_capacity(hom_count(a, b));
            for f in &maps[a][b] {
                let image = st.elems[a]
                    .iter()
                    .map(|x| p.act(f, x))
                    .collect::<Result<Vec<_>>>()?;
                let idx = image.iter().map(|y| index[b].get(y).copied()).collect();
                per_map.push(ActTable { image, index: idx });
            }
            row.push(per_map);
        }
        tables.push(row);
    }

    let mut composition = Tally::new("functoriality-composition", sampling);
    composition.mark_incomplete(st.incomplete);
    for a in 0..=bound {
        for b in 0..=bound {
            for c in 0..=bound {
                let dims = [hom_count(a, b), hom_count(b, c), st.len(a)];
                composition.sweep(&dims, |i| {
                    let (fi, gi, x) = (i[0], i[1], i[2]);
                    let f = &tables[a][b][fi];
                    let g = &tables[b][c][gi];
                    let (fmap, gmap) = (&maps[a][b][fi], &maps[b][c][gi]);
                    // index of f;g among maps a -> c
                    let fg = fmap.table().iter().fold(0usize, |acc, &j| acc * c + gmap.apply(j));
                    let whole = &tables[a][c][fg];
                    let ok = match (f.index[x], whole.index[x]) {
                        (Some(y), Some(z)) => g.index[y as usize] == Some(z),
                        (Some(y), None) => g.image[y as usize] == whole.image[x],
                        (None, _) => p.act(gmap, &f.image[x])? == whole.image[x],
                    };
                    if ok {
                        return Ok(None);
                    }
                    let stepwise = p.act(gmap, &f.image[x])?;
                    Ok(Some(witness(
                        &json!({"f": fmap, "g": gmap, "x": st.elems[a][x]}),
                        &whole.image[x],
                        &stepwise,
                    )))
                })?;
            }
        }
    }
    Ok(vec![identity.finish(), composition.finish()])
}

/// `P(id) = id` and `P(f ; g) = P(g) . P(f)` over all maps between stages up to
/// `bound`.
pub fn check_functoriality<P: Presheaf>(p: &P, bound: usize, sampling: &Sampling) -> Result<Report> {
    let st = Stages::load(p, bound)?;
    let mut report = Report::new(format!("functoriality of {}", p.describe()));
    for c in functoriality_checks(p, &st, sampling)? {
        report.push(c);
    }
    Ok(report)
}

/// The symmetric monad laws of `(delta, c, w, s)` on `P`, the strength laws,
/// naturality of the strengths and of the distributive law, the distributive
/// law diagrams, and invertibility of the monoidal comparison. Each law is
/// checked at every stage where all the stages it touches are at most
/// `bound`. The second presheaf of every strength is `P` itself.
pub fn check_delta_laws<P: Presheaf>(p: &P, bound: usize, sampling: &Sampling) -> Result<Report> {
    let st = Stages::load(p, bound)?;
    let el = &st.elems;
    let d = delta_structure(p);
    let pp = strengths(p, p);
    let dp = delta_power(p, 1)?;
    let mut report = Report::new(format!("delta laws on {}", p.describe()));
    let tally = |name: &str| {
        let mut t = Tally::new(name, sampling);
        t.mark_incomplete(st.incomplete);
        t
    };

    // symmetric monoid diagrams, each step id_j + gen + id_k acting at stage m
    for diagram in symmetric_monoid_diagrams() {
        let mut t = tally(&format!("delta/{}", diagram.name));
        for m in st.stages(diagram.span()) {
            let lhs_maps: Vec<FinMap> = diagram.lhs.iter().map(|s| s.map().shift(m)).collect();
            let rhs_maps: Vec<FinMap> = diagram.rhs.iter().map(|s| s.map().shift(m)).collect();
            let xs = &el[m + diagram.slots];
            t.sweep(&[xs.len()], |i| {
                let x = &xs[i[0]];
                let run = |maps: &[FinMap]| -> Result<P::Elem> {
                    maps.iter().try_fold(x.clone(), |acc, f| p.act(f, &acc))
                };
                Ok(mismatch(json!({"m": m, "x": x}), &run(&lhs_maps)?, &run(&rhs_maps)?))
            })?;
        }
        report.push(t.finish());
    }

    // strength str : delta(P) x Q -> delta(P x Q)
    let prod = Product(p, p);
    let dprod = delta_structure(&prod);
    let dstr = strengths(&dp, p);
    let mut t = tally("str/unit");
    for m in st.stages(1) {
        t.sweep(&[st.len(m), st.len(m)], |i| {
            let (x, y) = (&el[m][i[0]], &el[m][i[1]]);
            let lhs = pp.str(m, &d.weaken(m, x)?, y)?;
            let rhs = dprod.weaken(m, &(x.clone(), y.clone()))?;
            Ok(mismatch(json!({"m": m, "x": x, "y": y}), &lhs, &rhs))
        })?;
    }
    report.push(t.finish());

    let mut t = tally("str/multiplication");
    for m in st.stages(2) {
        t.sweep(&[st.len(m + 2), st.len(m)], |i| {
            let (a, y) = (&el[m + 2][i[0]], &el[m][i[1]]);
            let lhs = pp.str(m, &d.contract(m, a)?, y)?;
            let (a1, y1) = dstr.str(m, a, y)?;
            let twice = pp.str(m + 1, &a1, &y1)?;
            let rhs = dprod.contract(m, &twice)?;
            Ok(mismatch(json!({"m": m, "a": a, "y": y}), &lhs, &rhs))
        })?;
    }
    report.push(t.finish());

    let mut t = tally("str/symmetry");
    for m in st.stages(2) {
        t.sweep(&[st.len(m + 2), st.len(m)], |i| {
            let (a, y) = (&el[m + 2][i[0]], &el[m][i[1]]);
            let through = |a: &P::Elem| -> Result<(P::Elem, P::Elem)> {
                let (a1, y1) = dstr.str(m, a, y)?;
                pp.str(m + 1, &a1, &y1)
            };
            let lhs = dprod.swap(m, &through(a)?)?;
            let rhs = through(&d.swap(m, a)?)?;
            Ok(mismatch(json!({"m": m, "a": a, "y": y}), &lhs, &rhs))
        })?;
    }
    report.push(t.finish());

    // strength str' : P x delta(Q) -> delta(P x Q)
    let dstr_p = strengths(p, &dp);
    let mut t = tally("str'/unit");
    for m in st.stages(1) {
        t.sweep(&[st.len(m), st.len(m)], |i| {
            let (x, y) = (&el[m][i[0]], &el[m][i[1]]);
            let lhs = pp.str_prime(m, x, &d.weaken(m, y)?)?;
            let rhs = dprod.weaken(m, &(x.clone(), y.clone()))?;
            Ok(mismatch(json!({"m": m, "x": x, "y": y}), &lhs, &rhs))
        })?;
    }
    report.push(t.finish());

    let mut t = tally("str'/multiplication");
    for m in st.stages(2) {
        t.sweep(&[st.len(m), st.len(m + 2)], |i| {
            let (x, b) = (&el[m][i[0]], &el[m + 2][i[1]]);
            let lhs = pp.str_prime(m, x, &d.contract(m, b)?)?;
            let (x1, b1) = dstr_p.str_prime(m, x, b)?;
            let rhs = dprod.contract(m, &pp.str_prime(m + 1, &x1, &b1)?)?;
            Ok(mismatch(json!({"m": m, "x": x, "b": b}), &lhs, &rhs))
        })?;
    }
    report.push(t.finish());

    let mut t = tally("str'/symmetry");
    for m in st.stages(2) {
        t.sweep(&[st.len(m), st.len(m + 2)], |i| {
            let (x, b) = (&el[m][i[0]], &el[m + 2][i[1]]);
            let through = |b: &P::Elem| -> Result<(P::Elem, P::Elem)> {
                let (x1, b1) = dstr_p.str_prime(m, x, b)?;
                pp.str_prime(m + 1, &x1, &b1)
            };
            let lhs = dprod.swap(m, &through(b)?)?;
            let rhs = through(&d.swap(m, b)?)?;
            Ok(mismatch(json!({"m": m, "x": x, "b": b}), &lhs, &rhs))
        })?;
    }
    report.push(t.finish());

    let mut t = tally("str'/mirror");
    for m in st.stages(1) {
        t.sweep(&[st.len(m), st.len(m + 1)], |i| {
            let (x, b) = (&el[m][i[0]], &el[m + 1][i[1]]);
            let lhs = pp.str_prime(m, x, b)?;
            let (b1, x1) = pp.str(m, b, x)?;
            Ok(mismatch(json!({"m": m, "x": x, "b": b}), &lhs, &(x1, b1)))
        })?;
    }
    report.push(t.finish());

    // naturality: one family per pair of stages, the map is a coordinate
    let mut nat_str = tally("str/naturality");
    let mut nat_strp = tally("str'/naturality");
    let mut nat_bullet = tally("str-bullet/naturality");
    let mut nat_dist = tally("dist/naturality");
    let mut nat_ell = tally("ell/naturality");
    let dprod_of = delta_power(&prod, 1)?;
    let prod_of_d = Product(&dp, &dp);
    for m in st.stages(1) {
        for n in st.stages(1) {
            let maps = shifted_maps(m, n);
            nat_str.sweep(&[maps.len(), st.len(m + 1), st.len(m)], |i| {
                let sh = &maps[i[0]];
                let (a, y) = (&el[m + 1][i[1]], &el[m][i[2]]);
                let lhs = pp.str(n, &p.act(&sh.f1, a)?, &p.act(&sh.f, y)?)?;
                let (a1, y1) = pp.str(m, a, y)?;
                let rhs = (p.act(&sh.f1, &a1)?, p.act(&sh.f1, &y1)?);
                Ok(mismatch(json!({"f": sh.f, "a": a, "y": y}), &lhs, &rhs))
            })?;
            nat_strp.sweep(&[maps.len(), st.len(m), st.len(m + 1)], |i| {
                let sh = &maps[i[0]];
                let (x, b) = (&el[m][i[1]], &el[m + 1][i[2]]);
                let lhs = pp.str_prime(n, &p.act(&sh.f, x)?, &p.act(&sh.f1, b)?)?;
                let (x1, b1) = pp.str_prime(m, x, b)?;
                let rhs = (p.act(&sh.f1, &x1)?, p.act(&sh.f1, &b1)?);
                Ok(mismatch(json!({"f": sh.f, "x": x, "b": b}), &lhs, &rhs))
            })?;
            nat_bullet.sweep(&[maps.len(), st.len(m + 1), st.len(m), st.len(m)], |i| {
                let sh = &maps[i[0]];
                let (a, x, y) = (&el[m + 1][i[1]], &el[m][i[2]], &el[m][i[3]]);
                let lhs = pp.str_bullet(n, &p.act(&sh.f1, a)?, &p.act(&sh.f, x)?, &p.act(&sh.f, y)?)?;
                let (a1, y1, x1, y2) = pp.str_bullet(m, a, x, y)?;
                let rhs = (
                    p.act(&sh.f1, &a1)?,
                    p.act(&sh.f1, &y1)?,
                    p.act(&sh.f, &x1)?,
                    p.act(&sh.f, &y2)?,
                );
                Ok(mismatch(json!({"f": sh.f, "a": a, "x": x, "y": y}), &lhs, &rhs))
            })?;
            nat_ell.sweep(&[maps.len(), st.len(m + 1), st.len(m + 1)], |i| {
                let sh = &maps[i[0]];
                let z = (el[m + 1][i[1]].clone(), el[m + 1][i[2]].clone());
                let lhs = pp.ell(&dprod_of.act(&sh.f, &z)?);
                let rhs = prod_of_d.act(&sh.f, &pp.ell(&z))?;
                Ok(mismatch(json!({"f": sh.f, "z": z}), &lhs, &rhs))
            })?;
        }
    }
    for m in st.stages(2) {
        for n in st.stages(2) {
            let maps = shifted_maps(m, n);
            nat_dist.sweep(&[maps.len(), st.len(m + 2), st.len(m + 1)], |i| {
                let sh = &maps[i[0]];
                let (a, b) = (&el[m + 2][i[1]], &el[m + 1][i[2]]);
                let lhs = pp.dist(n, &p.act(&sh.f2, a)?, &p.act(&sh.f1, b)?)?;
                let (a1, b1) = pp.dist(m, a, b)?;
                let rhs = (p.act(&sh.f2, &a1)?, p.act(&sh.f1, &b1)?);
                Ok(mismatch(json!({"f": sh.f, "a": a, "b": b}), &lhs, &rhs))
            })?;
        }
    }
    for t in [nat_str, nat_strp, nat_bullet, nat_dist] {
        report.push(t.finish());
    }

    // str-bullet as the composite (id x diagonal) ; shuffle ; (str x id)
    let mut t = tally("str-bullet/composite");
    for m in st.stages(1) {
        t.sweep(&[st.len(m + 1), st.len(m), st.len(m)], |i| {
            let (a, x, y) = (&el[m + 1][i[0]], &el[m][i[1]], &el[m][i[2]]);
            let lhs = pp.str_bullet(m, a, x, y)?;
            // (a, x, y) -> (a, x, y, y) -> (a, y, x, y) -> (str(a, y), x, y)
            let (a1, y1) = pp.str(m, a, y)?;
            let rhs = (a1, y1, x.clone(), y.clone());
            Ok(mismatch(json!({"m": m, "a": a, "x": x, "y": y}), &lhs, &rhs))
        })?;
    }
    report.push(t.finish());

    // counit of the comonad (-) x Q: dropping Q after str-bullet
    let mut t = tally("str-bullet/counit");
    for m in st.stages(1) {
        t.sweep(&[st.len(m + 1), st.len(m), st.len(m)], |i| {
            let (a, x, y) = (&el[m + 1][i[0]], &el[m][i[1]], &el[m][i[2]]);
            let (a1, _, x1, _) = pp.str_bullet(m, a, x, y)?;
            Ok(mismatch(json!({"m": m, "a": a, "x": x, "y": y}), &(a1, x1), &(a.clone(), x.clone())))
        })?;
    }
    report.push(t.finish());

    // associativity: strengthening by Q then by the terminal presheaf agrees
    // with strengthening by Q x 1 at once
    let one = Terminal;
    let by_pq = strengths(&prod, &one);
    let by_q1 = strengths(p, Product(p, &one));
    let mut t = tally("str-bullet/associativity");
    for m in st.stages(1) {
        t.sweep(&[st.len(m + 1), st.len(m), st.len(m)], |i| {
            let (a, x, y) = (&el[m + 1][i[0]], &el[m][i[1]], &el[m][i[2]]);
            let (a1, y1, x1, y2) = pp.str_bullet(m, a, x, y)?;
            let ((a2, y3), (), (x2, y4), ()) = by_pq.str_bullet(m, &(a1, y1), &(x1, y2), &())?;
            let lhs = (a2, y3, x2, y4);
            let (a3, (y5, ()), x3, (y6, ())) = by_q1.str_bullet(m, a, x, &(y.clone(), ()))?;
            Ok(mismatch(json!({"m": m, "a": a, "x": x, "y": y}), &lhs, &(a3, y5, x3, y6)))
        })?;
    }
    report.push(t.finish());

    // distributive law of delta over delta-bullet = delta(-) x (-)
    let bullet = Product(&dp, p);
    let dbullet = delta_structure(&bullet);
    let dd = strengths(&dp, &dp);
    let mut t = tally("dist/multiplication");
    for m in st.stages(3) {
        t.sweep(&[st.len(m + 3), st.len(m + 2)], |i| {
            let (a, b) = (&el[m + 3][i[0]], &el[m + 2][i[1]]);
            let (a1, b1) = dbullet.contract(m, &(a.clone(), b.clone()))?;
            let lhs = pp.dist(m, &a1, &b1)?;
            let (a2, b2) = pp.dist(m + 1, a, b)?;
            let (a3, b3) = dd.dist(m, &a2, &b2)?;
            let rhs = (d.contract(m + 1, &a3)?, d.contract(m, &b3)?);
            Ok(mismatch(json!({"m": m, "a": a, "b": b}), &lhs, &rhs))
        })?;
    }
    report.push(t.finish());

    let mut t = tally("dist/unit");
    for m in st.stages(2) {
        t.sweep(&[st.len(m + 1), st.len(m)], |i| {
            let (a, b) = (&el[m + 1][i[0]], &el[m][i[1]]);
            let (a1, b1) = dbullet.weaken(m, &(a.clone(), b.clone()))?;
            let lhs = pp.dist(m, &a1, &b1)?;
            let rhs = (d.weaken(m + 1, a)?, d.weaken(m, b)?);
            Ok(mismatch(json!({"m": m, "a": a, "b": b}), &lhs, &rhs))
        })?;
    }
    report.push(t.finish());

    let mut t = tally("dist/symmetry");
    for m in st.stages(3) {
        t.sweep(&[st.len(m + 3), st.len(m + 2)], |i| {
            let (a, b) = (&el[m + 3][i[0]], &el[m + 2][i[1]]);
            let both = |a: &P::Elem, b: &P::Elem| -> Result<(P::Elem, P::Elem)> {
                let (a1, b1) = pp.dist(m + 1, a, b)?;
                dd.dist(m, &a1, &b1)
            };
            let (a1, b1) = both(a, b)?;
            let lhs = (d.swap(m + 1, &a1)?, d.swap(m, &b1)?);
            let (a2, b2) = dbullet.swap(m, &(a.clone(), b.clone()))?;
            let rhs = both(&a2, &b2)?;
            Ok(mismatch(json!({"m": m, "a": a, "b": b}), &lhs, &rhs))
        })?;
    }
    report.push(t.finish());

    // the comparison delta(P x P) -> delta(P) x delta(P) and its inverse
    let mut t = tally("ell/round-trip");
    for m in st.stages(1) {
        t.sweep(&[st.len(m + 1), st.len(m + 1)], |i| {
            let z = (el[m + 1][i[0]].clone(), el[m + 1][i[1]].clone());
            let there = pp.ell_inv(&pp.ell(&z));
            let back = pp.ell(&pp.ell_inv(&z));
            Ok(mismatch(json!({"m": m, "z": z}), &(there, back), &(z.clone(), z.clone())))
        })?;
    }
    report.push(t.finish());
    report.push(nat_ell.finish());

    // delta(1) = 1
    let d1 = delta_power(Terminal, 1)?;
    let mut t = tally("e/iso");
    for m in 0..=bound {
        let size = d1.carrier(m)?.len();
        t.record((size != 1).then(|| witness(&json!({"m": m}), &size, &1)));
    }
    report.push(t.finish());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fin_cat::{check_symmetric_monoid, generators};
    use crate::presheaf::{representable_v, TruncatedPresheaf};

    #[test]
    fn v_is_functorial_and_satisfies_the_delta_laws() {
        let v = representable_v();
        let s = Sampling::exhaustive();
        assert!(check_functoriality(&v, 3, &s).unwrap().passed());
        let r = check_delta_laws(&v, 4, &s).unwrap();
        assert!(r.passed(), "{}", r.render_text());
        assert_eq!(r.coverage(), crate::report::Coverage::Exhaustive);
        for name in ["dist/multiplication", "dist/symmetry", "ell/round-trip", "str-bullet/composite"] {
            assert!(r.check(name).unwrap().instances > 0, "{name} never ran");
        }
    }

    #[test]
    fn each_diagram_is_the_image_of_a_monoid_equation() {
        let g = generators();
        let monoid = check_symmetric_monoid(&g.c, &g.w, &g.s).unwrap();
        let delta = check_delta_laws(&representable_v(), 4, &Sampling::exhaustive()).unwrap();
        for d in symmetric_monoid_diagrams() {
            assert_eq!(
                monoid.check(d.name).unwrap().passed(),
                delta.check(&format!("delta/{}", d.name)).unwrap().passed()
            );
        }
    }

    #[test]
    fn corrupted_table_is_caught() {
        let (mut t, _) = TruncatedPresheaf::tabulate(&representable_v(), 3).unwrap();
        let s = generators().s;
        t.set_action(&s, 0, 0).unwrap();
        let s_ = Sampling::exhaustive();
        let r = check_functoriality(&t, 3, &s_).unwrap();
        let comp = r.check("functoriality-composition").unwrap();
        assert!(!comp.passed());
        let inst = &comp.witness.as_ref().unwrap()["instance"];
        assert!(inst.get("f").is_some() && inst.get("g").is_some() && inst.get("x").is_some());
        let d = check_delta_laws(&t, 3, &s_).unwrap();
        assert!(!d.check("delta/involution").unwrap().passed());
    }

    #[test]
    fn truncation_bounds_are_enforced() {
        let (t, _) = TruncatedPresheaf::tabulate(&representable_v(), 2).unwrap();
        assert!(check_delta_laws(&t, 3, &Sampling::exhaustive()).is_err());
        assert!(crate::presheaf::delta_power(&t, 3).is_err());
        assert_eq!(crate::presheaf::delta_power(&t, 1).unwrap().max_stage(), Some(1));
    }
}

//! Reference clones, tabulated substitution algebras and table mutations,
//! shared by the demo command and the test suites.

use std::collections::BTreeMap;

use crate::bridge::s_functor;
use crate::clone::{
    builtin_clone, finite_clone_of_algebra, Budget, FiniteAlgebra, FiniteClone, FreeClone,
    Operation, Signature,
};
use crate::error::{Error, Result};
use crate::fin_cat::{enumerate_maps, hom_count, FinMap};
use crate::presheaf::{Presheaf, TruncatedPresheaf};
use crate::subst::{SubstAlgebra, TruncatedAlgebra};

/// The free clone on a binary `b` and a constant `e`.
pub fn free_be() -> FreeClone {
    FreeClone::new(Signature::new([("b", 2), ("e", 0)]).expect("valid signature"))
}

/// A finite algebra from `(name, arity, table)` triples.
pub fn finite_algebra(carrier: usize, ops: &[(&str, usize, &[usize])]) -> FiniteAlgebra {
    let ops: BTreeMap<String, Operation> = ops
        .iter()
        .map(|(name, arity, table)| {
            (
                name.to_string(),
                Operation {
                    arity: *arity,
                    table: table.to_vec(),
                },
            )
        })
        .collect();
    FiniteAlgebra::new(carrier, ops).expect("valid tables")
}

/// Small two- and three-element algebras whose clones are tabulated below.
pub fn small_algebras() -> Vec<(&'static str, FiniteAlgebra)> {
    vec![
        ("meet", FiniteAlgebra::meet_semilattice()),
        ("neg", finite_algebra(2, &[("n", 1, &[1, 0])])),
        ("succ3", finite_algebra(3, &[("s", 1, &[1, 2, 0])])),
        ("xor", finite_algebra(2, &[("x", 2, &[0, 1, 1, 0])])),
        ("maj", finite_algebra(2, &[("maj", 3, &[0, 0, 0, 1, 0, 1, 1, 1])])),
        ("negc", finite_algebra(2, &[("n", 1, &[1, 0]), ("z", 0, &[0])])),
    ]
}

pub fn finite_clone(name: &str, max_arity: usize) -> Result<FiniteClone> {
    small_algebras()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, a)| finite_clone_of_algebra(a, max_arity))
        .ok_or_else(|| Error::Invalid(format!("no small algebra named `{name}`")))
}

/// `S` of a built-in clone, tabulated up to `bound`.
pub fn tabulated_builtin(name: &str, bound: usize) -> Result<TruncatedAlgebra> {
    Ok(TruncatedAlgebra::tabulate(&s_functor(builtin_clone(name)?, Budget::default()), bound)?.0)
}

/// `S` of the clone of a small algebra, tabulated up to `bound`.
pub fn tabulated_finite(name: &str, bound: usize) -> Result<TruncatedAlgebra> {
    let k = finite_clone(name, bound)?;
    Ok(TruncatedAlgebra::tabulate(&s_functor(k, Budget::default()), bound)?.0)
}

/// `S` of the free clone on one constant, whose carriers are finite.
pub fn tabulated_constant_terms(bound: usize) -> Result<TruncatedAlgebra> {
    let k = FreeClone::new(Signature::new([("e", 0)])?);
    Ok(TruncatedAlgebra::tabulate(&s_functor(k, Budget::new(1, bound)), bound)?.0)
}

/// The same set `{0, .., size-1}` at every stage, every map acting as the
/// identity, one substitution table `s` and one variable `v` for all stages.
pub fn constant_algebra(
    size: usize,
    bound: usize,
    v: usize,
    s: impl Fn(usize, usize) -> usize,
) -> Result<TruncatedAlgebra> {
    let carriers = vec![size; bound + 1];
    let actions = (0..=bound)
        .map(|m| {
            (0..=bound)
                .map(|n| vec![(0..size).collect(); hom_count(m, n)])
                .collect()
        })
        .collect();
    let presheaf = TruncatedPresheaf::new(carriers, actions)?;
    let table: Vec<usize> = (0..size).flat_map(|x| (0..size).map(move |y| (x, y))).map(|(x, y)| s(x, y)).collect();
    TruncatedAlgebra::new(presheaf, vec![table; bound], vec![v; bound])
}

/// Adds a new element at the top stage that behaves exactly like `of`:
/// same images under every map, same row of the top substitution table.
/// The identity fixes the new element.
pub fn with_twin(base: &TruncatedAlgebra, of: usize) -> Result<TruncatedAlgebra> {
    let top = base.bound();
    let p = base.presheaf();
    let mut carriers = p.sizes().to_vec();
    if of >= carriers[top] {
        return Err(Error::Index {
            index: of,
            arity: carriers[top],
        });
    }
    let twin = carriers[top];
    carriers[top] += 1;
    let mut actions = Vec::with_capacity(top + 1);
    for m in 0..=top {
        let mut row = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let mut tables = Vec::with_capacity(hom_count(m, n));
            for f in enumerate_maps(m, n) {
                let mut t = p.table(&f)?.to_vec();
                if m == top {
                    t.push(if f.is_identity() { twin } else { t[of] });
                }
                tables.push(t);
            }
            row.push(tables);
        }
        actions.push(row);
    }
    let presheaf = TruncatedPresheaf::new(carriers, actions)?;
    let mut s: Vec<Vec<usize>> = (0..top)
        .map(|m| base.subst_table(m).expect("stage below bound").to_vec())
        .collect();
    if top > 0 {
        let width = p.sizes()[top - 1];
        let row = s[top - 1][of * width..(of + 1) * width].to_vec();
        s[top - 1].extend(row);
    }
    TruncatedAlgebra::new(presheaf, s, base.vars().to_vec())
}

/// A table-level change to an honest algebra.
#[derive(Debug, Clone)]
pub struct Mutant {
    pub name: String,
    /// The single equation check this mutant is built to break, if any.
    pub target: Option<&'static str>,
    pub algebra: TruncatedAlgebra,
}

fn mutant(name: impl Into<String>, target: Option<&'static str>, algebra: TruncatedAlgebra) -> Mutant {
    Mutant {
        name: name.into(),
        target,
        algebra,
    }
}

fn with_subst(mut a: TruncatedAlgebra, m: usize, x: usize, y: usize, z: usize) -> Result<TruncatedAlgebra> {
    a.set_subst(m, x, y, z)?;
    Ok(a)
}

/// Mutations that each break exactly one of the seven equation families,
/// found by exhaustive search over single table entries and small
/// hand-built structures.
pub fn isolating_mutants() -> Result<Vec<Mutant>> {
    let initial4 = tabulated_builtin("initial", 4)?;
    let mut id = with_twin(&initial4, 0)?;
    id.set_action(&FinMap::identity(4), 4, 0)?;

    let mut comp = initial4.clone();
    comp.set_action(&FinMap::point(0, 4)?, 0, 1)?;

    Ok(vec![
        mutant("initial@4 + twin of 0, identity moves the twin", Some("functoriality-identity"), id),
        mutant("initial@4, (0 |-> 0) : 1 -> 4 sends 0 to 1", Some("functoriality-composition"), comp),
        mutant(
            "maj@4, s_3 at (1, 1) set to 3",
            Some("naturality"),
            with_subst(tabulated_finite("maj", 4)?, 3, 1, 1, 3)?,
        ),
        mutant(
            "two points, s = first projection",
            Some("unit"),
            constant_algebra(2, 4, 0, |x, _| x)?,
        ),
        mutant(
            "xor@2, s_1 at (3, 1) set to 1",
            Some("contraction"),
            with_subst(tabulated_finite("xor", 2)?, 1, 3, 1, 1)?,
        ),
        mutant(
            "two points, s = join",
            Some("weakening"),
            constant_algebra(2, 4, 0, |x, y| x | y)?,
        ),
        mutant(
            "xor@3, s_2 at (7, 0) set to 0",
            Some("associativity"),
            with_subst(tabulated_finite("xor", 3)?, 2, 7, 0, 0)?,
        ),
    ])
}

/// Replaces `v_0` by `x` and every `v_m` by its image under `(0 |-> m)`,
/// so the variables stay natural.
pub fn with_variable(base: &TruncatedAlgebra, x: usize) -> Result<TruncatedAlgebra> {
    let mut out = base.clone();
    out.set_var(0, x)?;
    for m in 1..base.bound() {
        let vm = out.act(&FinMap::point(m, m + 1)?, &x)?;
        out.set_var(m, vm)?;
    }
    Ok(out)
}

fn bumped(name: &str, base: &TruncatedAlgebra, m: usize, x: usize, y: usize) -> Result<Mutant> {
    let z = (base.subst(m, &x, &y)? + 1) % base.presheaf().sizes()[m];
    Ok(mutant(
        format!("{name}@{}, s_{m} at ({x}, {y}) set to {z}", base.bound()),
        None,
        with_subst(base.clone(), m, x, y, z)?,
    ))
}

/// Further mutations, with no single target: scattered entries of `s`, the
/// action and the variables.
pub fn other_mutants() -> Result<Vec<Mutant>> {
    let mut out = Vec::new();
    let initial4 = tabulated_builtin("initial", 4)?;
    let mut zero = initial4.clone();
    for x in 0..3 {
        for y in 0..2 {
            zero.set_subst(2, x, y, 0)?;
        }
    }
    out.push(mutant("initial@4, s_2 constantly 0", None, zero));
    let mut v = initial4.clone();
    v.set_var(1, 0)?;
    out.push(mutant("initial@4, v_1 = 0", None, v));
    let mut v0 = initial4.clone();
    v0.set_var(0, 0)?;
    v0.set_var(3, 0)?;
    out.push(mutant("initial@4, v_3 = 0", None, v0));
    let mut act = initial4.clone();
    act.set_action(&crate::fin_cat::generators().s.shift(1), 2, 2)?;
    out.push(mutant("initial@4, id_1 + s fixes 2", None, act));

    for (name, bound) in [("meet", 3), ("neg", 3), ("succ3", 3), ("xor", 3), ("maj", 3), ("negc", 3)] {
        let base = tabulated_finite(name, bound)?;
        let sizes = base.presheaf().sizes().to_vec();
        // the last entry of each substitution table, moved to the next value
        for m in [bound - 2, bound - 1] {
            if sizes[m] < 2 {
                continue;
            }
            out.push(bumped(name, &base, m, sizes[m + 1] - 1, sizes[m] - 1)?);
        }
        let top = bound - 1;
        if sizes[1] > 1 {
            let x = (base.var(0)? + 1) % sizes[1];
            out.push(mutant(format!("{name}@{bound}, v_0 = {x}, carried along"), None, with_variable(&base, x)?));
        } else {
            let mut v = base.clone();
            v.set_var(top, (base.var(top)? + 1) % sizes[top + 1])?;
            out.push(mutant(format!("{name}@{bound}, v_{top} moved"), None, v));
        }
    }
    let e3 = tabulated_constant_terms(3)?;
    out.push(bumped("e", &e3, 1, 0, 1)?);
    out.push(bumped("e", &e3, 2, 3, 0)?);
    Ok(out)
}

/// Honest tabulated algebras: the built-in clones, the small finite clones
/// and the constant-term clone.
pub fn honest_algebras() -> Result<Vec<(String, TruncatedAlgebra)>> {
    let mut out = Vec::new();
    for name in ["initial", "terminal", "arrow"] {
        out.push((format!("S({name})@4"), tabulated_builtin(name, 4)?));
    }
    for (name, _) in small_algebras() {
        out.push((format!("S({name})@3"), tabulated_finite(name, 3)?));
    }
    out.push(("S(meet)@4".into(), tabulated_finite("meet", 4)?));
    out.push(("S(e)@4".into(), tabulated_constant_terms(4)?));
    out.push(("one point, s = second projection".into(), constant_algebra(1, 3, 0, |_, y| y)?));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Sampling;
    use crate::subst::{check_diagrams, check_presentation};

    fn failing(a: &TruncatedAlgebra) -> Vec<String> {
        let r = check_presentation(a, a.bound(), &Sampling::exhaustive()).unwrap();
        r.checks.iter().filter(|c| !c.passed()).map(|c| c.name.clone()).collect()
    }

    #[test]
    fn honest_algebras_pass() {
        for (name, a) in honest_algebras().unwrap() {
            assert!(failing(&a).is_empty(), "{name}: {:?}", failing(&a));
            assert!(check_diagrams(&a, a.bound(), &Sampling::exhaustive()).unwrap().passed(), "{name}");
        }
    }

    #[test]
    fn isolating_mutants_break_one_law() {
        for m in isolating_mutants().unwrap() {
            assert_eq!(failing(&m.algebra), vec![m.target.unwrap().to_string()], "{}", m.name);
        }
    }

    #[test]
    fn other_mutants_fail() {
        let all = other_mutants().unwrap();
        assert!(all.len() >= 15);
        for m in all {
            assert!(!failing(&m.algebra).is_empty(), "{}", m.name);
        }
    }
}

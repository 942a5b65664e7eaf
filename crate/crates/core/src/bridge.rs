//! The translations between abstract clones and substitution algebras, in
//! both directions, on objects and on homomorphisms, and exact round-trip
//! checks.
//!
//! From a clone `K`, `S(K)` has carriers `C_m` and
//! * action `C(f)(t) = mu_{m,n}(t, iota^n_{f(0)}, .., iota^n_{f(m-1)})`,
//! * variables `v_m = iota^{m+1}_m`,
//! * substitution `s_m(t, u) = mu_{m+1,m}(t, iota^m_0, .., iota^m_{m-1}, u)`.
//!
//! From an algebra `A`, `C(A)` has carriers `A(n)` and
//! * `mu_{m,n}(t, us) = phi_{m,n}(A(i |-> n+i)(t), us)`,
//! * `iota^m_i = A(0 |-> i)(v_0)`,
//!
//! where `phi` substitutes the tuple one element at a time, last one first.

use serde_json::json;

use crate::clone::{clone_hom_check, AbstractClone, Budget, Carrier};
use crate::error::{Error, Result};
use crate::fin_cat::{enumerate_maps, FinMap};
use crate::presheaf::Presheaf;
use crate::report::{witness, Report, Sampling, Status, Tally};
use crate::subst::{hom_check, SubstAlgebra};

/// `S(K)`: the substitution algebra of a clone. Carriers are enumerated with
/// `budget`.
#[derive(Debug, Clone)]
pub struct CloneAlgebra<K> {
    clone: K,
    budget: Budget,
}

pub fn s_functor<K: AbstractClone>(clone: K, budget: Budget) -> CloneAlgebra<K> {
    CloneAlgebra { clone, budget }
}

impl<K> CloneAlgebra<K> {
    pub fn clone_ref(&self) -> &K {
        &self.clone
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }
}

impl<K: AbstractClone> Presheaf for CloneAlgebra<K> {
    type Elem = K::Elem;

    fn describe(&self) -> String {
        format!("S({})", self.clone.describe())
    }

    fn carrier(&self, m: usize) -> Result<Carrier<K::Elem>> {
        self.clone.elems(m, &self.budget)
    }

    fn act(&self, f: &FinMap, t: &K::Elem) -> Result<K::Elem> {
        let n = f.cod();
        let us = f
            .table()
            .iter()
            .map(|&j| self.clone.iota(n, j))
            .collect::<Result<Vec<_>>>()?;
        self.clone.mu(f.dom(), n, t, &us)
    }
}

impl<K: AbstractClone> SubstAlgebra for CloneAlgebra<K> {
    fn subst(&self, m: usize, t: &K::Elem, u: &K::Elem) -> Result<K::Elem> {
        let mut us = (0..m).map(|i| self.clone.iota(m, i)).collect::<Result<Vec<_>>>()?;
        us.push(u.clone());
        self.clone.mu(m + 1, m, t, &us)
    }

    fn var(&self, m: usize) -> Result<K::Elem> {
        self.clone.iota(m + 1, m)
    }
}

/// `phi_{m,n}(a, us)` for `a` in `A(n+m)` and `us` in `A(n)^m`:
/// `phi_{0,n}(a) = a` and
/// `phi_{m+1,n}(a, us ++ [u]) = phi_{m,n}(s_{n+m}(a, A(n -> n+m)(u)), us)`.
pub fn phi<A: SubstAlgebra>(alg: &A, m: usize, n: usize, a: &A::Elem, us: &[A::Elem]) -> Result<A::Elem> {
    if us.len() != m {
        return Err(Error::Shape(format!("phi_{{{m},{n}}} needs {m} substituends, got {}", us.len())));
    }
    crate::presheaf::within(alg, n + m)?;
    let mut acc = a.clone();
    for k in (0..m).rev() {
        let incl = FinMap::new(n + k, (0..n).collect())?;
        acc = alg.subst(n + k, &acc, &alg.act(&incl, &us[k])?)?;
    }
    Ok(acc)
}

/// `C(A)`: the clone of a substitution algebra. Needs every stage, so a
/// truncated algebra fails with a range error as soon as an operation needs a
/// stage past its bound.
#[derive(Debug, Clone)]
pub struct CloneOfAlgebra<A> {
    alg: A,
}

pub fn c_functor<A: SubstAlgebra>(alg: A) -> CloneOfAlgebra<A> {
    CloneOfAlgebra { alg }
}

impl<A> CloneOfAlgebra<A> {
    pub fn algebra(&self) -> &A {
        &self.alg
    }
}

impl<A: SubstAlgebra> AbstractClone for CloneOfAlgebra<A> {
    type Elem = A::Elem;

    fn describe(&self) -> String {
        format!("C({})", self.alg.describe())
    }

    /// The algebra's own carrier; the budget is not consulted.
    fn elems(&self, n: usize, _budget: &Budget) -> Result<Carrier<A::Elem>> {
        self.alg.carrier(n)
    }

    fn mu(&self, m: usize, n: usize, t: &A::Elem, us: &[A::Elem]) -> Result<A::Elem> {
        crate::clone::check_len("mu", m, us.len())?;
        crate::presheaf::within(&self.alg, n + m)?;
        let shift = FinMap::new(n + m, (n..n + m).collect())?;
        phi(&self.alg, m, n, &self.alg.act(&shift, t)?, us)
    }

    fn iota(&self, m: usize, i: usize) -> Result<A::Elem> {
        if i >= m {
            return Err(Error::Index { index: i, arity: m });
        }
        crate::presheaf::within(&self.alg, m)?;
        self.alg.act(&FinMap::point(i, m)?, &self.alg.var(0)?)
    }
}

/// The family `V(m) -> A(m)`, `i |-> A(0 |-> i)(v_0)`: the image under `S` of
/// the unique clone morphism out of the initial clone.
pub fn variable_family<A: SubstAlgebra>(alg: &A) -> impl Fn(usize, &usize) -> Result<A::Elem> + '_ {
    move |m, &i| c_functor(alg).iota(m, i)
}

/// A family of functions together with the report certifying it as a
/// homomorphism on the target side.
#[derive(Debug, Clone)]
pub struct Certified<H> {
    pub family: H,
    pub report: Report,
}

fn certification_failure(side: &str, report: &Report) -> Error {
    let detail = report
        .checks
        .iter()
        .find(|c| c.status == Status::Fail)
        .map(|c| match &c.witness {
            Some(w) => format!("{} fails at {w}", c.name),
            None => c.name.clone(),
        })
        .unwrap_or_default();
    Error::Certification(format!("{side}: {}: {detail}", report.subject))
}

/// `S` on morphisms: a clone homomorphism `h : K -> L` is, unchanged, a
/// homomorphism `S(K) -> S(L)`. Checks the clone side first, then certifies
/// the algebra side up to `bound`.
pub fn s_on_hom<K, L, H>(src: &K, dst: &L, h: H, budget: &Budget, bound: usize) -> Result<Certified<H>>
where
    K: AbstractClone + Clone,
    L: AbstractClone + Clone,
    H: Fn(usize, &K::Elem) -> Result<L::Elem>,
{
    let source = clone_hom_check(src, dst, &h, budget)?;
    if !source.passed() {
        return Err(certification_failure("not a clone homomorphism", &source));
    }
    let (sk, sl) = (s_functor(src.clone(), *budget), s_functor(dst.clone(), *budget));
    let report = hom_check(&h, &sk, &sl, bound, &budget.sampling)?;
    if !report.passed() {
        return Err(certification_failure("not an algebra homomorphism", &report));
    }
    Ok(Certified { family: h, report })
}

/// `C` on morphisms: an algebra homomorphism `h : A -> B` is, unchanged, a
/// clone homomorphism `C(A) -> C(B)`.
pub fn c_on_hom<A, B, H>(
    src: &A,
    dst: &B,
    h: H,
    bound: usize,
    budget: &Budget,
) -> Result<Certified<H>>
where
    A: SubstAlgebra,
    B: SubstAlgebra,
    H: Fn(usize, &A::Elem) -> Result<B::Elem>,
{
    let source = hom_check(&h, src, dst, bound, &budget.sampling)?;
    if !source.passed() {
        return Err(certification_failure("not an algebra homomorphism", &source));
    }
    let report = clone_hom_check(&c_functor(src), &c_functor(dst), &h, budget)?;
    if !report.passed() {
        return Err(certification_failure("not a clone homomorphism", &report));
    }
    Ok(Certified { family: h, report })
}

/// `C(S(K)) = K` on the nose: carriers, projections and substitution up to
/// `budget.max_arity`.
pub fn roundtrip_clone<K: AbstractClone + Clone>(clone: &K, budget: &Budget) -> Result<Report> {
    let back = c_functor(s_functor(clone.clone(), *budget));
    let mut report = Report::new(format!("C(S({})) = {}", clone.describe(), clone.describe()));
    let arity = budget.max_arity;
    let carriers = (0..=arity).map(|n| clone.elems(n, budget)).collect::<Result<Vec<_>>>()?;
    let incomplete = carriers.iter().any(|c| !c.complete);

    let mut t = Tally::new("carriers", &budget.sampling);
    for (n, c) in carriers.iter().enumerate() {
        let other = back.elems(n, budget)?;
        let same = other.elems == c.elems && other.complete == c.complete;
        t.record((!same).then(|| witness(&json!({"n": n}), &c.len(), &other.len())));
    }
    report.push(t.finish());

    let mut t = Tally::new("projections", &budget.sampling);
    for m in 0..=arity {
        for i in 0..m {
            let (lhs, rhs) = (clone.iota(m, i)?, back.iota(m, i)?);
            let same = clone.elem_eq(m, &lhs, &rhs);
            t.record((!same).then(|| witness(&json!({"m": m, "i": i}), &lhs, &rhs)));
        }
    }
    report.push(t.finish());

    let mut t = Tally::new("substitution", &budget.sampling);
    t.mark_incomplete(incomplete);
    for m in 0..=arity {
        for n in 0..=arity {
            let (cm, cn) = (&carriers[m].elems, &carriers[n].elems);
            let mut dims = vec![cm.len()];
            dims.extend(std::iter::repeat_n(cn.len(), m));
            t.sweep(&dims, |idx| {
                let x = &cm[idx[0]];
                let us: Vec<K::Elem> = idx[1..].iter().map(|&j| cn[j].clone()).collect();
                let (lhs, rhs) = (clone.mu(m, n, x, &us)?, back.mu(m, n, x, &us)?);
                Ok((!clone.elem_eq(n, &lhs, &rhs))
                    .then(|| witness(&json!({"m": m, "n": n, "t": x, "us": us}), &lhs, &rhs)))
            })?;
        }
    }
    report.push(t.finish());
    Ok(report)
}

/// `S(C(A)) = A` on the nose: carriers, action, substitution and variables
/// at every stage up to `bound`. `A` must be total, since `C(A)` needs
/// stages beyond `bound`.
pub fn roundtrip_alg<A: SubstAlgebra + Clone>(alg: &A, bound: usize, sampling: &Sampling) -> Result<Report> {
    if let Some(top) = alg.max_stage() {
        return Err(Error::Range {
            stage: top + 1,
            bound: top,
        });
    }
    let back = s_functor(c_functor(alg.clone()), Budget::default().with_sampling(*sampling));
    let mut report = Report::new(format!("S(C({})) = {}", alg.describe(), alg.describe()));
    let carriers = (0..=bound).map(|m| alg.carrier(m)).collect::<Result<Vec<_>>>()?;
    let incomplete = carriers.iter().any(|c| !c.complete);
    let tally = |name: &str| {
        let mut t = Tally::new(name, sampling);
        t.mark_incomplete(incomplete);
        t
    };

    let mut t = tally("carriers");
    for (m, c) in carriers.iter().enumerate() {
        let other = back.carrier(m)?;
        let same = other.elems == c.elems && other.complete == c.complete;
        t.record((!same).then(|| witness(&json!({"m": m}), &c.len(), &other.len())));
    }
    report.push(t.finish());

    let mut t = tally("action");
    for m in 0..=bound {
        for n in 0..=bound {
            let maps = enumerate_maps(m, n);
            let xs = &carriers[m].elems;
            t.sweep(&[maps.len(), xs.len()], |i| {
                let (f, x) = (&maps[i[0]], &xs[i[1]]);
                let (lhs, rhs) = (alg.act(f, x)?, back.act(f, x)?);
                Ok((lhs != rhs).then(|| witness(&json!({"f": f, "x": x}), &lhs, &rhs)))
            })?;
        }
    }
    report.push(t.finish());

    let mut t = tally("substitution");
    for m in 0..bound {
        let (xs, ys) = (&carriers[m + 1].elems, &carriers[m].elems);
        t.sweep(&[xs.len(), ys.len()], |i| {
            let (x, y) = (&xs[i[0]], &ys[i[1]]);
            let (lhs, rhs) = (alg.subst(m, x, y)?, back.subst(m, x, y)?);
            Ok((lhs != rhs).then(|| witness(&json!({"m": m, "x": x, "y": y}), &lhs, &rhs)))
        })?;
    }
    report.push(t.finish());

    let mut t = tally("variables");
    for m in 0..bound {
        let (lhs, rhs) = (alg.var(m)?, back.var(m)?);
        t.record((lhs != rhs).then(|| witness(&json!({"m": m}), &lhs, &rhs)));
    }
    report.push(t.finish());
    Ok(report)
}

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::report::{witness, Report, Tally};

use super::{AbstractClone, Budget, Carrier, Element};

/// One instance of a clone equation, with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum CloneLawInstance<E> {
    /// `mu_{m,n}(mu_{l,m}(x, ys), zs) = mu_{l,n}(x, [mu_{m,n}(y_i, zs)])`
    Associativity {
        l: usize,
        m: usize,
        n: usize,
        x: E,
        ys: Vec<E>,
        zs: Vec<E>,
    },
    /// `mu_{m,n}(iota^m_i, xs) = x_i`
    Projection {
        m: usize,
        n: usize,
        i: usize,
        xs: Vec<E>,
    },
    /// `mu_{m,m}(x, iota^m_0, .., iota^m_{m-1}) = x`
    RightIdentity { m: usize, x: E },
}

impl<E: Element> CloneLawInstance<E> {
    pub fn law(&self) -> &'static str {
        match self {
            CloneLawInstance::Associativity { .. } => "associativity",
            CloneLawInstance::Projection { .. } => "projection",
            CloneLawInstance::RightIdentity { .. } => "right-identity",
        }
    }

    /// Both sides of the equation and the arity they live in.
    pub fn sides<K: AbstractClone<Elem = E>>(&self, k: &K) -> Result<(E, E, usize)> {
        match self {
            CloneLawInstance::Associativity { l, m, n, x, ys, zs } => {
                let inner = k.mu(*l, *m, x, ys)?;
                let lhs = k.mu(*m, *n, &inner, zs)?;
                let pushed = ys
                    .iter()
                    .map(|y| k.mu(*m, *n, y, zs))
                    .collect::<Result<Vec<_>>>()?;
                let rhs = k.mu(*l, *n, x, &pushed)?;
                Ok((lhs, rhs, *n))
            }
            CloneLawInstance::Projection { m, n, i, xs } => {
                let lhs = k.mu(*m, *n, &k.iota(*m, *i)?, xs)?;
                Ok((lhs, xs[*i].clone(), *n))
            }
            CloneLawInstance::RightIdentity { m, x } => {
                let ids = (0..*m).map(|i| k.iota(*m, i)).collect::<Result<Vec<_>>>()?;
                Ok((k.mu(*m, *m, x, &ids)?, x.clone(), *m))
            }
        }
    }

    pub fn holds<K: AbstractClone<Elem = E>>(&self, k: &K) -> Result<bool> {
        let (lhs, rhs, n) = self.sides(k)?;
        Ok(k.elem_eq(n, &lhs, &rhs))
    }
}

fn evaluate<K: AbstractClone>(
    k: &K,
    inst: CloneLawInstance<K::Elem>,
) -> Result<Option<serde_json::Value>> {
    let (lhs, rhs, n) = inst.sides(k)?;
    Ok((!k.elem_eq(n, &lhs, &rhs)).then(|| witness(&inst, &lhs, &rhs)))
}

fn pick<E: Clone>(c: &Carrier<E>, idx: &[usize]) -> Vec<E> {
    idx.iter().map(|&i| c.elems[i].clone()).collect()
}

/// The three clone equations over every arity up to `budget.max_arity` and
/// every enumerated element.
pub fn clone_laws_check<K: AbstractClone>(k: &K, budget: &Budget) -> Result<Report> {
    let carriers = (0..=budget.max_arity)
        .map(|n| k.elems(n, budget))
        .collect::<Result<Vec<_>>>()?;
    let incomplete = carriers.iter().any(|c| !c.complete);
    let top = budget.max_arity;
    let mut report = Report::new(k.describe());

    let mut assoc = Tally::new("associativity", &budget.sampling);
    assoc.mark_incomplete(incomplete);
    for l in 0..=top {
        for m in 0..=top {
            for n in 0..=top {
                let (cl, cm, cn) = (&carriers[l], &carriers[m], &carriers[n]);
                let mut dims = vec![cl.len()];
                dims.extend(std::iter::repeat_n(cm.len(), l));
                dims.extend(std::iter::repeat_n(cn.len(), m));
                assoc.sweep(&dims, |idx| {
                    let inst = CloneLawInstance::Associativity {
                        l,
                        m,
                        n,
                        x: cl.elems[idx[0]].clone(),
                        ys: pick(cm, &idx[1..1 + l]),
                        zs: pick(cn, &idx[1 + l..]),
                    };
                    evaluate(k, inst)
                })?;
            }
        }
    }
    report.push(assoc.finish());

    let mut proj = Tally::new("projection", &budget.sampling);
    proj.mark_incomplete(incomplete);
    for m in 0..=top {
        for n in 0..=top {
            let cn = &carriers[n];
            for i in 0..m {
                proj.sweep(&vec![cn.len(); m], |idx| {
                    evaluate(
                        k,
                        CloneLawInstance::Projection {
                            m,
                            n,
                            i,
                            xs: pick(cn, idx),
                        },
                    )
                })?;
            }
        }
    }
    report.push(proj.finish());

    let mut ident = Tally::new("right-identity", &budget.sampling);
    ident.mark_incomplete(incomplete);
    for (m, cm) in carriers.iter().enumerate() {
        ident.sweep(&[cm.len()], |idx| {
            evaluate(
                k,
                CloneLawInstance::RightIdentity {
                    m,
                    x: cm.elems[idx[0]].clone(),
                },
            )
        })?;
    }
    report.push(ident.finish());
    Ok(report)
}

/// Checks that `h` (given arity-wise) preserves projections and substitution.
pub fn clone_hom_check<K, L, H>(src: &K, dst: &L, h: H, budget: &Budget) -> Result<Report>
where
    K: AbstractClone,
    L: AbstractClone,
    H: Fn(usize, &K::Elem) -> Result<L::Elem>,
{
    let carriers = (0..=budget.max_arity)
        .map(|n| src.elems(n, budget))
        .collect::<Result<Vec<_>>>()?;
    let incomplete = carriers.iter().any(|c| !c.complete);
    let mut report = Report::new(format!("{} -> {}", src.describe(), dst.describe()));

    let mut iota = Tally::new("preserves-projections", &budget.sampling);
    for m in 0..=budget.max_arity {
        for i in 0..m {
            let lhs = h(m, &src.iota(m, i)?)?;
            let rhs = dst.iota(m, i)?;
            let ok = dst.elem_eq(m, &lhs, &rhs);
            iota.record((!ok).then(|| witness(&serde_json::json!({"m": m, "i": i}), &lhs, &rhs)));
        }
    }
    report.push(iota.finish());

    let mut mu = Tally::new("preserves-substitution", &budget.sampling);
    mu.mark_incomplete(incomplete);
    for m in 0..=budget.max_arity {
        for n in 0..=budget.max_arity {
            let (cm, cn) = (&carriers[m], &carriers[n]);
            let mut dims = vec![cm.len()];
            dims.extend(std::iter::repeat_n(cn.len(), m));
            mu.sweep(&dims, |idx| {
                let t = &cm.elems[idx[0]];
                let us = pick(cn, &idx[1..]);
                let lhs = h(n, &src.mu(m, n, t, &us)?)?;
                let hus = us.iter().map(|u| h(n, u)).collect::<Result<Vec<_>>>()?;
                let rhs = dst.mu(m, n, &h(m, t)?, &hus)?;
                Ok((!dst.elem_eq(n, &lhs, &rhs)).then(|| {
                    witness(
                        &serde_json::json!({"m": m, "n": n, "t": t, "us": us}),
                        &lhs,
                        &rhs,
                    )
                }))
            })?;
        }
    }
    report.push(mu.finish());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clone::{builtin_clone, FreeClone, Signature, Term};
    use crate::error::Error;
    use crate::report::Sampling;

    struct FirstProjection(FreeClone);

    impl AbstractClone for FirstProjection {
        type Elem = Term;
        fn describe(&self) -> String {
            "broken".into()
        }
        fn elems(&self, n: usize, b: &Budget) -> Result<Carrier<Term>> {
            self.0.elems(n, b)
        }
        fn mu(&self, m: usize, n: usize, t: &Term, us: &[Term]) -> Result<Term> {
            if m == 0 {
                return self.0.mu(m, n, t, us);
            }
            us.first().cloned().ok_or(Error::EmptyCarrier { stage: n })
        }
        fn iota(&self, m: usize, i: usize) -> Result<Term> {
            self.0.iota(m, i)
        }
    }

    fn be() -> FreeClone {
        FreeClone::new(Signature::new([("b", 2), ("e", 0)]).unwrap())
    }

    #[test]
    fn small_free_clone_passes_exhaustively() {
        let b = Budget::new(1, 2).with_sampling(Sampling::exhaustive());
        let r = clone_laws_check(&be(), &b).unwrap();
        assert!(r.passed(), "{}", r.render_text());
        assert_eq!(r.checks.len(), 3);
    }

    #[test]
    fn terminal_passes() {
        let r = clone_laws_check(&builtin_clone("terminal").unwrap(), &Budget::default()).unwrap();
        assert!(r.passed());
        assert_eq!(r.coverage(), crate::report::Coverage::Exhaustive);
    }

    #[test]
    fn first_projection_breaks_right_identity() {
        let b = Budget::new(1, 2).with_sampling(Sampling::exhaustive());
        let r = clone_laws_check(&FirstProjection(be()), &b).unwrap();
        let ri = r.check("right-identity").unwrap();
        assert!(!ri.passed());
        let w = ri.witness.as_ref().unwrap();
        let inst: CloneLawInstance<Term> = serde_json::from_value(w["instance"].clone()).unwrap();
        // replaying against the honest clone holds, against the broken one fails
        assert!(inst.holds(&be()).unwrap());
        assert!(!inst.holds(&FirstProjection(be())).unwrap());
        // first failing element in enumeration order
        assert_eq!(w["instance"]["m"], 1);
        assert_eq!(w["instance"]["x"], "b(x0,x0)");
        assert_eq!(w["lhs"], "x0");
    }

    #[test]
    fn identity_hom_is_a_hom() {
        let k = be();
        let b = Budget::new(1, 2);
        let r = clone_hom_check(&k, &k, |_, t| Ok(t.clone()), &b).unwrap();
        assert!(r.passed());
    }
}

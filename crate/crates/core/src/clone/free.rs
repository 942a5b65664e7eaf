use crate::error::{Error, Result};

use super::term::{Signature, Term};
use super::{check_len, AbstractClone, Budget, Carrier};

/// `x_i` in a context of `m` variables.
pub fn free_iota(m: usize, i: usize) -> Result<Term> {
    if i < m {
        Ok(Term::var(i))
    } else {
        Err(Error::Index { index: i, arity: m })
    }
}

fn ensure_context(t: &Term, n: usize) -> Result<()> {
    if t.in_context(n) {
        Ok(())
    } else {
        Err(Error::Context {
            term: t.to_string(),
            context: n,
        })
    }
}

/// Simultaneous substitution of `us` (terms in `n` variables) for the `m`
/// variables of `t`.
pub fn free_mu(m: usize, n: usize, t: &Term, us: &[Term]) -> Result<Term> {
    check_len("substitution", m, us.len())?;
    ensure_context(t, m)?;
    for u in us {
        ensure_context(u, n)?;
    }
    Ok(t.substitute(us))
}

/// The clone of terms over a signature, with syntactic equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeClone {
    sig: Signature,
}

impl FreeClone {
    pub fn new(sig: Signature) -> Self {
        FreeClone { sig }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// Well-formedness of a user-supplied term in context `n`.
    pub fn check_term(&self, n: usize, t: &Term) -> Result<()> {
        self.sig.check(t)?;
        ensure_context(t, n)
    }

    /// Terms of depth at most `max_depth` in `n` variables, grouped by depth.
    /// Within a depth, operators come in name order and argument tuples in
    /// lexicographic order of the shallower enumeration.
    pub fn terms(&self, n: usize, max_depth: usize) -> Carrier<Term> {
        let mut all: Vec<Term> = (0..n).map(Term::var).collect();
        let mut frontier_start = 0;
        for d in 1..=max_depth {
            let prev_len = all.len();
            let mut layer = Vec::new();
            for (op, arity) in self.sig.operators() {
                if arity == 0 {
                    if d == 1 {
                        layer.push(Term::constant(op));
                    }
                    continue;
                }
                if frontier_start == prev_len {
                    continue;
                }
                // tuples over all[..prev_len] with some argument at depth d-1
                let mut idx = vec![0usize; arity];
                loop {
                    if idx.iter().any(|&i| i >= frontier_start) {
                        layer.push(Term::app(op, idx.iter().map(|&i| all[i].clone()).collect()));
                    }
                    let mut k = arity;
                    loop {
                        if k == 0 {
                            break;
                        }
                        k -= 1;
                        idx[k] += 1;
                        if idx[k] < prev_len {
                            break;
                        }
                        idx[k] = 0;
                    }
                    if k == 0 && idx[0] == 0 {
                        break;
                    }
                }
            }
            frontier_start = prev_len;
            all.extend(layer);
        }
        let next_nonempty = self.sig.operators().any(|(_, arity)| {
            (arity == 0 && max_depth == 0) || (arity > 0 && frontier_start < all.len())
        });
        Carrier {
            elems: all,
            complete: !next_nonempty,
        }
    }
}

impl AbstractClone for FreeClone {
    type Elem = Term;

    fn describe(&self) -> String {
        let ops: Vec<String> = self
            .sig
            .operators()
            .map(|(o, a)| format!("{o}:{a}"))
            .collect();
        format!("free clone {{{}}}", ops.join(", "))
    }

    fn elems(&self, n: usize, budget: &Budget) -> Result<Carrier<Term>> {
        Ok(self.terms(n, budget.max_depth))
    }

    fn mu(&self, m: usize, n: usize, t: &Term, us: &[Term]) -> Result<Term> {
        free_mu(m, n, t, us)
    }

    fn iota(&self, m: usize, i: usize) -> Result<Term> {
        free_iota(m, i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn be() -> FreeClone {
        FreeClone::new(Signature::new([("b", 2), ("e", 0)]).unwrap())
    }

    #[test]
    fn iota_and_mu_examples() {
        assert_eq!(free_iota(3, 1).unwrap(), Term::var(1));
        assert_eq!(free_iota(1, 0).unwrap(), Term::var(0));
        assert!(matches!(free_iota(2, 2), Err(Error::Index { .. })));
        assert_eq!(
            free_mu(2, 1, &t("b(x0,x1)"), &[t("x0"), t("x0")]).unwrap(),
            t("b(x0,x0)")
        );
        let us = [t("b(x0,x1)"), t("e")];
        assert_eq!(free_mu(2, 2, &t("x1"), &us).unwrap(), t("e"));
    }

    #[test]
    fn mu_rejects_context_violations() {
        assert!(matches!(
            free_mu(1, 1, &t("x1"), &[t("x0")]),
            Err(Error::Context { .. })
        ));
        assert!(matches!(
            free_mu(1, 1, &t("x0"), &[t("x3")]),
            Err(Error::Context { .. })
        ));
        assert!(matches!(
            free_mu(2, 1, &t("x0"), &[t("x0")]),
            Err(Error::Shape(_))
        ));
    }

    // sizes from the recurrence |L<=d| = n + #nullary + sum_r #r-ary * |L<=d-1|^r
    fn oracle_size(n: usize, depth: usize, nullary: usize, binary: usize) -> usize {
        let mut total = n;
        for _ in 0..depth {
            total = n + nullary + binary * total * total;
        }
        total
    }

    #[test]
    fn carrier_sizes_match_the_recurrence() {
        let k = be();
        for n in 0..=4 {
            for depth in 0..=2 {
                assert_eq!(k.terms(n, depth).len(), oracle_size(n, depth, 1, 1), "n={n} d={depth}");
            }
        }
        let sizes: Vec<usize> = (0..=4).map(|n| k.terms(n, 2).len()).collect();
        assert_eq!(sizes, vec![2, 11, 52, 173, 446]);
    }

    #[test]
    fn enumeration_is_by_depth_and_duplicate_free() {
        let c = be().terms(2, 2);
        assert!(!c.complete);
        let depths: Vec<usize> = c.elems.iter().map(Term::depth).collect();
        assert!(depths.windows(2).all(|w| w[0] <= w[1]));
        let mut sorted = c.elems.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), c.len());
        assert_eq!(c.elems[..4], [t("x0"), t("x1"), t("b(x0,x0)"), t("b(x0,x1)")]);
    }

    #[test]
    fn completeness_flag() {
        let only_consts = FreeClone::new(Signature::new([("e", 0)]).unwrap());
        assert!(only_consts.terms(2, 1).complete);
        assert!(!only_consts.terms(2, 0).complete);
        let binary = FreeClone::new(Signature::new([("b", 2)]).unwrap());
        assert!(binary.terms(0, 3).complete);
        assert!(binary.terms(0, 3).is_empty());
        assert!(!binary.terms(1, 3).complete);
    }
}

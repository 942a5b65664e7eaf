use crate::error::Result;
use crate::fin_cat::{generators, old};

use super::Presheaf;

/// The symmetric monad structure of `delta` on a presheaf `A`, as stage-wise
/// functions:
/// contraction `A(m+2) -> A(m+1)` is `A(id_m + c)`,
/// weakening `A(m) -> A(m+1)` is `A(id_m + w)`,
/// exchange `A(m+2) -> A(m+2)` is `A(id_m + s)`.
#[derive(Debug, Clone, Copy)]
pub struct DeltaStructure<P> {
    p: P,
}

pub fn delta_structure<P: Presheaf>(p: P) -> DeltaStructure<P> {
    DeltaStructure { p }
}

impl<P: Presheaf> DeltaStructure<P> {
    pub fn contract(&self, m: usize, x: &P::Elem) -> Result<P::Elem> {
        self.p.act(&generators().c.shift(m), x)
    }

    pub fn weaken(&self, m: usize, x: &P::Elem) -> Result<P::Elem> {
        self.p.act(&generators().w.shift(m), x)
    }

    pub fn swap(&self, m: usize, x: &P::Elem) -> Result<P::Elem> {
        self.p.act(&generators().s.shift(m), x)
    }
}

/// The concrete strengths of `delta` for a pair of presheaves, and the
/// symmetric distributive law of `delta` over `delta . (-) x id`.
#[derive(Debug, Clone, Copy)]
pub struct Strengths<P, Q> {
    p: P,
    q: Q,
}

pub fn strengths<P: Presheaf, Q: Presheaf>(p: P, q: Q) -> Strengths<P, Q> {
    Strengths { p, q }
}

impl<P: Presheaf, Q: Presheaf> Strengths<P, Q> {
    /// `P(m+1) x Q(m) -> (P x Q)(m+1)`: `(a, y) |-> (a, Q(old_m)(y))`
    pub fn str(&self, m: usize, a: &P::Elem, y: &Q::Elem) -> Result<(P::Elem, Q::Elem)> {
        Ok((a.clone(), self.q.act(&old(m), y)?))
    }

    /// `P(m) x Q(m+1) -> (P x Q)(m+1)`: `(x, b) |-> (P(old_m)(x), b)`
    pub fn str_prime(&self, m: usize, x: &P::Elem, b: &Q::Elem) -> Result<(P::Elem, Q::Elem)> {
        Ok((self.p.act(&old(m), x)?, b.clone()))
    }

    /// `P(m+1) x P(m) x Q(m) -> P(m+1) x Q(m+1) x P(m) x Q(m)`:
    /// `(a, x, y) |-> (a, Q(old_m)(y), x, y)`
    #[allow(clippy::type_complexity)]
    pub fn str_bullet(
        &self,
        m: usize,
        a: &P::Elem,
        x: &P::Elem,
        y: &Q::Elem,
    ) -> Result<(P::Elem, Q::Elem, P::Elem, Q::Elem)> {
        Ok((a.clone(), self.q.act(&old(m), y)?, x.clone(), y.clone()))
    }

    /// `P(m+2) x P(m+1) -> P(m+2) x P(m+1)`: `(a, b) |-> (P(id_m + s)(a), b)`
    pub fn dist(&self, m: usize, a: &P::Elem, b: &P::Elem) -> Result<(P::Elem, P::Elem)> {
        Ok((self.p.act(&generators().s.shift(m), a)?, b.clone()))
    }

    /// `delta(P x Q) -> delta(P) x delta(Q)`. Both sides have the same
    /// elements, so this is the identity.
    pub fn ell(&self, z: &(P::Elem, Q::Elem)) -> (P::Elem, Q::Elem) {
        z.clone()
    }

    pub fn ell_inv(&self, z: &(P::Elem, Q::Elem)) -> (P::Elem, Q::Elem) {
        z.clone()
    }

    pub fn left(&self) -> &P {
        &self.p
    }

    pub fn right(&self) -> &Q {
        &self.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::representable_v;

    #[test]
    fn structure_maps_on_v() {
        let d = delta_structure(representable_v());
        assert_eq!(d.contract(0, &0).unwrap(), 0);
        assert_eq!(d.contract(0, &1).unwrap(), 0);
        assert_eq!(d.swap(0, &0).unwrap(), 1);
        assert_eq!(d.swap(0, &1).unwrap(), 0);
        // at stage 1 the old point 0 is left alone
        assert_eq!(d.swap(1, &0).unwrap(), 0);
        assert_eq!(d.weaken(2, &1).unwrap(), 1);
    }

    #[test]
    fn strength_examples_on_v() {
        let st = strengths(representable_v(), representable_v());
        assert_eq!(st.str(1, &1, &0).unwrap(), (1, 0));
        assert_eq!(st.str_prime(1, &0, &1).unwrap(), (0, 1));
        assert_eq!(st.dist(0, &0, &0).unwrap(), (1, 0));
        assert_eq!(st.dist(0, &1, &0).unwrap(), (0, 0));
        assert_eq!(st.str_bullet(1, &1, &0, &0).unwrap(), (1, 0, 0, 0));
        assert_eq!(st.ell_inv(&st.ell(&(2, 1))), (2, 1));
    }
}

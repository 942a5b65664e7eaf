//! Presheaves on the category of finite ordinals, the shift `delta(A) = A(- + 1)`
//! with its structure maps and strengths, and checkers for their laws.

pub(crate) mod laws;
mod structure;
mod truncated;

use crate::clone::{Carrier, Element};
use crate::error::{Error, Result};
use crate::fin_cat::FinMap;

pub use laws::{check_delta_laws, check_functoriality};
pub use structure::{delta_structure, strengths, DeltaStructure, Strengths};
pub use truncated::TruncatedPresheaf;

/// A covariant functor from finite ordinals to sets, presented by carriers
/// and an action.
pub trait Presheaf {
    type Elem: Element;

    fn describe(&self) -> String;

    /// `P(m)`, enumerated in a deterministic order.
    fn carrier(&self, m: usize) -> Result<Carrier<Self::Elem>>;

    /// `P(f)(x)` for `x` in `P(f.dom())`.
    fn act(&self, f: &FinMap, x: &Self::Elem) -> Result<Self::Elem>;

    /// Largest stage that is defined, if the presheaf is truncated.
    fn max_stage(&self) -> Option<usize> {
        None
    }
}

impl<P: Presheaf + ?Sized> Presheaf for &P {
    type Elem = P::Elem;

    fn describe(&self) -> String {
        (**self).describe()
    }

    fn carrier(&self, m: usize) -> Result<Carrier<Self::Elem>> {
        (**self).carrier(m)
    }

    fn act(&self, f: &FinMap, x: &Self::Elem) -> Result<Self::Elem> {
        (**self).act(f, x)
    }

    fn max_stage(&self) -> Option<usize> {
        (**self).max_stage()
    }
}

/// `V = F(1, -)`: `V(m) = {0, .., m-1}` acted on by evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Representable;

pub fn representable_v() -> Representable {
    Representable
}

impl Presheaf for Representable {
    type Elem = usize;

    fn describe(&self) -> String {
        "V".into()
    }

    fn carrier(&self, m: usize) -> Result<Carrier<usize>> {
        Ok(Carrier::complete((0..m).collect()))
    }

    fn act(&self, f: &FinMap, x: &usize) -> Result<usize> {
        if *x < f.dom() {
            Ok(f.apply(*x))
        } else {
            Err(Error::NotInCarrier {
                stage: f.dom(),
                detail: format!("{x} in V"),
            })
        }
    }
}

/// The terminal presheaf: a single point at every stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Terminal;

impl Presheaf for Terminal {
    type Elem = ();

    fn describe(&self) -> String {
        "1".into()
    }

    fn carrier(&self, _m: usize) -> Result<Carrier<()>> {
        Ok(Carrier::complete(vec![()]))
    }

    fn act(&self, _f: &FinMap, _x: &()) -> Result<()> {
        Ok(())
    }
}

/// Pointwise product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Product<P, Q>(pub P, pub Q);

impl<P: Presheaf, Q: Presheaf> Presheaf for Product<P, Q> {
    type Elem = (P::Elem, Q::Elem);

    fn describe(&self) -> String {
        format!("{} x {}", self.0.describe(), self.1.describe())
    }

    fn carrier(&self, m: usize) -> Result<Carrier<Self::Elem>> {
        let a = self.0.carrier(m)?;
        let b = self.1.carrier(m)?;
        let mut elems = Vec::with_capacity(a.len() * b.len());
        for x in &a.elems {
            for y in &b.elems {
                elems.push((x.clone(), y.clone()));
            }
        }
        Ok(Carrier {
            elems,
            complete: a.complete && b.complete,
        })
    }

    fn act(&self, f: &FinMap, (x, y): &Self::Elem) -> Result<Self::Elem> {
        Ok((self.0.act(f, x)?, self.1.act(f, y)?))
    }

    fn max_stage(&self) -> Option<usize> {
        match (self.0.max_stage(), self.1.max_stage()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// `delta^k(P) = P(- + k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Delta<P> {
    inner: P,
    shift: usize,
}

/// `delta(P)`. Fails on a truncated presheaf with nothing left to shift.
pub fn delta_apply<P: Presheaf>(p: P) -> Result<Delta<P>> {
    delta_power(p, 1)
}

/// `delta^k(P)`; on a truncated presheaf the residual bound drops by `k`.
pub fn delta_power<P: Presheaf>(p: P, k: usize) -> Result<Delta<P>> {
    if let Some(bound) = p.max_stage() {
        if bound < k {
            return Err(Error::Range { stage: k, bound });
        }
    }
    Ok(Delta { inner: p, shift: k })
}

impl<P> Delta<P> {
    pub fn inner(&self) -> &P {
        &self.inner
    }

    pub fn shift(&self) -> usize {
        self.shift
    }
}

impl<P: Presheaf> Presheaf for Delta<P> {
    type Elem = P::Elem;

    fn describe(&self) -> String {
        match self.shift {
            1 => format!("delta({})", self.inner.describe()),
            k => format!("delta^{k}({})", self.inner.describe()),
        }
    }

    fn carrier(&self, m: usize) -> Result<Carrier<P::Elem>> {
        self.inner.carrier(m + self.shift)
    }

    fn act(&self, f: &FinMap, x: &P::Elem) -> Result<P::Elem> {
        self.inner.act(&f.extend(self.shift), x)
    }

    fn max_stage(&self) -> Option<usize> {
        self.inner.max_stage().map(|b| b - self.shift)
    }
}

/// Stage `m` is defined for `p`.
pub(crate) fn within<P: Presheaf>(p: &P, m: usize) -> Result<()> {
    match p.max_stage() {
        Some(bound) if m > bound => Err(Error::Range { stage: m, bound }),
        _ => Ok(()),
    }
}

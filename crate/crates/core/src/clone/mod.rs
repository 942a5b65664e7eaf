//! Abstract clones: sorted families `C_n` with substitution `mu` and
//! projections `iota`, together with concrete instances and law checkers.

mod builtin;
mod finite;
mod free;
mod laws;
mod term;
mod theory;

use std::fmt::Debug;
use std::hash::Hash;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::report::Sampling;

pub use builtin::{builtin_clone, Builtin, BuiltinClone};
pub use finite::{finite_clone_of_algebra, FiniteAlgebra, FiniteClone, OpTable, Operation};
pub use free::{free_iota, free_mu, FreeClone};
pub use laws::{clone_hom_check, clone_laws_check, CloneLawInstance};
pub use term::{Signature, Term};
pub use theory::{
    enumerate_theory_homs, theory_compose, theory_identity, theory_laws_check,
    theory_laws_check_with, TheoryHom,
};

/// Anything that can be an element of a carrier: comparable, hashable, and
/// serializable so that counterexamples can be written out and replayed.
pub trait Element:
    Clone + Eq + Ord + Hash + Debug + Serialize + DeserializeOwned + Send + Sync + 'static
{
}

impl<T> Element for T where
    T: Clone + Eq + Ord + Hash + Debug + Serialize + DeserializeOwned + Send + Sync + 'static
{
}

/// An enumerated carrier. `complete` is false when the enumeration was cut
/// off by a budget and the true carrier is larger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Carrier<E> {
    pub elems: Vec<E>,
    pub complete: bool,
}

impl<E> Carrier<E> {
    pub fn complete(elems: Vec<E>) -> Self {
        Carrier {
            elems,
            complete: true,
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

/// Bounds for checks over possibly infinite carriers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Deepest term enumerated for term clones.
    pub max_depth: usize,
    /// Largest arity `n` whose carrier `C_n` is enumerated.
    pub max_arity: usize,
    pub sampling: Sampling,
}

impl Budget {
    pub fn new(max_depth: usize, max_arity: usize) -> Self {
        Budget {
            max_depth,
            max_arity,
            sampling: Sampling::default(),
        }
    }

    pub fn with_sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(2, 3)
    }
}

/// A clone presented by its carriers, substitution and projections.
pub trait AbstractClone {
    type Elem: Element;

    /// Short human-readable name used as a report subject.
    fn describe(&self) -> String;

    /// The carrier `C_n`, enumerated in a deterministic order.
    fn elems(&self, n: usize, budget: &Budget) -> Result<Carrier<Self::Elem>>;

    /// `mu_{m,n}(t, us)`: substitute the `m` elements of `C_n` in `us` into
    /// `t` from `C_m`.
    fn mu(&self, m: usize, n: usize, t: &Self::Elem, us: &[Self::Elem]) -> Result<Self::Elem>;

    /// The projection `iota^m_i`.
    fn iota(&self, m: usize, i: usize) -> Result<Self::Elem>;

    /// Equality in `C_n`.
    fn elem_eq(&self, _n: usize, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }
}

impl<K: AbstractClone + ?Sized> AbstractClone for &K {
    type Elem = K::Elem;

    fn describe(&self) -> String {
        (**self).describe()
    }

    fn elems(&self, n: usize, budget: &Budget) -> Result<Carrier<Self::Elem>> {
        (**self).elems(n, budget)
    }

    fn mu(&self, m: usize, n: usize, t: &Self::Elem, us: &[Self::Elem]) -> Result<Self::Elem> {
        (**self).mu(m, n, t, us)
    }

    fn iota(&self, m: usize, i: usize) -> Result<Self::Elem> {
        (**self).iota(m, i)
    }

    fn elem_eq(&self, n: usize, a: &Self::Elem, b: &Self::Elem) -> bool {
        (**self).elem_eq(n, a, b)
    }
}

pub(crate) fn check_len(what: &str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(crate::error::Error::Shape(format!(
            "{what}: expected {expected} arguments, got {found}"
        )))
    }
}

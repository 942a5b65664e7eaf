use crate::clone::Carrier;
use crate::error::Result;
use crate::fin_cat::FinMap;
use crate::presheaf::Presheaf;

use super::SubstAlgebra;

type ActPatch<E> = Box<dyn Fn(&FinMap, &E, E) -> E + Send + Sync>;
type SubstPatch<E> = Box<dyn Fn(usize, &E, &E, E) -> E + Send + Sync>;
type VarPatch<E> = Box<dyn Fn(usize, E) -> E + Send + Sync>;

/// An algebra with some of its operations rewritten, for mutation testing.
/// Each patch receives the inputs and the base result and returns the value
/// to use instead.
pub struct Patched<A: SubstAlgebra> {
    base: A,
    label: String,
    act: Option<ActPatch<A::Elem>>,
    subst: Option<SubstPatch<A::Elem>>,
    var: Option<VarPatch<A::Elem>>,
}

impl<A: SubstAlgebra> Patched<A> {
    pub fn new(base: A, label: impl Into<String>) -> Self {
        Patched {
            base,
            label: label.into(),
            act: None,
            subst: None,
            var: None,
        }
    }

    pub fn base(&self) -> &A {
        &self.base
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_act(mut self, f: impl Fn(&FinMap, &A::Elem, A::Elem) -> A::Elem + Send + Sync + 'static) -> Self {
        self.act = Some(Box::new(f));
        self
    }

    pub fn with_subst(
        mut self,
        f: impl Fn(usize, &A::Elem, &A::Elem, A::Elem) -> A::Elem + Send + Sync + 'static,
    ) -> Self {
        self.subst = Some(Box::new(f));
        self
    }

    pub fn with_var(mut self, f: impl Fn(usize, A::Elem) -> A::Elem + Send + Sync + 'static) -> Self {
        self.var = Some(Box::new(f));
        self
    }
}

impl<A: SubstAlgebra> Presheaf for Patched<A> {
    type Elem = A::Elem;

    fn describe(&self) -> String {
        format!("{} [{}]", self.base.describe(), self.label)
    }

    fn carrier(&self, m: usize) -> Result<Carrier<A::Elem>> {
        self.base.carrier(m)
    }

    fn act(&self, f: &FinMap, x: &A::Elem) -> Result<A::Elem> {
        let y = self.base.act(f, x)?;
        Ok(match &self.act {
            Some(p) => p(f, x, y),
            None => y,
        })
    }

    fn max_stage(&self) -> Option<usize> {
        self.base.max_stage()
    }
}

impl<A: SubstAlgebra> SubstAlgebra for Patched<A> {
    fn subst(&self, m: usize, x: &A::Elem, y: &A::Elem) -> Result<A::Elem> {
        let z = self.base.subst(m, x, y)?;
        Ok(match &self.subst {
            Some(p) => p(m, x, y, z),
            None => z,
        })
    }

    fn var(&self, m: usize) -> Result<A::Elem> {
        let v = self.base.var(m)?;
        Ok(match &self.var {
            Some(p) => p(m, v),
            None => v,
        })
    }
}

//! Substitution algebras: presheaves `A` with single-variable substitution
//! `s_m : A(m+1) x A(m) -> A(m)` and variables `v_m` in `A(m+1)`, checked
//! either as a family of equations or as commuting diagrams.

mod laws;
mod mutant;
mod truncated;

use crate::error::Result;
use crate::presheaf::Presheaf;

pub use laws::{
    check_diagrams, check_presentation, hom_check, presentation_agreement, SubstInstance, DIAGRAM_LAWS, EQUATION_LAWS,
    LAW_MAPPING,
};
pub use mutant::Patched;
pub use truncated::TruncatedAlgebra;

pub trait SubstAlgebra: Presheaf {
    /// `s_m(x, y)`: substitute `y` from `A(m)` for the last variable of `x`
    /// from `A(m+1)`.
    fn subst(&self, m: usize, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;

    /// The variable `v_m` in `A(m+1)`.
    fn var(&self, m: usize) -> Result<Self::Elem>;
}

impl<A: SubstAlgebra + ?Sized> SubstAlgebra for &A {
    fn subst(&self, m: usize, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem> {
        (**self).subst(m, x, y)
    }

    fn var(&self, m: usize) -> Result<Self::Elem> {
        (**self).var(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::s_functor;
    use crate::clone::{builtin_clone, Budget, BuiltinClone};
    use crate::bridge::CloneAlgebra;
    use crate::report::{Mode, Sampling};

    fn initial() -> CloneAlgebra<BuiltinClone> {
        s_functor(builtin_clone("initial").unwrap(), Budget::default())
    }

    #[test]
    fn s_of_initial_passes_both_presentations() {
        let a = initial();
        let ex = Sampling::exhaustive();
        let eq = check_presentation(&a, 4, &ex).unwrap();
        assert!(eq.passed(), "{}", eq.render_text());
        let names: Vec<_> = eq.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, EQUATION_LAWS);
        let dg = check_diagrams(&a, 4, &ex).unwrap();
        assert!(dg.passed(), "{}", dg.render_text());
        let names: Vec<_> = dg.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, DIAGRAM_LAWS);
    }

    #[test]
    fn constant_substitution_breaks_weakening() {
        let a = Patched::new(initial(), "s_2 = 0").with_subst(|m, _, _, z| if m == 2 { 0 } else { z });
        let r = check_presentation(&a, 4, &Sampling::exhaustive()).unwrap();
        let w = r.check("weakening").unwrap();
        assert!(!w.passed());
        // first failing pair in walk order: x = 1, y = 0
        let inst: SubstInstance<usize> =
            serde_json::from_value(w.witness.as_ref().unwrap()["instance"].clone()).unwrap();
        assert_eq!(inst, SubstInstance::Weakening { m: 2, x: 1, y: 0 });
        assert!(!inst.holds(&a, Mode::Equations).unwrap());
    }

    #[test]
    fn wrong_variable_breaks_the_unit_diagram() {
        let a = Patched::new(initial(), "v_2 = 0").with_var(|m, v| if m == 2 { 0 } else { v });
        let r = check_diagrams(&a, 4, &Sampling::exhaustive()).unwrap();
        assert!(!r.check("unit-diagram").unwrap().passed());
        assert!(!r.check("v-naturality").unwrap().passed());
        let r = check_presentation(&a, 4, &Sampling::exhaustive()).unwrap();
        assert!(!r.check("variable-coherence").unwrap().passed());
    }

    #[test]
    fn every_witness_replays() {
        let a = Patched::new(initial(), "s_2 flipped").with_subst(|m, x, y, z| {
            if m == 2 && *x == 0 && *y == 1 {
                1 - z.min(1)
            } else {
                z
            }
        });
        for mode in [Mode::Equations, Mode::Diagrams] {
            let r = match mode {
                Mode::Equations => check_presentation(&a, 4, &Sampling::exhaustive()),
                Mode::Diagrams => check_diagrams(&a, 4, &Sampling::exhaustive()),
            }
            .unwrap();
            assert!(!r.passed());
            for c in r.checks.iter().filter(|c| !c.passed()) {
                let inst: SubstInstance<usize> =
                    serde_json::from_value(c.witness.as_ref().unwrap()["instance"].clone()).unwrap();
                assert_eq!(inst.check_name(mode), c.name);
                assert!(!inst.holds(&a, mode).unwrap(), "{}", c.name);
            }
        }
    }

    #[test]
    fn truncated_algebra_round_trips_through_json() {
        let (tab, elems) = TruncatedAlgebra::tabulate(&initial(), 3).unwrap();
        assert_eq!(elems[2], vec![0, 1]);
        let text = serde_json::to_string(&tab).unwrap();
        let back: TruncatedAlgebra = serde_json::from_str(&text).unwrap();
        assert_eq!(back, tab);
        assert!(check_presentation(&back, 3, &Sampling::exhaustive()).unwrap().passed());
        assert_eq!(back.subst(1, &1, &0).unwrap(), 0);
        assert!(matches!(back.var(3), Err(crate::Error::Range { .. })));
        assert!(check_presentation(&back, 4, &Sampling::exhaustive()).is_err());
    }

    #[test]
    fn malformed_tables_are_rejected() {
        let (tab, _) = TruncatedAlgebra::tabulate(&initial(), 2).unwrap();
        let mut v = serde_json::to_value(&tab).unwrap();
        v["s"]["1"] = serde_json::json!([0, 0, 0]);
        assert!(serde_json::from_value::<TruncatedAlgebra>(v.clone()).is_err());
        v["s"]["1"] = serde_json::json!([0, 9]);
        assert!(serde_json::from_value::<TruncatedAlgebra>(v).is_err());
    }

    #[test]
    fn hom_check_examples() {
        let a = initial();
        let id = |_: usize, x: &usize| Ok(*x);
        assert!(hom_check(id, &a, &a, 3, &Sampling::exhaustive()).unwrap().passed());
        // shifting indices by one breaks substitution
        let shifted = |m: usize, x: &usize| Ok(if m == 0 { *x } else { (x + 1) % m });
        let r = hom_check(shifted, &a, &a, 3, &Sampling::exhaustive()).unwrap();
        assert!(!r.check("preserves-substitution").unwrap().passed());
    }
}

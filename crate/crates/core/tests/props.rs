use std::collections::BTreeMap;

use proptest::prelude::*;

use clone_forge::bridge::{c_functor, phi, roundtrip_clone, s_functor};
use clone_forge::clone::{
    clone_laws_check, finite_clone_of_algebra, free_iota, free_mu, theory_compose,
    theory_identity, AbstractClone, Budget, FiniteAlgebra, Operation, TheoryHom,
};
use clone_forge::corpus;
use clone_forge::fin_cat::{coproduct, enumerate_maps, generators, hom_count, old, FinMap};
use clone_forge::presheaf::{check_delta_laws, Presheaf};
use clone_forge::report::{Mode, Sampling};
use clone_forge::subst::{
    check_diagrams, check_presentation, presentation_agreement, SubstAlgebra, SubstInstance,
    TruncatedAlgebra,
};

fn map(dom: usize, cod: usize) -> impl Strategy<Value = FinMap> {
    prop::collection::vec(0..cod.max(1), dom).prop_map(move |t| FinMap::new(cod, t).unwrap())
}

fn map_up_to(max: usize) -> impl Strategy<Value = FinMap> {
    (0..=max, 1..=max).prop_flat_map(|(d, c)| map(d, c))
}

fn chain3(max: usize) -> impl Strategy<Value = (FinMap, FinMap, FinMap)> {
    (0..=max, 1..=max, 1..=max, 1..=max)
        .prop_flat_map(|(a, b, c, d)| (map(a, b), map(b, c), map(c, d)))
}

fn algebra(max_carrier: usize) -> impl Strategy<Value = FiniteAlgebra> {
    (1..=max_carrier)
        .prop_flat_map(|k| {
            let op = |arity: usize| prop::collection::vec(0..k, k.pow(arity as u32));
            (
                Just(k),
                prop::option::of(op(0)),
                prop::option::of(op(1)),
                prop::option::of(op(2)),
            )
        })
        .prop_map(|(k, c, u, b)| {
            let mut ops = BTreeMap::new();
            for (name, arity, table) in [("c", 0, c), ("u", 1, u), ("b", 2, b)] {
                if let Some(table) = table {
                    ops.insert(name.to_string(), Operation { arity, table });
                }
            }
            FiniteAlgebra::new(k, ops).unwrap()
        })
}

fn tabulated(a: FiniteAlgebra, bound: usize) -> TruncatedAlgebra {
    let k = finite_clone_of_algebra(a, bound);
    TruncatedAlgebra::tabulate(&s_functor(k, Budget::default()), bound)
        .unwrap()
        .0
}

proptest! {
    #[test]
    fn composition_is_associative((f, g, h) in chain3(4)) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identities_are_units(f in map_up_to(4)) {
        prop_assert_eq!(FinMap::identity(f.dom()).compose(&f).unwrap(), f.clone());
        prop_assert_eq!(f.compose(&FinMap::identity(f.cod())).unwrap(), f);
    }

    #[test]
    fn coproduct_is_functorial((f, f2) in (0..=3usize, 1..=3usize, 1..=3usize).prop_flat_map(|(a, b, c)| (map(a, b), map(b, c))),
                               (g, g2) in (0..=3usize, 1..=3usize, 1..=3usize).prop_flat_map(|(a, b, c)| (map(a, b), map(b, c)))) {
        let lhs = coproduct(&f, &g).compose(&coproduct(&f2, &g2)).unwrap();
        let rhs = coproduct(&f.compose(&f2).unwrap(), &g.compose(&g2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn map_index_round_trips(f in map_up_to(4)) {
        prop_assert!(f.index() < hom_count(f.dom(), f.cod()));
        prop_assert_eq!(FinMap::from_index(f.dom(), f.cod(), f.index()), f);
    }

    #[test]
    fn free_mu_right_identity(n in 0..=3usize, pick in any::<prop::sample::Index>()) {
        let terms = corpus::free_be().terms(n, 2).elems;
        let t = pick.get(&terms);
        let vars: Vec<_> = (0..n).map(|i| free_iota(n, i).unwrap()).collect();
        prop_assert_eq!(&free_mu(n, n, t, &vars).unwrap(), t);
    }

    #[test]
    fn free_mu_projection((m, n) in (1..=3usize, 0..=3usize), i in any::<prop::sample::Index>(), picks in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
        let terms = corpus::free_be().terms(n, 1).elems;
        let us: Vec<_> = picks[..m].iter().map(|p| p.get(&terms).clone()).collect();
        let i = i.index(m);
        prop_assert_eq!(free_mu(m, n, &free_iota(m, i).unwrap(), &us).unwrap(), us[i].clone());
    }

    #[test]
    fn theory_identities_are_units(a in algebra(2), m in 0..=2usize, n in 0..=2usize, picks in prop::collection::vec(any::<prop::sample::Index>(), 2)) {
        let k = finite_clone_of_algebra(a, 2);
        let c = k.elems(m, &Budget::new(0, 2)).unwrap().elems;
        prop_assume!(!c.is_empty() || n == 0);
        let h = TheoryHom::new(m, picks[..n].iter().map(|p| p.get(&c).clone()).collect());
        let left = theory_compose(&k, &theory_identity(&k, n).unwrap(), &h).unwrap();
        let right = theory_compose(&k, &h, &theory_identity(&k, m).unwrap()).unwrap();
        prop_assert_eq!(&left, &h);
        prop_assert_eq!(&right, &h);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn finite_clones_satisfy_the_clone_laws(a in algebra(2)) {
        let k = finite_clone_of_algebra(a, 2);
        let r = clone_laws_check(&k, &Budget::new(0, 2).with_sampling(Sampling::exhaustive())).unwrap();
        prop_assert!(r.passed(), "{}", r.render_text());
    }

    #[test]
    fn s_of_a_finite_clone_is_a_substitution_algebra(a in algebra(2)) {
        let t = tabulated(a, 3);
        let ex = Sampling::exhaustive();
        let eq = check_presentation(&t, 3, &ex).unwrap();
        let dg = check_diagrams(&t, 3, &ex).unwrap();
        prop_assert!(eq.passed(), "{}", eq.render_text());
        prop_assert!(dg.passed(), "{}", dg.render_text());
        // variables are natural
        for m in 0..3 {
            for n in 0..3 {
                for f in enumerate_maps(m, n) {
                    prop_assert_eq!(t.act(&f.extend(1), &t.var(m).unwrap()).unwrap(), t.var(n).unwrap());
                }
            }
        }
    }

    #[test]
    fn delta_laws_hold_on_s_images(a in algebra(2)) {
        let t = tabulated(a, 3);
        let r = check_delta_laws(&t, 3, &Sampling::exhaustive()).unwrap();
        prop_assert!(r.passed(), "{}", r.render_text());
    }

    #[test]
    fn clone_round_trip_is_exact(a in algebra(2)) {
        let k = finite_clone_of_algebra(a, 2);
        let r = roundtrip_clone(&k, &Budget::new(0, 2).with_sampling(Sampling::exhaustive())).unwrap();
        prop_assert!(r.passed(), "{}", r.render_text());
    }

    #[test]
    fn c_of_an_algebra_is_a_clone(a in algebra(2)) {
        let b = Budget::new(0, 1).with_sampling(Sampling::exhaustive());
        let t = tabulated(a.clone(), 2);
        let r = clone_laws_check(&c_functor(&t), &b).unwrap();
        prop_assert!(r.passed(), "{}", r.render_text());
        let r = clone_laws_check(&c_functor(s_functor(finite_clone_of_algebra(a, 2), b)), &b).unwrap();
        prop_assert!(r.passed(), "{}", r.render_text());
    }

    #[test]
    fn phi_unfolds_from_the_right(a in algebra(2), (m, n) in (1..=2usize, 0..=1usize), picks in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
        let t = s_functor(finite_clone_of_algebra(a, 3), Budget::default());
        let top = t.carrier(n + m).unwrap().elems;
        let inner = t.carrier(n).unwrap().elems;
        prop_assume!(!inner.is_empty());
        prop_assume!(!top.is_empty());
        let x = picks[0].get(&top);
        let us: Vec<_> = picks[1..=m].iter().map(|p| p.get(&inner).clone()).collect();
        let incl = FinMap::new(n + m - 1, (0..n).collect()).unwrap();
        let step = t.subst(n + m - 1, x, &t.act(&incl, &us[m - 1]).unwrap()).unwrap();
        prop_assert_eq!(
            phi(&t, m, n, x, &us).unwrap(),
            phi(&t, m - 1, n, &step, &us[..m - 1]).unwrap()
        );
    }

    #[test]
    fn evaluation_is_contraction_after_weakening(a in algebra(2), m in 0..=1usize, pick in any::<prop::sample::Index>()) {
        let t = tabulated(a, 3);
        let elems = t.carrier(m + 1).unwrap().elems;
        let x = *pick.get(&elems);
        let weakened = t.act(&old(m).extend(1), &x).unwrap();
        let eval = SubstInstance::Evaluation { m, t: x }.sides(&t, Mode::Diagrams).unwrap();
        let contr = SubstInstance::Contraction { m, x: weakened }.sides(&t, Mode::Diagrams).unwrap();
        prop_assert_eq!(eval.0, contr.0);
        prop_assert_eq!(t.act(&FinMap::identity(m).coproduct(&generators().c), &weakened).unwrap(), x);
    }

    #[test]
    fn single_entry_mutations_agree_and_replay(a in algebra(2), m in 0..3usize, picks in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
        let mut t = tabulated(a, 3);
        let sizes = t.presheaf().sizes().to_vec();
        prop_assume!(sizes[m] > 1);
        let x = picks[0].index(sizes[m + 1]);
        let y = picks[1].index(sizes[m]);
        let z = (t.subst(m, &x, &y).unwrap() + 1 + picks[2].index(sizes[m] - 1)) % sizes[m];
        t.set_subst(m, x, y, z).unwrap();
        let ex = Sampling::exhaustive();
        let eq = check_presentation(&t, 3, &ex).unwrap();
        let dg = check_diagrams(&t, 3, &ex).unwrap();
        let agree = presentation_agreement(&eq, &dg);
        prop_assert!(agree.passed(), "{}", agree.render_text());
        for (mode, r) in [(Mode::Equations, &eq), (Mode::Diagrams, &dg)] {
            for c in r.checks.iter().filter(|c| !c.passed()) {
                let inst: SubstInstance<usize> =
                    serde_json::from_value(c.witness.as_ref().unwrap()["instance"].clone()).unwrap();
                prop_assert_eq!(inst.check_name(mode), c.name.as_str());
                prop_assert!(!inst.holds(&t, mode).unwrap());
            }
        }
    }

    #[test]
    fn tabulated_algebras_round_trip_through_json(a in algebra(3)) {
        let t = tabulated(a, 2);
        let back: TruncatedAlgebra = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        prop_assert_eq!(back, t);
    }
}

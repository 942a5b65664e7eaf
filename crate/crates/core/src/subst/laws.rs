use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::clone::Element;
use crate::error::{Error, Result};
use crate::fin_cat::{enumerate_maps, generators, hom_count, old, FinMap};
use crate::presheaf::laws::{functoriality_checks, Stages};
use crate::presheaf::{delta_apply, delta_structure, strengths, within};
use crate::report::{witness, CheckResult, Mode, Report, Sampling, Tally};

use super::SubstAlgebra;

/// Check names produced by [`check_presentation`], in report order.
pub const EQUATION_LAWS: [&str; 8] = [
    "functoriality-identity",
    "functoriality-composition",
    "naturality",
    "variable-coherence",
    "unit",
    "contraction",
    "weakening",
    "associativity",
];

/// Check names produced by [`check_diagrams`], in report order.
pub const DIAGRAM_LAWS: [&str; 9] = [
    "functoriality-identity",
    "functoriality-composition",
    "s-naturality",
    "v-naturality",
    "unit-diagram",
    "contraction-diagram",
    "weakening-diagram",
    "associativity-diagram",
    "evaluation-diagram",
];

/// Equation check paired with the diagram check that has the same verdict on
/// any functorial structure. The evaluation diagram is the alternative to
/// the contraction diagram and has no partner.
pub const LAW_MAPPING: [(&str, &str); 8] = [
    ("functoriality-identity", "functoriality-identity"),
    ("functoriality-composition", "functoriality-composition"),
    ("naturality", "s-naturality"),
    ("variable-coherence", "v-naturality"),
    ("unit", "unit-diagram"),
    ("contraction", "contraction-diagram"),
    ("weakening", "weakening-diagram"),
    ("associativity", "associativity-diagram"),
];

/// One instance of a substitution-algebra law. Failing checks report the
/// instance as `witness.instance`, and [`SubstInstance::sides`] recomputes
/// both sides from the public operations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case", bound = "E: Element")]
pub enum SubstInstance<E> {
    /// `A(id_m)(x) = x`
    FunctorialityIdentity { m: usize, x: E },
    /// `A(f ; g)(x) = A(g)(A(f)(x))`
    FunctorialityComposition { f: FinMap, g: FinMap, x: E },
    /// `A(f)(s_m(x, y)) = s_n(A(f + id_1)(x), A(f)(y))` for `f : m -> n`
    Naturality { f: FinMap, x: E, y: E },
    /// `v_m = A(0 |-> m)(v_0)`
    VariableCoherence { m: usize },
    /// `A(f + id_1)(v_m) = v_n` for `f : m -> n`
    VNaturality { f: FinMap },
    /// `s_m(v, x) = x`
    Unit { m: usize, x: E },
    /// `s_{m+1}(x, v) = A(id_m + c)(x)`
    Contraction { m: usize, x: E },
    /// `s_m(A(id_m + w)(x), y) = x`
    Weakening { m: usize, x: E, y: E },
    /// `s_m(s_{m+1}(x, y), z) = s_m(s_{m+1}(A(id_m + s)(x), A(id_m + w)(z)), s_m(y, z))`
    Associativity { m: usize, x: E, y: E, z: E },
    /// `s_{m+1}(A(old_m + id_1)(t), v_m) = t`
    Evaluation { m: usize, t: E },
}

impl<E: Element> SubstInstance<E> {
    /// Name of the check this instance belongs to under `mode`.
    pub fn check_name(&self, mode: Mode) -> &'static str {
        use SubstInstance::*;
        let eq = mode == Mode::Equations;
        match self {
            FunctorialityIdentity { .. } => "functoriality-identity",
            FunctorialityComposition { .. } => "functoriality-composition",
            Naturality { .. } if eq => "naturality",
            Naturality { .. } => "s-naturality",
            VariableCoherence { .. } => "variable-coherence",
            VNaturality { .. } => "v-naturality",
            Unit { .. } if eq => "unit",
            Unit { .. } => "unit-diagram",
            Contraction { .. } if eq => "contraction",
            Contraction { .. } => "contraction-diagram",
            Weakening { .. } if eq => "weakening",
            Weakening { .. } => "weakening-diagram",
            Associativity { .. } if eq => "associativity",
            Associativity { .. } => "associativity-diagram",
            Evaluation { .. } => "evaluation-diagram",
        }
    }

    /// Both sides of the law. Under [`Mode::Equations`] the variable in the
    /// unit and contraction laws is `v_m = A(0 |-> m)(v_0)`; under
    /// [`Mode::Diagrams`] it is `var(m)` itself.
    pub fn sides<A: SubstAlgebra<Elem = E>>(&self, alg: &A, mode: Mode) -> Result<(E, E)> {
        use SubstInstance::*;
        let variable = |m: usize| match mode {
            Mode::Equations => nu(alg, m),
            Mode::Diagrams => alg.var(m),
        };
        match self {
            FunctorialityIdentity { m, x } => Ok((alg.act(&FinMap::identity(*m), x)?, x.clone())),
            FunctorialityComposition { f, g, x } => {
                let whole = alg.act(&f.compose(g)?, x)?;
                let stepwise = alg.act(g, &alg.act(f, x)?)?;
                Ok((whole, stepwise))
            }
            Naturality { f, x, y } => {
                let (m, n) = (f.dom(), f.cod());
                let lhs = alg.act(f, &alg.subst(m, x, y)?)?;
                let rhs = alg.subst(n, &alg.act(&f.extend(1), x)?, &alg.act(f, y)?)?;
                Ok((lhs, rhs))
            }
            VariableCoherence { m } => Ok((alg.var(*m)?, nu(alg, *m)?)),
            VNaturality { f } => {
                let lhs = alg.act(&f.extend(1), &alg.var(f.dom())?)?;
                Ok((lhs, alg.var(f.cod())?))
            }
            Unit { m, x } => Ok((alg.subst(*m, &variable(*m)?, x)?, x.clone())),
            Contraction { m, x } => match mode {
                Mode::Equations => {
                    let lhs = alg.subst(m + 1, x, &variable(*m)?)?;
                    Ok((lhs, alg.act(&generators().c.shift(*m), x)?))
                }
                // mu = c at stage m, against T(s) . l . (id x v)
                Mode::Diagrams => {
                    let pair = strengths(alg, alg).ell(&(x.clone(), variable(*m)?));
                    let lhs = alg.subst(m + 1, &pair.0, &pair.1)?;
                    Ok((lhs, delta_structure(alg).contract(*m, x)?))
                }
            },
            Weakening { m, x, y } => {
                let wx = match mode {
                    Mode::Equations => alg.act(&generators().w.shift(*m), x)?,
                    // eta = w at stage m
                    Mode::Diagrams => delta_structure(alg).weaken(*m, x)?,
                };
                Ok((alg.subst(*m, &wx, y)?, x.clone()))
            }
            Associativity { m, x, y, z } => {
                let m = *m;
                let lhs = alg.subst(m, &alg.subst(m + 1, x, y)?, z)?;
                let rhs = match mode {
                    Mode::Equations => {
                        let sx = alg.act(&generators().s.shift(m), x)?;
                        let wz = alg.act(&generators().w.shift(m), z)?;
                        alg.subst(m, &alg.subst(m + 1, &sx, &wz)?, &alg.subst(m, y, z)?)?
                    }
                    // dist x id, then str-bullet, then T(s) x s, then s
                    Mode::Diagrams => {
                        let (sx, y1) = strengths(alg, alg).dist(m, x, y)?;
                        let da = delta_apply(alg)?;
                        let (a, oz, b, z1) = strengths(&da, alg).str_bullet(m, &sx, &y1, z)?;
                        alg.subst(m, &alg.subst(m + 1, &a, &oz)?, &alg.subst(m, &b, &z1)?)?
                    }
                };
                Ok((lhs, rhs))
            }
            Evaluation { m, t } => {
                // T(s) . str' . (id x v)
                let da = delta_apply(alg)?;
                let (a, b) = strengths(&da, alg).str_prime(*m, t, &alg.var(*m)?)?;
                Ok((alg.subst(m + 1, &a, &b)?, t.clone()))
            }
        }
    }

    pub fn holds<A: SubstAlgebra<Elem = E>>(&self, alg: &A, mode: Mode) -> Result<bool> {
        let (l, r) = self.sides(alg, mode)?;
        Ok(l == r)
    }

    fn witness<A: SubstAlgebra<Elem = E>>(&self, alg: &A, mode: Mode) -> Result<Option<Value>> {
        let (l, r) = self.sides(alg, mode)?;
        Ok((l != r).then(|| witness(self, &l, &r)))
    }
}

/// `A(0 |-> m)(v_0)`, the variable of `A(m+1)` obtained from the generic one.
fn nu<A: SubstAlgebra>(alg: &A, m: usize) -> Result<A::Elem> {
    alg.act(&FinMap::point(m, m + 1)?, &alg.var(0)?)
}

// a fast path disagreed with its own instance would be a bug in this module
fn replay<A: SubstAlgebra>(inst: SubstInstance<A::Elem>, alg: &A, mode: Mode) -> Result<Value> {
    inst.witness(alg, mode)?.ok_or_else(|| {
        Error::Invalid(format!("fast path reported {} but replay holds", inst.check_name(mode)))
    })
}

/// Checks every law of `mode` on `alg` over all stages up to `bound`.
fn run<A: SubstAlgebra>(alg: &A, bound: usize, sampling: &Sampling, mode: Mode) -> Result<Report> {
    let st = Stages::load(alg, bound)?;
    let el = &st.elems;
    let mut report = Report::new(format!("substitution laws of {}", alg.describe())).with_mode(mode);
    let tally = |name: &str| {
        let mut t = Tally::new(name, sampling);
        t.mark_incomplete(st.incomplete);
        t
    };

    for mut c in functoriality_checks(alg, &st, sampling)? {
        if let Some(Value::Object(inst)) = c.witness.as_mut().and_then(|w| w.get_mut("instance")) {
            inst.insert("law".into(), Value::String(c.name.clone()));
        }
        report.push(c);
    }

    let eq = mode == Mode::Equations;
    report.push(naturality(alg, &st, sampling, mode)?);

    if eq {
        let mut t = tally("variable-coherence");
        for m in st.stages(1) {
            let inst = SubstInstance::VariableCoherence { m };
            t.record(inst.witness(alg, mode)?);
        }
        report.push(t.finish());
    } else {
        let mut t = tally("v-naturality");
        for m in st.stages(1) {
            for n in st.stages(1) {
                for f in enumerate_maps(m, n) {
                    t.record(SubstInstance::VNaturality { f }.witness(alg, mode)?);
                }
            }
        }
        report.push(t.finish());
    }

    let name = |e: &'static str, d: &'static str| if eq { e } else { d };
    let mut t = tally(name("unit", "unit-diagram"));
    for m in st.stages(1) {
        t.sweep(&[st.len(m)], |i| {
            SubstInstance::Unit { m, x: el[m][i[0]].clone() }.witness(alg, mode)
        })?;
    }
    report.push(t.finish());

    let mut t = tally(name("contraction", "contraction-diagram"));
    for m in st.stages(2) {
        t.sweep(&[st.len(m + 2)], |i| {
            SubstInstance::Contraction { m, x: el[m + 2][i[0]].clone() }.witness(alg, mode)
        })?;
    }
    report.push(t.finish());

    let mut t = tally(name("weakening", "weakening-diagram"));
    for m in st.stages(1) {
        let weak = el[m]
            .iter()
            .map(|x| alg.act(&generators().w.shift(m), x))
            .collect::<Result<Vec<_>>>()?;
        t.sweep(&[st.len(m), st.len(m)], |i| {
            if alg.subst(m, &weak[i[0]], &el[m][i[1]])? == el[m][i[0]] {
                return Ok(None);
            }
            let inst = SubstInstance::Weakening { m, x: el[m][i[0]].clone(), y: el[m][i[1]].clone() };
            replay(inst, alg, mode).map(Some)
        })?;
    }
    report.push(t.finish());

    report.push(associativity(alg, &st, sampling, mode)?);

    if !eq {
        let mut t = tally("evaluation-diagram");
        for m in st.stages(2) {
            t.sweep(&[st.len(m + 1)], |i| {
                SubstInstance::Evaluation { m, t: el[m + 1][i[0]].clone() }.witness(alg, mode)
            })?;
        }
        report.push(t.finish());
    }
    Ok(report)
}

fn naturality<A: SubstAlgebra>(
    alg: &A,
    st: &Stages<A::Elem>,
    sampling: &Sampling,
    mode: Mode,
) -> Result<CheckResult> {
    let el = &st.elems;
    let mut t = Tally::new(
        if mode == Mode::Equations { "naturality" } else { "s-naturality" },
        sampling,
    );
    t.mark_incomplete(st.incomplete);
    for m in st.stages(1) {
        // s_m(x, y), shared by every f out of m
        let mut s_memo: HashMap<(usize, usize), A::Elem> = HashMap::new();
        for n in st.stages(1) {
            let maps = enumerate_maps(m, n);
            let mut current: Option<(usize, Vec<A::Elem>, FinMap)> = None;
            let mut fx: Option<((usize, usize), A::Elem)> = None;
            t.sweep(&[hom_count(m, n), st.len(m + 1), st.len(m)], |i| {
                let (fi, xi, yi) = (i[0], i[1], i[2]);
                let f = &maps[fi];
                if current.as_ref().map(|c| c.0) != Some(fi) {
                    let fy = el[m].iter().map(|y| alg.act(f, y)).collect::<Result<Vec<_>>>()?;
                    current = Some((fi, fy, f.extend(1)));
                }
                let (_, fy, f1) = current.as_ref().expect("set above");
                if fx.as_ref().map(|c| c.0) != Some((fi, xi)) {
                    fx = Some(((fi, xi), alg.act(f1, &el[m + 1][xi])?));
                }
                let fx_val = &fx.as_ref().expect("set above").1;
                let s = match s_memo.get(&(xi, yi)) {
                    Some(s) => s.clone(),
                    None => {
                        let s = alg.subst(m, &el[m + 1][xi], &el[m][yi])?;
                        s_memo.insert((xi, yi), s.clone());
                        s
                    }
                };
                if alg.act(f, &s)? == alg.subst(n, fx_val, &fy[yi])? {
                    return Ok(None);
                }
                let inst = SubstInstance::Naturality {
                    f: f.clone(),
                    x: el[m + 1][xi].clone(),
                    y: el[m][yi].clone(),
                };
                replay(inst, alg, mode).map(Some)
            })?;
        }
    }
    Ok(t.finish())
}

fn associativity<A: SubstAlgebra>(
    alg: &A,
    st: &Stages<A::Elem>,
    sampling: &Sampling,
    mode: Mode,
) -> Result<CheckResult> {
    let el = &st.elems;
    let mut t = Tally::new(
        if mode == Mode::Equations { "associativity" } else { "associativity-diagram" },
        sampling,
    );
    t.mark_incomplete(st.incomplete);
    for m in st.stages(2) {
        let d = delta_structure(alg);
        let swapped = el[m + 2].iter().map(|x| d.swap(m, x)).collect::<Result<Vec<_>>>()?;
        let weak = el[m].iter().map(|z| alg.act(&old(m), z)).collect::<Result<Vec<_>>>()?;
        let mut yz: HashMap<(usize, usize), A::Elem> = HashMap::new();
        // s_{m+1}(x, y) and s_{m+1}(swap x, weak z) for the current x
        let mut xy: Option<((usize, usize), A::Elem)> = None;
        let mut xz: (Option<usize>, Vec<Option<A::Elem>>) = (None, vec![None; st.len(m)]);
        t.sweep(&[st.len(m + 2), st.len(m + 1), st.len(m)], |i| {
            let (xi, yi, zi) = (i[0], i[1], i[2]);
            let (x, y, z) = (&el[m + 2][xi], &el[m + 1][yi], &el[m][zi]);
            if xy.as_ref().map(|c| c.0) != Some((xi, yi)) {
                xy = Some(((xi, yi), alg.subst(m + 1, x, y)?));
            }
            if xz.0 != Some(xi) {
                xz = (Some(xi), vec![None; st.len(m)]);
            }
            let p = match &xz.1[zi] {
                Some(p) => p.clone(),
                None => {
                    let p = alg.subst(m + 1, &swapped[xi], &weak[zi])?;
                    xz.1[zi] = Some(p.clone());
                    p
                }
            };
            let q = match yz.get(&(yi, zi)) {
                Some(q) => q.clone(),
                None => {
                    let q = alg.subst(m, y, z)?;
                    yz.insert((yi, zi), q.clone());
                    q
                }
            };
            let lhs = alg.subst(m, &xy.as_ref().expect("set above").1, z)?;
            if lhs == alg.subst(m, &p, &q)? {
                return Ok(None);
            }
            let inst = SubstInstance::Associativity { m, x: x.clone(), y: y.clone(), z: z.clone() };
            replay(inst, alg, mode).map(Some)
        })?;
    }
    Ok(t.finish())
}

/// The equational presentation: functoriality, naturality of `s`, coherence
/// of the variables, and the unit, contraction, weakening and associativity
/// equations, each at every stage where all stages it touches are at most
/// `bound`.
pub fn check_presentation<A: SubstAlgebra>(alg: &A, bound: usize, sampling: &Sampling) -> Result<Report> {
    run(alg, bound, sampling, Mode::Equations)
}

/// The diagrammatic presentation, each diagram compiled to its component at
/// stage `m`:
/// unit `s_m(v_m, a) = a`;
/// contraction `s_{m+1}(x, v_m) = A(id_m + c)(x)`;
/// evaluation `s_{m+1}(A(old_m + id_1)(t), v_m) = t`;
/// weakening `s_m(A(id_m + w)(x), y) = x`;
/// associativity `s_m(s_{m+1}(x, y), z) = s_m(s_{m+1}(A(id_m + s)(x), A(id_m + w)(z)), s_m(y, z))`;
/// plus naturality of `s` and `v` as morphisms of presheaves.
pub fn check_diagrams<A: SubstAlgebra>(alg: &A, bound: usize, sampling: &Sampling) -> Result<Report> {
    run(alg, bound, sampling, Mode::Diagrams)
}

/// Compares the verdicts of an equations report and a diagrams report pair
/// by pair along [`LAW_MAPPING`]. Agreement is only guaranteed on functorial
/// structures, so a note is added when functoriality fails.
pub fn presentation_agreement(equations: &Report, diagrams: &Report) -> Report {
    let mut report = Report::new(format!("agreement for {}", equations.subject));
    for (eq, dg) in LAW_MAPPING {
        let verdicts = (
            equations.check(eq).map(|c| c.status),
            diagrams.check(dg).map(|c| c.status),
        );
        let ok = matches!(verdicts, (Some(a), Some(b)) if a == b);
        let w = json!({ eq: verdicts.0, dg: verdicts.1 });
        report.push(CheckResult::single(format!("{eq} ~ {dg}"), ok, Some(w)));
    }
    if LAW_MAPPING[..2]
        .iter()
        .any(|(eq, _)| equations.check(eq).is_some_and(|c| !c.passed()))
    {
        report.note("functoriality fails, agreement is not guaranteed");
    }
    report
}

/// Whether the family `h_m : A(m) -> B(m)` is a homomorphism of substitution
/// algebras: natural, and commuting with variables and substitution.
pub fn hom_check<A, B, H>(h: H, src: &A, dst: &B, bound: usize, sampling: &Sampling) -> Result<Report>
where
    A: SubstAlgebra,
    B: SubstAlgebra,
    H: Fn(usize, &A::Elem) -> Result<B::Elem>,
{
    within(dst, bound)?;
    let st = Stages::load(src, bound)?;
    let el = &st.elems;
    let mut report = Report::new(format!("homomorphism {} -> {}", src.describe(), dst.describe()));
    let tally = |name: &str| {
        let mut t = Tally::new(name, sampling);
        t.mark_incomplete(st.incomplete);
        t
    };

    let mut t = tally("naturality");
    for m in 0..=bound {
        let hx = el[m].iter().map(|x| h(m, x)).collect::<Result<Vec<_>>>()?;
        for n in 0..=bound {
            let maps = enumerate_maps(m, n);
            t.sweep(&[maps.len(), st.len(m)], |i| {
                let (f, x) = (&maps[i[0]], &el[m][i[1]]);
                let lhs = h(n, &src.act(f, x)?)?;
                let rhs = dst.act(f, &hx[i[1]])?;
                Ok((lhs != rhs).then(|| witness(&json!({"f": f, "x": x}), &lhs, &rhs)))
            })?;
        }
    }
    report.push(t.finish());

    let mut t = tally("preserves-variables");
    for m in st.stages(1) {
        let lhs = h(m + 1, &src.var(m)?)?;
        let rhs = dst.var(m)?;
        t.record((lhs != rhs).then(|| witness(&json!({"m": m}), &lhs, &rhs)));
    }
    report.push(t.finish());

    let mut t = tally("preserves-substitution");
    for m in st.stages(1) {
        let hx = el[m + 1].iter().map(|x| h(m + 1, x)).collect::<Result<Vec<_>>>()?;
        let hy = el[m].iter().map(|y| h(m, y)).collect::<Result<Vec<_>>>()?;
        t.sweep(&[st.len(m + 1), st.len(m)], |i| {
            let (x, y) = (&el[m + 1][i[0]], &el[m][i[1]]);
            let lhs = h(m, &src.subst(m, x, y)?)?;
            let rhs = dst.subst(m, &hx[i[0]], &hy[i[1]])?;
            Ok((lhs != rhs).then(|| witness(&json!({"m": m, "x": x, "y": y}), &lhs, &rhs)))
        })?;
    }
    report.push(t.finish());
    Ok(report)
}

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finitary signature: operator names with their arities. Signatures carry
/// no equations.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawSignature")]
pub struct Signature {
    operators: BTreeMap<String, usize>,
}

#[derive(Deserialize)]
struct RawSignature {
    operators: BTreeMap<String, usize>,
}

impl TryFrom<RawSignature> for Signature {
    type Error = Error;

    fn try_from(raw: RawSignature) -> Result<Self> {
        Signature::new(raw.operators)
    }
}

fn is_variable_name(s: &str) -> bool {
    s.len() > 1 && s.starts_with('x') && s[1..].bytes().all(|b| b.is_ascii_digit())
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new<S: Into<String>>(ops: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut operators = BTreeMap::new();
        for (name, arity) in ops {
            let name = name.into();
            if !is_identifier(&name) || is_variable_name(&name) {
                return Err(Error::Invalid(format!(
                    "operator name `{name}` must be an identifier other than x<digits>"
                )));
            }
            if operators.insert(name.clone(), arity).is_some() {
                return Err(Error::Invalid(format!("duplicate operator `{name}`")));
            }
        }
        Ok(Signature { operators })
    }

    pub fn arity(&self, op: &str) -> Option<usize> {
        self.operators.get(op).copied()
    }

    /// Operators in name order.
    pub fn operators(&self) -> impl Iterator<Item = (&str, usize)> {
        self.operators.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Every operator occurring in `t` is declared with a matching arity.
    pub fn check(&self, t: &Term) -> Result<()> {
        match t {
            Term::Var(_) => Ok(()),
            Term::App(app) => {
                let expected = self
                    .arity(&app.op)
                    .ok_or_else(|| Error::UnknownOperator(app.op.to_string()))?;
                if expected != app.args.len() {
                    return Err(Error::Arity {
                        op: app.op.to_string(),
                        expected,
                        found: app.args.len(),
                    });
                }
                app.args.iter().try_for_each(|a| self.check(a))
            }
        }
    }
}

/// First-order terms with de Bruijn-style numbered variables `x0, x1, ..`.
///
/// Application nodes are shared, so cloning is cheap. Each node caches its
/// scope (one more than the largest variable index, 0 for closed terms) and
/// its depth.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    App(Arc<App>),
}

#[derive(Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct App {
    op: Arc<str>,
    args: Vec<Term>,
    scope: usize,
    depth: usize,
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn app(op: impl Into<Arc<str>>, args: Vec<Term>) -> Term {
        let scope = args.iter().map(Term::scope).max().unwrap_or(0);
        let depth = 1 + args.iter().map(Term::depth).max().unwrap_or(0);
        Term::App(Arc::new(App {
            op: op.into(),
            args,
            scope,
            depth,
        }))
    }

    pub fn constant(op: impl Into<Arc<str>>) -> Term {
        Term::app(op, Vec::new())
    }

    /// Smallest context in which the term is well formed.
    pub fn scope(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::App(a) => a.scope,
        }
    }

    /// Variables have depth 0; an application is one deeper than its deepest
    /// argument.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(a) => a.depth,
        }
    }

    pub fn op(&self) -> Option<&str> {
        match self {
            Term::Var(_) => None,
            Term::App(a) => Some(&a.op),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(a) => &a.args,
        }
    }

    pub fn in_context(&self, n: usize) -> bool {
        self.scope() <= n
    }

    /// Simultaneous substitution of `us[i]` for `x_i`. Callers guarantee that
    /// `us` covers the scope of `self`.
    pub(crate) fn substitute(&self, us: &[Term]) -> Term {
        match self {
            Term::Var(i) => us[*i].clone(),
            Term::App(a) if a.scope == 0 => self.clone(),
            Term::App(a) => Term::App(Arc::new(App {
                op: a.op.clone(),
                args: a.args.iter().map(|t| t.substitute(us)).collect(),
                scope: 0,
                depth: 0,
            }))
            .refresh(),
        }
    }

    // recompute cached scope/depth of the top node after a rebuild
    fn refresh(self) -> Term {
        match self {
            Term::App(mut a) => {
                let node = Arc::get_mut(&mut a).expect("fresh node is unique");
                node.scope = node.args.iter().map(Term::scope).max().unwrap_or(0);
                node.depth = 1 + node.args.iter().map(Term::depth).max().unwrap_or(0);
                Term::App(a)
            }
            v => v,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::App(a) => {
                f.write_str(&a.op)?;
                if !a.args.is_empty() {
                    f.write_str("(")?;
                    for (k, t) in a.args.iter().enumerate() {
                        if k > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{t}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in `{}`", self.pos, self.src))
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err("expected identifier"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn term(&mut self) -> Result<Term> {
        let name = self.ident()?;
        if is_variable_name(name) {
            return name[1..]
                .parse()
                .map(Term::Var)
                .map_err(|_| self.err("variable index out of range"));
        }
        if !is_identifier(name) {
            return Err(self.err("bad operator name"));
        }
        let mut args = Vec::new();
        if self.eat('(')
            && !self.eat(')') {
                loop {
                    args.push(self.term()?);
                    if self.eat(')') {
                        break;
                    }
                    if !self.eat(',') {
                        return Err(self.err("expected `,` or `)`"));
                    }
                }
            }
        Ok(Term::app(name, args))
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Term> {
        let mut p = Parser { src: s, pos: 0 };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(t)
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse_agree() {
        for src in ["x0", "e", "b(x0,x1)", "b(b(x0,e),x12)", "f(x0,g(x1,x2),h)"] {
            let t: Term = src.parse().unwrap();
            assert_eq!(t.to_string(), src);
        }
        let t: Term = " b ( x0 , e() ) ".parse().unwrap();
        assert_eq!(t.to_string(), "b(x0,e)");
        assert!("b(x0".parse::<Term>().is_err());
        assert!("b(x0) x1".parse::<Term>().is_err());
        assert!("".parse::<Term>().is_err());
    }

    #[test]
    fn cached_scope_and_depth() {
        let t: Term = "b(x0,b(e,x3))".parse().unwrap();
        assert_eq!(t.scope(), 4);
        assert_eq!(t.depth(), 3);
        assert_eq!(Term::constant("e").scope(), 0);
        assert_eq!(Term::constant("e").depth(), 1);
        let s = t.substitute(&[Term::var(1), Term::var(0), Term::var(0), Term::var(0)]);
        assert_eq!(s.to_string(), "b(x1,b(e,x0))");
        assert_eq!(s.scope(), 2);
    }

    #[test]
    fn signature_validation() {
        let sig = Signature::new([("b", 2), ("e", 0)]).unwrap();
        assert!(sig.check(&"b(x0,e)".parse().unwrap()).is_ok());
        assert!(matches!(
            sig.check(&"b(x0)".parse().unwrap()),
            Err(Error::Arity { .. })
        ));
        assert!(matches!(
            sig.check(&"f(x0)".parse().unwrap()),
            Err(Error::UnknownOperator(_))
        ));
        assert!(Signature::new([("x1", 0)]).is_err());
        let parsed: Signature = serde_json::from_str(r#"{"operators": {"b": 2, "e": 0}}"#).unwrap();
        assert_eq!(parsed, sig);
    }

    #[test]
    fn terms_serialize_as_strings() {
        let t: Term = "b(x0,e)".parse().unwrap();
        assert_eq!(serde_json::to_string(&t).unwrap(), "\"b(x0,e)\"");
        let back: Term = serde_json::from_str("\"b(x0,e)\"").unwrap();
        assert_eq!(back, t);
    }
}

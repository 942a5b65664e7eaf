use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{check_len, AbstractClone, Budget, Carrier};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Builtin {
    /// The theory of equality: `C_n = {0, .., n-1}`, `mu(i, us) = us[i]`.
    Initial,
    /// Every carrier is a singleton.
    Terminal,
    /// Presented by `x, y |- x = y`: `C_0` is empty, every other carrier a
    /// singleton.
    Arrow,
}

impl Builtin {
    pub const ALL: [Builtin; 3] = [Builtin::Initial, Builtin::Terminal, Builtin::Arrow];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Initial => "initial",
            Builtin::Terminal => "terminal",
            Builtin::Arrow => "arrow",
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::UnknownBuiltin(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuiltinClone {
    kind: Builtin,
}

pub fn builtin_clone(name: &str) -> Result<BuiltinClone> {
    Ok(BuiltinClone::new(name.parse()?))
}

impl BuiltinClone {
    pub fn new(kind: Builtin) -> Self {
        BuiltinClone { kind }
    }

    pub fn kind(&self) -> Builtin {
        self.kind
    }

    fn size(&self, n: usize) -> usize {
        match self.kind {
            Builtin::Initial => n,
            Builtin::Terminal => 1,
            Builtin::Arrow => usize::from(n > 0),
        }
    }

    fn member(&self, n: usize, x: usize) -> Result<()> {
        if x < self.size(n) {
            Ok(())
        } else {
            Err(Error::NotInCarrier {
                stage: n,
                detail: format!("{x} in the {} clone", self.kind),
            })
        }
    }
}

impl AbstractClone for BuiltinClone {
    type Elem = usize;

    fn describe(&self) -> String {
        format!("{} clone", self.kind)
    }

    fn elems(&self, n: usize, _budget: &Budget) -> Result<Carrier<usize>> {
        Ok(Carrier::complete((0..self.size(n)).collect()))
    }

    fn mu(&self, m: usize, n: usize, t: &usize, us: &[usize]) -> Result<usize> {
        check_len("substitution", m, us.len())?;
        self.member(m, *t)?;
        for u in us {
            self.member(n, *u)?;
        }
        Ok(match self.kind {
            Builtin::Initial => us[*t],
            Builtin::Terminal | Builtin::Arrow => 0,
        })
    }

    fn iota(&self, m: usize, i: usize) -> Result<usize> {
        if i >= m {
            return Err(Error::Index { index: i, arity: m });
        }
        Ok(match self.kind {
            Builtin::Initial => i,
            Builtin::Terminal | Builtin::Arrow => 0,
        })
    }
}

//! Text form of difference polynomials.
//!
//! `s(X)` is the generator shift (ℕ and ℤ only), `s^k(X)` its `k`-th power and
//! `s{m}(X)` the shift by an explicit element, e.g. `s{(0,1)}(X)`, `s{-1}(X)`
//! or `s{ab}(X)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{DiffPoly, ShiftedVar};
use crate::expr::{self, ExprSink, ParseError, ShiftSpec};
use crate::field::Rational;
use crate::monoid::{MonoidElem, MonoidKind};

/// The monoid and variable names of a difference polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ring {
    pub kind: MonoidKind,
    pub vars: Vec<String>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && s != "s"
}

impl Ring {
    pub fn new(kind: MonoidKind, vars: Vec<String>) -> Result<Self, String> {
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(format!("'{v}' is not a valid variable name"));
            }
            if vars[..i].contains(v) {
                return Err(format!("variable name '{v}' is used twice"));
            }
        }
        Ok(Ring { kind, vars })
    }

    /// Variables named `X1, …, Xn`.
    pub fn default_for(kind: MonoidKind, arity: usize) -> Self {
        Ring {
            kind,
            vars: (1..=arity).map(|i| format!("X{i}")).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name).or_else(|| {
            // a one-variable ring also answers to a bare `X`
            (name == "X" && self.vars.len() == 1).then_some(0)
        })
    }

    pub fn zero(&self) -> DiffPoly {
        DiffPoly::zero(self.kind, self.arity())
    }

    pub fn int(&self, c: i64) -> DiffPoly {
        DiffPoly::int(self.kind, self.arity(), c)
    }

    pub fn var(&self, i: usize) -> DiffPoly {
        DiffPoly::var(self.kind, self.arity(), i)
    }

    pub fn shifted(&self, i: usize, shift: MonoidElem) -> DiffPoly {
        DiffPoly::shifted(self.kind, self.arity(), i, shift)
    }

    /// `σ(X_i)` for ℕ or ℤ.
    pub fn sigma(&self, i: usize) -> DiffPoly {
        self.shifted(i, generator(self.kind).expect("σ needs a one-generator monoid"))
    }

    pub fn parse(&self, text: &str) -> Result<DiffPoly, ParseError> {
        expr::parse(text, &mut DiffSink { ring: self })
    }

    pub fn print_var(&self, v: &ShiftedVar) -> String {
        let name = &self.vars[v.var];
        match &v.shift {
            m if m.is_identity() => name.clone(),
            MonoidElem::Nat(1) | MonoidElem::Int(1) => format!("s({name})"),
            MonoidElem::Nat(k) => format!("s^{k}({name})"),
            MonoidElem::Int(k) if *k > 0 => format!("s^{k}({name})"),
            m => format!("s{{{m}}}({name})"),
        }
    }

    /// Canonical text: terms in descending monomial order, ` + ` / ` - ` separated.
    pub fn print(&self, f: &DiffPoly) -> String {
        assert_eq!(f.arity(), self.arity(), "polynomial arity does not match the ring");
        let mut out = String::new();
        for (idx, (mono, c)) in f.terms.iter().rev().enumerate() {
            match (idx, c.is_negative()) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mag = c.abs();
            let factors: Vec<String> = mono
                .factors()
                .iter()
                .map(|(v, e)| match e {
                    1 => self.print_var(v),
                    _ => format!("{}^{e}", self.print_var(v)),
                })
                .collect();
            if factors.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&format!("{mag}*"));
                }
                out.push_str(&factors.join("*"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// The shift written `s(X)`.
pub(crate) fn generator(kind: MonoidKind) -> Option<MonoidElem> {
    match kind {
        MonoidKind::Nat => Some(MonoidElem::Nat(1)),
        MonoidKind::Int => Some(MonoidElem::Int(1)),
        _ => None,
    }
}

struct DiffSink<'r> {
    ring: &'r Ring,
}

impl DiffSink<'_> {
    fn lookup(&self, name: &str, offset: usize) -> Result<usize, ParseError> {
        self.ring
            .var_index(name)
            .ok_or_else(|| ParseError::new(offset, format!("unknown variable '{name}'")))
    }
}

impl ExprSink for DiffSink<'_> {
    type Value = DiffPoly;

    fn integer(&mut self, n: BigInt) -> DiffPoly {
        DiffPoly::constant(self.ring.kind, self.ring.arity(), Rational::from_integer(n))
    }

    fn ident(&mut self, name: &str, offset: usize) -> Result<DiffPoly, ParseError> {
        let i = self.lookup(name, offset)?;
        Ok(self.ring.var(i))
    }

    fn shifted(&mut self, spec: ShiftSpec<'_>, name: &str, offset: usize) -> Result<DiffPoly, ParseError> {
        let kind = self.ring.kind;
        let shift = match spec {
            ShiftSpec::Generator => generator(kind)
                .ok_or_else(|| ParseError::new(offset, format!("s(...) is ambiguous over {kind}; write s{{m}}(...)")))?,
            ShiftSpec::Power(k) => match kind {
                MonoidKind::Nat => MonoidElem::Nat(k),
                MonoidKind::Int => MonoidElem::Int(
                    i64::try_from(k).map_err(|_| ParseError::new(offset, "shift exponent too large"))?,
                ),
                _ => return Err(ParseError::new(offset, format!("s^k(...) is ambiguous over {kind}; write s{{m}}(...)"))),
            },
            ShiftSpec::Elem(text) => {
                MonoidElem::parse(kind, text).map_err(|e| ParseError::new(offset, e.to_string()))?
            }
        };
        let i = self.lookup(name, offset)?;
        Ok(self.ring.shifted(i, shift))
    }

    fn add(&mut self, a: DiffPoly, b: DiffPoly) -> Result<DiffPoly, ParseError> {
        Ok(&a + &b)
    }

    fn sub(&mut self, a: DiffPoly, b: DiffPoly) -> Result<DiffPoly, ParseError> {
        Ok(&a - &b)
    }

    fn mul(&mut self, a: DiffPoly, b: DiffPoly) -> Result<DiffPoly, ParseError> {
        Ok(&a * &b)
    }

    fn div(&mut self, a: DiffPoly, b: DiffPoly, offset: usize) -> Result<DiffPoly, ParseError> {
        let c = match b.terms.iter().next() {
            None => return Err(ParseError::new(offset, "division by zero")),
            Some((m, c)) if b.num_terms() == 1 && m.is_one() => c.clone(),
            Some(_) => return Err(ParseError::new(offset, "division by a non-constant polynomial")),
        };
        debug_assert!(!c.is_zero());
        Ok(a.scale(&(Rational::one() / c)))
    }

    fn neg(&mut self, a: DiffPoly) -> Result<DiffPoly, ParseError> {
        Ok(-&a)
    }

    fn pow(&mut self, a: DiffPoly, exp: u32, _: usize) -> Result<DiffPoly, ParseError> {
        Ok(a.pow(exp))
    }
}

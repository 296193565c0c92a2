//! Exact coefficient and value domains: ℚ and the rational-function field ℚ(t).
//!
//! Arithmetic never mixes the two fields implicitly; a rational is moved into
//! ℚ(t) only through [`FieldElem::lift`].

mod ratfunc;
mod unipoly;

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{self, ExprSink, ParseError, ShiftSpec};

pub use ratfunc::RationalFunction;
pub use unipoly::UniPoly;

pub type Rational = BigRational;

pub const DEFAULT_DEGREE_CAP: usize = 512;

static DEGREE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_DEGREE_CAP);

/// Current cap on numerator/denominator degree of ℚ(t) values.
pub fn degree_cap() -> usize {
    DEGREE_CAP.load(Ordering::Relaxed)
}

/// Sets the process-wide ℚ(t) degree cap.
pub fn set_degree_cap(cap: usize) {
    DEGREE_CAP.store(cap, Ordering::Relaxed);
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands from different fields (ℚ and ℚ(t))")]
    MixedFields,
    #[error("rational function degree {degree} exceeds the cap of {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("value {0} is not in ℚ")]
    NotRational(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldKind {
    #[serde(rename = "q")]
    Q,
    #[serde(rename = "qt")]
    Qt,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldKind::Q => "q",
            FieldKind::Qt => "qt",
        })
    }
}

impl std::str::FromStr for FieldKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "q" | "Q" => Ok(FieldKind::Q),
            "qt" | "Qt" | "Q(t)" => Ok(FieldKind::Qt),
            other => Err(format!("unknown field '{other}' (expected q or qt)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Q(Rational),
    Qt(RationalFunction),
}

impl FieldElem {
    pub fn zero(kind: FieldKind) -> Self {
        Self::from_rational(kind, Rational::zero())
    }

    pub fn one(kind: FieldKind) -> Self {
        Self::from_rational(kind, Rational::one())
    }

    pub fn from_rational(kind: FieldKind, r: Rational) -> Self {
        match kind {
            FieldKind::Q => FieldElem::Q(r),
            FieldKind::Qt => FieldElem::Qt(RationalFunction::constant(r)),
        }
    }

    pub fn from_int(kind: FieldKind, n: impl Into<BigInt>) -> Self {
        Self::from_rational(kind, Rational::from_integer(n.into()))
    }

    /// The transcendental `t ∈ ℚ(t)`.
    pub fn t() -> Self {
        FieldElem::Qt(RationalFunction::t())
    }

    pub fn kind(&self) -> FieldKind {
        match self {
            FieldElem::Q(_) => FieldKind::Q,
            FieldElem::Qt(_) => FieldKind::Qt,
        }
    }

    /// Embeds into `kind`; fails only when asked to move a genuine ℚ(t)
    /// value down into ℚ.
    pub fn lift(&self, kind: FieldKind) -> Result<Self, FieldError> {
        match (self, kind) {
            (FieldElem::Q(r), FieldKind::Qt) => Ok(FieldElem::Qt(RationalFunction::constant(r.clone()))),
            (FieldElem::Qt(f), FieldKind::Q) => f
                .as_constant()
                .map(FieldElem::Q)
                .ok_or_else(|| FieldError::NotRational(f.to_string())),
            _ => Ok(self.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_zero(),
            FieldElem::Qt(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_one(),
            FieldElem::Qt(f) => f.as_constant().is_some_and(|c| c.is_one()),
        }
    }

    /// The value as a rational number if it is one (a constant of ℚ(t) counts).
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            FieldElem::Q(r) => Some(r.clone()),
            FieldElem::Qt(f) => f.as_constant(),
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, FieldError> {
        match (self, rhs) {
            (FieldElem::Q(a), FieldElem::Q(b)) => Ok(FieldElem::Q(a + b)),
            (FieldElem::Qt(a), FieldElem::Qt(b)) => a.add(b).map(FieldElem::Qt),
            _ => Err(FieldError::MixedFields),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, FieldError> {
        match (self, rhs) {
            (FieldElem::Q(a), FieldElem::Q(b)) => Ok(FieldElem::Q(a - b)),
            (FieldElem::Qt(a), FieldElem::Qt(b)) => a.sub(b).map(FieldElem::Qt),
            _ => Err(FieldError::MixedFields),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, FieldError> {
        match (self, rhs) {
            (FieldElem::Q(a), FieldElem::Q(b)) => Ok(FieldElem::Q(a * b)),
            (FieldElem::Qt(a), FieldElem::Qt(b)) => a.mul(b).map(FieldElem::Qt),
            _ => Err(FieldError::MixedFields),
        }
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, FieldError> {
        match (self, rhs) {
            (FieldElem::Q(_), FieldElem::Q(b)) if b.is_zero() => Err(FieldError::DivisionByZero),
            (FieldElem::Q(a), FieldElem::Q(b)) => Ok(FieldElem::Q(a / b)),
            (FieldElem::Qt(a), FieldElem::Qt(b)) => a.div(b).map(FieldElem::Qt),
            _ => Err(FieldError::MixedFields),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldElem::Q(a) => FieldElem::Q(-a),
            FieldElem::Qt(a) => FieldElem::Qt(a.neg()),
        }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        FieldElem::one(self.kind()).div(self)
    }

    pub fn pow(&self, exp: u32) -> Result<Self, FieldError> {
        let mut acc = FieldElem::one(self.kind());
        for _ in 0..exp {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplies by a rational scalar, which is embedded into this element's field.
    pub fn scale(&self, c: &Rational) -> Result<Self, FieldError> {
        match self {
            FieldElem::Q(a) => Ok(FieldElem::Q(a * c)),
            FieldElem::Qt(a) => a.mul(&RationalFunction::constant(c.clone())).map(FieldElem::Qt),
        }
    }

    /// Parses `"p/q"` or an expression in `t` such as `"(t^2-1)/(t-1)"`.
    ///
    /// The result is in ℚ unless the text mentions `t`.
    pub fn parse(text: &str) -> Result<Self, FieldError> {
        let mut sink = RatFuncSink { used_t: false };
        let value = expr::parse(text, &mut sink)?;
        if sink.used_t {
            Ok(FieldElem::Qt(value))
        } else {
            Ok(FieldElem::Q(value.as_constant().expect("t-free expression is constant")))
        }
    }

    /// Parses and embeds into `kind`.
    pub fn parse_in(kind: FieldKind, text: &str) -> Result<Self, FieldError> {
        Self::parse(text)?.lift(kind)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Q(r) => write!(f, "{r}"),
            FieldElem::Qt(q) => write!(f, "{q}"),
        }
    }
}

/// Binary field operation selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arith(a: &FieldElem, b: &FieldElem, op: FieldOp) -> Result<FieldElem, FieldError> {
    match op {
        FieldOp::Add => a.add(b),
        FieldOp::Sub => a.sub(b),
        FieldOp::Mul => a.mul(b),
        FieldOp::Div => a.div(b),
    }
}

struct RatFuncSink {
    used_t: bool,
}

fn lift_err(offset: usize) -> impl Fn(FieldError) -> ParseError {
    move |e| ParseError::new(offset, e.to_string())
}

impl ExprSink for RatFuncSink {
    type Value = RationalFunction;

    fn integer(&mut self, n: BigInt) -> RationalFunction {
        RationalFunction::constant(Rational::from_integer(n))
    }

    fn ident(&mut self, name: &str, offset: usize) -> Result<RationalFunction, ParseError> {
        if name == "t" {
            self.used_t = true;
            Ok(RationalFunction::t())
        } else {
            Err(ParseError::new(offset, format!("unknown symbol '{name}' (only t is allowed)")))
        }
    }

    fn shifted(&mut self, _: ShiftSpec<'_>, _: &str, offset: usize) -> Result<RationalFunction, ParseError> {
        Err(ParseError::new(offset, "shift operators are not allowed in field values"))
    }

    fn add(&mut self, a: RationalFunction, b: RationalFunction) -> Result<RationalFunction, ParseError> {
        a.add(&b).map_err(lift_err(0))
    }

    fn sub(&mut self, a: RationalFunction, b: RationalFunction) -> Result<RationalFunction, ParseError> {
        a.sub(&b).map_err(lift_err(0))
    }

    fn mul(&mut self, a: RationalFunction, b: RationalFunction) -> Result<RationalFunction, ParseError> {
        a.mul(&b).map_err(lift_err(0))
    }

    fn div(&mut self, a: RationalFunction, b: RationalFunction, offset: usize) -> Result<RationalFunction, ParseError> {
        a.div(&b).map_err(lift_err(offset))
    }

    fn neg(&mut self, a: RationalFunction) -> Result<RationalFunction, ParseError> {
        Ok(a.neg())
    }

    fn pow(&mut self, a: RationalFunction, exp: u32, offset: usize) -> Result<RationalFunction, ParseError> {
        let mut acc = RationalFunction::one();
        for _ in 0..exp {
            acc = acc.mul(&a).map_err(lift_err(offset))?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> FieldElem {
        FieldElem::parse(s).unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(field_arith(&q("1/2"), &q("1/3"), FieldOp::Add).unwrap(), q("5/6"));
    }

    #[test]
    fn t_times_inverse_is_one() {
        let t = FieldElem::t();
        let inv = field_arith(&FieldElem::one(FieldKind::Qt), &t, FieldOp::Div).unwrap();
        assert!(field_arith(&t, &inv, FieldOp::Mul).unwrap().is_one());
    }

    #[test]
    fn gcd_cancellation_in_division() {
        let a = q("t^2-1");
        let b = q("t-1");
        assert_eq!(field_arith(&a, &b, FieldOp::Div).unwrap(), q("t+1"));
        // same thing written as a single literal
        assert_eq!(q("(t^2-1)/(t-1)"), q("t+1"));
    }

    #[test]
    fn zero_tests() {
        assert!(q("0/1").is_zero());
        let t = FieldElem::t();
        assert!(t.sub(&t).unwrap().is_zero());
        assert!(!q("2*t - 1").is_zero());
    }

    #[test]
    fn errors() {
        assert_eq!(q("1").div(&q("0")), Err(FieldError::DivisionByZero));
        assert_eq!(q("t").div(&q("t-t")), Err(FieldError::DivisionByZero));
        assert_eq!(q("1").add(&q("t")), Err(FieldError::MixedFields));
        assert!(FieldElem::parse("1/0").is_err());
        assert!(FieldElem::parse("x+1").is_err());
    }

    #[test]
    fn lifting() {
        let one = q("1");
        assert_eq!(one.lift(FieldKind::Qt).unwrap().kind(), FieldKind::Qt);
        assert!(q("t").lift(FieldKind::Q).is_err());
        assert_eq!(q("t-t+3").lift(FieldKind::Q).unwrap(), q("3"));
    }

    #[test]
    fn display_roundtrip() {
        for s in ["5/6", "-2", "(t^2-1)/(t-1)", "1/(2*t)", "t^3-1/2*t"] {
            let v = q(s);
            assert_eq!(FieldElem::parse_in(v.kind(), &v.to_string()).unwrap(), v, "{s}");
        }
    }
}

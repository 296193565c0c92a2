//! Difference polynomials over a monoid M: polynomials with rational
//! coefficients in the formally shifted variables `σ^m(X_i)`.

mod system;
mod text;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{FieldElem, FieldError, FieldKind, Rational};
use crate::monoid::{MonoidElem, MonoidError, MonoidKind};
use crate::poly::Poly;

pub use system::{
    eval_at, verify_window, DiffSystem, EquationReport, InequationReport, Verdict, VerificationReport, Witness,
    WitnessError,
};
pub use text::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("variable index {index} out of range for arity {arity}")]
    VarOutOfRange { index: usize, arity: usize },
    #[error("missing window value for variable {var} at index {index}")]
    MissingValue { var: usize, index: MonoidElem },
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `σ^shift(X_var)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftedVar {
    pub var: usize,
    pub shift: MonoidElem,
}

impl ShiftedVar {
    pub fn new(var: usize, shift: MonoidElem) -> Self {
        ShiftedVar { var, shift }
    }

    pub fn plain(kind: MonoidKind, var: usize) -> Self {
        ShiftedVar::new(var, MonoidElem::identity(kind))
    }
}

/// A product of shifted variables with positive exponents, sorted by variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(ShiftedVar, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn single(v: ShiftedVar, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, exp)])
        }
    }

    pub fn factors(&self) -> &[(ShiftedVar, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, rhs: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + rhs.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < rhs.0.len() {
            match self.0[i].0.cmp(&rhs.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(rhs.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + rhs.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&rhs.0[j..]);
        Monomial(out)
    }

    fn from_unsorted(factors: Vec<(ShiftedVar, u32)>) -> Monomial {
        let mut merged: BTreeMap<ShiftedVar, u32> = BTreeMap::new();
        for (v, e) in factors {
            *merged.entry(v).or_default() += e;
        }
        Monomial(merged.into_iter().filter(|(_, e)| *e > 0).collect())
    }
}

/// Graded: total degree first, then lexicographic on the sorted factor list.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Bound on the shifts occurring in a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftExtent {
    /// Componentwise minimum and maximum over all shifts (identity included).
    Numeric { min: Vec<i64>, max: Vec<i64> },
    /// Longest word used as a shift.
    Word { max_len: usize },
}

impl fmt::Display for ShiftExtent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftExtent::Numeric { max, .. } if max.len() == 1 => write!(f, "{}", max[0]),
            ShiftExtent::Numeric { max, .. } => {
                let parts: Vec<String> = max.iter().map(i64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            ShiftExtent::Word { max_len } => write!(f, "{max_len}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffPoly {
    kind: MonoidKind,
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl DiffPoly {
    pub fn zero(kind: MonoidKind, arity: usize) -> Self {
        DiffPoly {
            kind,
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(kind: MonoidKind, arity: usize, c: Rational) -> Self {
        let mut p = Self::zero(kind, arity);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(kind: MonoidKind, arity: usize, c: i64) -> Self {
        Self::constant(kind, arity, Rational::from_integer(c.into()))
    }

    /// The unshifted variable `X_var`.
    pub fn var(kind: MonoidKind, arity: usize, var: usize) -> Self {
        Self::shifted(kind, arity, var, MonoidElem::identity(kind))
    }

    /// `σ^shift(X_var)`; panics on an out-of-range variable or foreign shift.
    pub fn shifted(kind: MonoidKind, arity: usize, var: usize, shift: MonoidElem) -> Self {
        assert!(var < arity, "variable {var} out of range for arity {arity}");
        assert_eq!(shift.kind(), kind, "shift {shift} does not belong to {kind}");
        let mut p = Self::zero(kind, arity);
        p.add_term(Monomial::single(ShiftedVar::new(var, shift), 1), Rational::one());
        p
    }

    pub fn kind(&self) -> MonoidKind {
        self.kind
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Builds a polynomial from raw terms, validating variables and shifts.
    pub fn from_terms(
        kind: MonoidKind,
        arity: usize,
        terms: impl IntoIterator<Item = (Vec<(ShiftedVar, u32)>, Rational)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(kind, arity);
        for (factors, c) in terms {
            for (v, _) in &factors {
                if v.var >= arity {
                    return Err(PolyError::VarOutOfRange { index: v.var, arity });
                }
                if v.shift.kind() != kind {
                    return Err(PolyError::RingMismatch(format!("shift {} is not in {kind}", v.shift)));
                }
            }
            p.add_term(Monomial::from_unsorted(factors), c);
        }
        Ok(p)
    }

    fn check_same_ring(&self, rhs: &DiffPoly) -> Result<(), PolyError> {
        if self.kind != rhs.kind || self.arity != rhs.arity {
            return Err(PolyError::RingMismatch(format!(
                "{} in {} variables vs {} in {} variables",
                self.kind, self.arity, rhs.kind, rhs.arity
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, rhs: &DiffPoly) -> Result<DiffPoly, PolyError> {
        self.check_same_ring(rhs)?;
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &DiffPoly) -> Result<DiffPoly, PolyError> {
        self.checked_add(&-rhs)
    }

    pub fn checked_mul(&self, rhs: &DiffPoly) -> Result<DiffPoly, PolyError> {
        self.check_same_ring(rhs)?;
        let mut out = DiffPoly::zero(self.kind, self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> DiffPoly {
        let mut out = DiffPoly::zero(self.kind, self.arity);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        out
    }

    pub fn pow(&self, exp: u32) -> DiffPoly {
        let mut acc = DiffPoly::int(self.kind, self.arity, 1);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Applies `σ^m`: every `σ^{m₂}(X_i)` becomes `σ^{m·m₂}(X_i)`.
    pub fn apply_shift(&self, m: &MonoidElem) -> Result<DiffPoly, PolyError> {
        if m.kind() != self.kind {
            return Err(PolyError::Monoid(MonoidError::KindMismatch(m.kind(), self.kind)));
        }
        let mut out = DiffPoly::zero(self.kind, self.arity);
        for (mono, c) in &self.terms {
            let factors = mono
                .0
                .iter()
                .map(|(v, e)| Ok((ShiftedVar::new(v.var, m.op(&v.shift)?), *e)))
                .collect::<Result<Vec<_>, MonoidError>>()?;
            out.add_term(Monomial::from_unsorted(factors), c.clone());
        }
        Ok(out)
    }

    pub fn shifted_vars(&self) -> BTreeSet<ShiftedVar> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    /// Componentwise bounds on the shifts that occur (identity always counts).
    pub fn max_shift_extent(&self) -> ShiftExtent {
        let shifts: Vec<MonoidElem> = self.shifted_vars().into_iter().map(|v| v.shift).collect();
        if self.kind == MonoidKind::FreeWord2 {
            let max_len = shifts
                .iter()
                .map(|s| match s {
                    MonoidElem::Word(w) => w.len(),
                    _ => 0,
                })
                .max()
                .unwrap_or(0);
            return ShiftExtent::Word { max_len };
        }
        let rank = self.kind.rank();
        let mut min = vec![0i64; rank];
        let mut max = vec![0i64; rank];
        for s in shifts {
            let c = s.components().expect("numeric monoid");
            for k in 0..rank {
                min[k] = min[k].min(c[k]);
                max[k] = max[k].max(c[k]);
            }
        }
        ShiftExtent::Numeric { min, max }
    }

    /// Largest shift `j` of any `σ^j(X_i)` for ℕ or ℤ; 0 otherwise.
    pub fn order(&self) -> i64 {
        match self.max_shift_extent() {
            ShiftExtent::Numeric { max, .. } if max.len() == 1 => max[0],
            _ => 0,
        }
    }

    /// Replaces every shifted variable by a polynomial of the target ring.
    pub fn substitute(
        &self,
        kind: MonoidKind,
        arity: usize,
        mut image: impl FnMut(&ShiftedVar) -> DiffPoly,
    ) -> DiffPoly {
        let mut out = DiffPoly::zero(kind, arity);
        let mut cache: BTreeMap<ShiftedVar, DiffPoly> = BTreeMap::new();
        for (mono, c) in &self.terms {
            let mut term = DiffPoly::constant(kind, arity, c.clone());
            for (v, e) in &mono.0 {
                let img = cache.entry(v.clone()).or_insert_with(|| image(v));
                term = &term * &img.pow(*e);
            }
            out = &out + &term;
        }
        out
    }

    /// Interprets an ordinary polynomial, sending its variable `i` to `images[i]`.
    pub fn from_poly(kind: MonoidKind, arity: usize, p: &Poly, images: &[DiffPoly]) -> DiffPoly {
        let mut out = DiffPoly::zero(kind, arity);
        for (exps, c) in p.terms() {
            let mut term = DiffPoly::constant(kind, arity, c.clone());
            for (i, &k) in exps.iter().enumerate() {
                if k > 0 {
                    term = &term * &images[i].pow(k);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Evaluates with values supplied per shifted variable.
    pub fn eval_with(
        &self,
        field: FieldKind,
        mut value: impl FnMut(&ShiftedVar) -> Result<FieldElem, PolyError>,
    ) -> Result<FieldElem, PolyError> {
        let mut cache: BTreeMap<&ShiftedVar, FieldElem> = BTreeMap::new();
        let mut acc = FieldElem::zero(field);
        for (mono, c) in &self.terms {
            let mut term = FieldElem::from_rational(field, c.clone());
            for (v, e) in &mono.0 {
                let x = match cache.get(v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = value(v)?;
                        cache.insert(v, x.clone());
                        x
                    }
                };
                term = term.mul(&x.pow(*e)?)?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly {
            kind: self.kind,
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Ring::default_for(self.kind, self.arity).print(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(arity: usize) -> Ring {
        Ring::default_for(MonoidKind::Nat, arity)
    }

    #[test]
    fn arithmetic_examples() {
        let r = nat(1);
        let x = r.parse("X1").unwrap();
        assert!((&x * &DiffPoly::zero(MonoidKind::Nat, 1)).is_zero());
        let lhs = &(&x + &DiffPoly::int(MonoidKind::Nat, 1, 1)) * &(&x - &DiffPoly::int(MonoidKind::Nat, 1, 1));
        assert_eq!(lhs, r.parse("X1^2 - 1").unwrap());
        let sx = r.parse("s(X1)").unwrap();
        assert_eq!(&(&sx * &x) + &(&x * &sx), r.parse("2*X1*s(X1)").unwrap());
        assert_eq!(r.print(&r.parse("X1*s(X1) + s(X1)*X1").unwrap()), "2*X1*s(X1)");
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let a = DiffPoly::var(MonoidKind::Nat, 1, 0);
        let b = DiffPoly::var(MonoidKind::Int, 1, 0);
        assert!(matches!(a.checked_add(&b), Err(PolyError::RingMismatch(_))));
        let c = DiffPoly::var(MonoidKind::Nat, 2, 0);
        assert!(a.checked_mul(&c).is_err());
    }

    #[test]
    fn shift_examples() {
        let r = nat(1);
        let f = r.parse("s(X1) - X1").unwrap();
        assert_eq!(f.apply_shift(&MonoidElem::Nat(2)).unwrap(), r.parse("s^3(X1) - s^2(X1)").unwrap());
        assert_eq!(f.apply_shift(&MonoidElem::Nat(0)).unwrap(), f);
        let w = Ring::default_for(MonoidKind::FreeWord2, 1);
        let g = w.parse("s{a}(X1)").unwrap();
        let shifted = g.apply_shift(&MonoidElem::word("b").unwrap()).unwrap();
        assert_eq!(shifted, w.parse("s{ba}(X1)").unwrap());
        assert!(f.apply_shift(&MonoidElem::Int(1)).is_err());
    }

    #[test]
    fn extents() {
        let r = nat(1);
        assert_eq!(r.parse("s^2(X1) - s(X1) - X1").unwrap().max_shift_extent().to_string(), "2");
        assert_eq!(r.parse("1").unwrap().max_shift_extent().to_string(), "0");
        let r2 = Ring::default_for(MonoidKind::Nat2, 2);
        let f = r2.parse("s{(1,0)}(X2) + s{(0,1)}(X1)").unwrap();
        assert_eq!(f.max_shift_extent().to_string(), "(1,1)");
        let z = Ring::default_for(MonoidKind::Int, 1);
        let g = z.parse("s{-2}(X1) + s(X1)").unwrap();
        assert_eq!(g.max_shift_extent(), ShiftExtent::Numeric { min: vec![-2], max: vec![1] });
    }

    #[test]
    fn from_ordinary_polynomial() {
        let p = Poly::parse("x1^2 - x2").unwrap();
        let kind = MonoidKind::Nat;
        let imgs = [DiffPoly::shifted(kind, 2, 0, MonoidElem::Nat(1)), DiffPoly::var(kind, 2, 1)];
        let f = DiffPoly::from_poly(kind, 2, &p, &imgs);
        assert_eq!(f, nat(2).parse("s(X1)^2 - X2").unwrap());
    }
}

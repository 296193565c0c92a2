//! Ordinary sparse multivariate polynomials over ℚ in variables x1, x2, ….
//!
//! These describe the pieces of piecewise maps, the source polynomials of
//! Diophantine reductions and the `P_N` family. Variable `i` (0-based) is
//! written `x{i+1}`; a polynomial that only mentions the first variable is
//! written in plain `x`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::expr::{self, ExprSink, ParseError, ShiftSpec};
use crate::field::{FieldElem, FieldError, FieldKind, Rational};

/// Exponent vector with trailing zeros stripped.
pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exponents, Rational>,
}

fn trim(mut e: Exponents) -> Exponents {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    /// The variable with 0-based index `i`.
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        let mut p = Poly::zero();
        p.add_term(e, Rational::one());
        p
    }

    pub fn monomial(exps: Exponents, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(exps, c);
        p
    }

    /// `c0 + c1 x + c2 x² + …` in the first variable.
    pub fn from_univariate(coeffs: &[BigInt]) -> Self {
        let mut p = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let e = if k == 0 { vec![] } else { vec![k as u32] };
            p.add_term(e, Rational::from_integer(c.clone()));
        }
        p
    }

    fn add_term(&mut self, exps: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(trim(exps)) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.is_empty())
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(&trim(exps.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }

    /// One more than the largest variable index that occurs.
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Degree in the variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e.get(i).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficients in the first variable, lowest degree first. `None` if
    /// another variable occurs.
    pub fn univariate_coeffs(&self) -> Option<Vec<Rational>> {
        if self.nvars() > 1 {
            return None;
        }
        let deg = self.degree_in(0) as usize;
        let mut out = vec![Rational::zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (e, c) in &self.terms {
            out[e.first().copied().unwrap_or(0) as usize] = c.clone();
        }
        Some(out)
    }

    /// Substitutes `images[i]` for variable `i`.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let img = images.get(i).unwrap_or_else(|| panic!("compose: no image for variable {}", i + 1));
                    term = &term * &img.pow(k);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Renames variable `i` to `map[i]`.
    pub fn rename_vars(&self, map: &[usize]) -> Poly {
        let images: Vec<Poly> = map.iter().map(|&j| Poly::var(j)).collect();
        self.compose(&images)
    }

    /// Evaluates at a point of `kind`ⁿ; coordinates beyond those mentioned are ignored.
    pub fn eval(&self, kind: FieldKind, point: &[FieldElem]) -> Result<FieldElem, FieldError> {
        assert!(
            self.nvars() <= point.len(),
            "polynomial in {} variables evaluated at a point of dimension {}",
            self.nvars(),
            point.len()
        );
        let mut powers: Vec<Vec<FieldElem>> = point.iter().map(|x| vec![FieldElem::one(kind), x.lift(kind).unwrap_or_else(|_| x.clone())]).collect();
        let mut acc = FieldElem::zero(kind);
        for (e, c) in &self.terms {
            let mut term = FieldElem::from_rational(kind, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= k as usize {
                    let next = table.last().unwrap().mul(&table[1])?;
                    table.push(next);
                }
                term = term.mul(&table[k as usize])?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    pub fn eval_rational(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term *= &point[i];
                }
            }
            acc += term;
        }
        acc
    }

    /// Parses text in variables `x`, `x1`, `x2`, … (also `X…`, `t…`).
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        expr::parse(text, &mut PolySink)
    }

    /// Writes the polynomial using `names[i]` for variable `i`.
    pub fn display_with(&self, names: &[String]) -> String {
        let mut out = String::new();
        // descending: total degree first, then exponent vector
        let mut keys: Vec<&Exponents> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (idx, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            if c.is_negative() {
                out.push('-');
            } else if idx > 0 {
                out.push('+');
            }
            let mag = c.abs();
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| match k {
                    1 => names[i].clone(),
                    _ => format!("{}^{k}", names[i]),
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

    pub fn default_names(nvars: usize) -> Vec<String> {
        if nvars <= 1 {
            vec!["x".to_string()]
        } else {
            (1..=nvars).map(|i| format!("x{i}")).collect()
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Self::default_names(self.nvars())))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    // exponents add when monomials multiply
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let n = ea.len().max(eb.len());
                let e: Exponents = (0..n)
                    .map(|i| ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

/// Parses an ordinary variable name into its 0-based index.
pub fn parse_var_name(name: &str) -> Option<usize> {
    let rest = name.strip_prefix(['x', 'X', 't'])?;
    if rest.is_empty() {
        return Some(0);
    }
    if rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse::<usize>().ok().filter(|&i| i >= 1).map(|i| i - 1)
}

struct PolySink;

impl ExprSink for PolySink {
    type Value = Poly;

    fn integer(&mut self, n: BigInt) -> Poly {
        Poly::constant(Rational::from_integer(n))
    }

    fn ident(&mut self, name: &str, offset: usize) -> Result<Poly, ParseError> {
        parse_var_name(name)
            .filter(|&i| i < 4096)
            .map(Poly::var)
            .ok_or_else(|| ParseError::new(offset, format!("unknown variable '{name}' (expected x, x1, x2, …)")))
    }

    fn shifted(&mut self, _: ShiftSpec<'_>, _: &str, offset: usize) -> Result<Poly, ParseError> {
        Err(ParseError::new(offset, "shifts are not allowed in an ordinary polynomial"))
    }

    fn add(&mut self, a: Poly, b: Poly) -> Result<Poly, ParseError> {
        Ok(&a + &b)
    }

    fn sub(&mut self, a: Poly, b: Poly) -> Result<Poly, ParseError> {
        Ok(&a - &b)
    }

    fn mul(&mut self, a: Poly, b: Poly) -> Result<Poly, ParseError> {
        Ok(&a * &b)
    }

    fn div(&mut self, a: Poly, b: Poly, offset: usize) -> Result<Poly, ParseError> {
        if !b.is_constant() {
            return Err(ParseError::new(offset, "division by a non-constant polynomial"));
        }
        let c = b.constant_term();
        if c.is_zero() {
            return Err(ParseError::new(offset, "division by zero"));
        }
        Ok(a.scale(&(Rational::one() / c)))
    }

    fn neg(&mut self, a: Poly) -> Result<Poly, ParseError> {
        Ok(-&a)
    }

    fn pow(&mut self, a: Poly, exp: u32, _: usize) -> Result<Poly, ParseError> {
        Ok(a.pow(exp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn printing() {
        assert_eq!(p("1 - 2*x").to_string(), "-2*x+1");
        assert_eq!(p("x1*x2 - x2 + 1/2").to_string(), "x1*x2-x2+1/2");
        assert_eq!(p("x - x").to_string(), "0");
        assert_eq!(p("(x+1)^2").to_string(), "x^2+2*x+1");
    }

    #[test]
    fn variable_names() {
        assert_eq!(p("t1 - 2"), p("x1 - 2"));
        assert_eq!(p("x"), p("x1"));
        assert!(Poly::parse("y + 1").is_err());
        assert!(Poly::parse("x0").is_err());
        assert!(Poly::parse("x / x").is_err());
    }

    #[test]
    fn composition() {
        // (x1 - x2) with x1 -> x2 + 1, x2 -> x1
        let f = p("x1 - x2");
        let g = f.compose(&[p("x2 + 1"), p("x1")]);
        assert_eq!(g, p("x2 - x1 + 1"));
    }

    #[test]
    fn evaluation() {
        let f = p("x1^2 - 3*x2");
        let pt = [FieldElem::parse("2").unwrap(), FieldElem::parse("1/3").unwrap()];
        assert_eq!(f.eval(FieldKind::Q, &pt).unwrap(), FieldElem::parse("3").unwrap());
        let g = p("x^2 - 1");
        let at_t = g.eval(FieldKind::Qt, &[FieldElem::t()]).unwrap();
        assert_eq!(at_t, FieldElem::parse("t^2-1").unwrap());
    }

    #[test]
    fn univariate_roundtrip() {
        let c: Vec<BigInt> = [1, -2].iter().map(|&v| BigInt::from(v)).collect();
        let f = Poly::from_univariate(&c);
        assert_eq!(f.to_string(), "-2*x+1");
        assert_eq!(f.univariate_coeffs().unwrap().len(), 2);
    }
}

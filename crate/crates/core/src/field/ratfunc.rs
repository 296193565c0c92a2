//! Elements of ℚ(t), kept as reduced fractions with a monic denominator.

use std::fmt;

use num_traits::{One, Zero};

use super::unipoly::UniPoly;
use super::{degree_cap, FieldError, Rational};

/// `numerator / denominator` with `gcd = 1` and a monic denominator.
///
/// Two rational functions are equal iff their representations are identical,
/// so zero testing is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: UniPoly,
    den: UniPoly,
}

impl RationalFunction {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Self::reduce(num, den)
    }

    pub fn from_poly(p: UniPoly) -> Result<Self, FieldError> {
        check_cap(p.degree())?;
        Ok(RationalFunction {
            num: p,
            den: UniPoly::one(),
        })
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunction {
            num: UniPoly::constant(c),
            den: UniPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn t() -> Self {
        RationalFunction {
            num: UniPoly::t(),
            den: UniPoly::one(),
        }
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value as a rational number when it does not depend on `t`.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.num.is_constant() && self.den.is_one()).then(|| self.num.coeff(0))
    }

    fn reduce(num: UniPoly, den: UniPoly) -> Result<Self, FieldError> {
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = UniPoly::gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        };
        let lc = den.leading_coeff();
        let (num, den) = if lc.is_one() {
            (num, den)
        } else {
            let inv = Rational::one() / lc;
            (num.scale(&inv), den.scale(&inv))
        };
        check_cap(num.degree().max(den.degree()))?;
        Ok(RationalFunction { num, den })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, FieldError> {
        if self.den == rhs.den {
            return Self::reduce(&self.num + &rhs.num, self.den.clone());
        }
        Self::reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, FieldError> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero());
        }
        if self.den.is_one() && rhs.den.is_one() {
            let num = &self.num * &rhs.num;
            check_cap(num.degree())?;
            return Ok(RationalFunction {
                num,
                den: UniPoly::one(),
            });
        }
        Self::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Self::reduce(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.mul(&rhs.inv()?)
    }

    /// Substitutes a rational value for `t`; `None` at a pole.
    pub fn eval(&self, t: &Rational) -> Option<Rational> {
        let d = self.den.eval(t);
        (!d.is_zero()).then(|| self.num.eval(t) / d)
    }
}

fn check_cap(degree: usize) -> Result<(), FieldError> {
    let cap = degree_cap();
    if degree > cap {
        Err(FieldError::DegreeCapExceeded { degree, cap })
    } else {
        Ok(())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

//! The integer polynomials `P_N` indexed by base-3 digit strings.
//!
//! Reading the digits of `N` from the least significant one, digit 0 multiplies
//! by `x`, digit 1 by `-x` and digit 2 adds 1, starting from `P_∅ = 1`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PnError {
    #[error("the zero polynomial has no index")]
    Zero,
    #[error("{0} is not a univariate polynomial with integer coefficients")]
    NotIntegerUnivariate(String),
}

/// Base-3 digits of `n`, least significant first; empty for 0.
pub fn pn_digits(n: &BigUint) -> Vec<u8> {
    let three = BigUint::from(3u8);
    let mut n = n.clone();
    let mut out = Vec::new();
    while !n.is_zero() {
        let (q, r) = n.div_rem(&three);
        out.push(r.to_u32_digits().first().copied().unwrap_or(0) as u8);
        n = q;
    }
    out
}

fn apply_digit(coeffs: &mut Vec<BigInt>, digit: u8) {
    match digit {
        0 => coeffs.insert(0, BigInt::zero()),
        1 => {
            for c in coeffs.iter_mut() {
                *c = -&*c;
            }
            coeffs.insert(0, BigInt::zero());
        }
        2 => coeffs[0] += 1,
        _ => unreachable!("base-3 digit"),
    }
}

pub fn pn_polynomial(n: &BigUint) -> Poly {
    let mut coeffs = vec![BigInt::one()];
    for d in pn_digits(n) {
        apply_digit(&mut coeffs, d);
    }
    Poly::from_univariate(&coeffs)
}

/// Some `N` and sign `±1` with `P_N = sign · q`.
///
/// The operations are peeled off `±q` from the outside in; a leading digit 0
/// is turned into 1 with the sign flipped, since `-x·P = -(x·P)`.
pub fn pn_index_of(q: &Poly) -> Result<(BigUint, i8), PnError> {
    let coeffs = q
        .univariate_coeffs()
        .filter(|_| q.has_integer_coeffs())
        .ok_or_else(|| PnError::NotIntegerUnivariate(q.to_string()))?;
    let mut c: Vec<BigInt> = coeffs.iter().map(|r| r.to_integer()).collect();
    if c.is_empty() {
        return Err(PnError::Zero);
    }
    let mut sign: i8 = 1;
    if c[0].is_negative() {
        c.iter_mut().for_each(|v| *v = -&*v);
        sign = -1;
    }
    // outermost operation first
    let mut digits = Vec::new();
    loop {
        if c.len() == 1 && c[0].is_one() {
            break;
        }
        if c[0].is_positive() {
            c[0] -= 1;
            digits.push(2u8);
            continue;
        }
        // constant term is 0: q = x·r, keep r with its lowest nonzero coefficient positive
        c.remove(0);
        let lowest = c.iter().find(|v| !v.is_zero()).expect("nonzero polynomial");
        if lowest.is_positive() {
            digits.push(0);
        } else {
            c.iter_mut().for_each(|v| *v = -&*v);
            digits.push(1);
        }
    }
    if digits.first() == Some(&0) {
        digits[0] = 1;
        sign = -sign;
    }
    let n = digits
        .iter()
        .fold(BigUint::zero(), |acc, &d| acc * 3u8 + BigUint::from(d));
    Ok((n, sign))
}

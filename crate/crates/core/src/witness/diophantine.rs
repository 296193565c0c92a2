//! Witnesses for the infinitely-many-zeros gadget and the Diophantine system.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Zero;

use super::{line_index, BuildError};
use crate::diffpoly::Witness;
use crate::field::{FieldElem, FieldKind, Rational};
use crate::monoid::{MonoidKind, WindowSpec};
use crate::poly::Poly;
use crate::reductions::gadget_var;

/// The lexicographically smallest `(a, b, c, d)` with `a ≥ b ≥ c ≥ d ≥ 0` and
/// `a² + b² + c² + d² = n`.
pub fn four_square(n: u64) -> (u64, u64, u64, u64) {
    let ceil_sqrt = |m: u64| {
        let r = m.sqrt();
        if r * r == m {
            r
        } else {
            r + 1
        }
    };
    for a in ceil_sqrt(n.div_ceil(4))..=n.sqrt() {
        let ra = n - a * a;
        for b in ceil_sqrt(ra.div_ceil(3))..=a.min(ra.sqrt()) {
            let rb = ra - b * b;
            for c in ceil_sqrt(rb.div_ceil(2))..=b.min(rb.sqrt()) {
                let rc = rb - c * c;
                let d = rc.sqrt();
                if d * d == rc && d <= c {
                    return (a, b, c, d);
                }
            }
        }
    }
    unreachable!("every natural number is a sum of four squares")
}

fn q(v: i64) -> FieldElem {
    FieldElem::from_rational(FieldKind::Q, Rational::from_integer(BigInt::from(v)))
}

/// Values of `Y₁, …, Y₆` at each index of a contiguous run `lo, lo+1, …`.
///
/// `Y₁` at the `m`-th zero is the gap to the next zero and `Y₂` counts down to
/// the next zero; after the last zero in the run the next one is placed at
/// the last gap's distance, or just past the run if that is closer.
fn inf_zeros_columns(lo: i64, x: &[FieldElem], what: &str) -> Result<Vec<[i64; 6]>, BuildError> {
    let zeros: Vec<i64> = x
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_zero())
        .map(|(k, _)| lo + k as i64)
        .collect();
    if zeros.len() < 2 {
        return Err(BuildError::InsufficientZeros {
            what: what.into(),
            found: zeros.len(),
        });
    }
    let hi = lo + x.len() as i64 - 1;
    let last = zeros[zeros.len() - 1];
    let beyond = (last + (last - zeros[zeros.len() - 2])).max(hi + 1);
    let next_zero = |j: i64| -> i64 {
        // smallest zero ≥ j
        match zeros.binary_search(&j) {
            Ok(k) | Err(k) => zeros.get(k).copied().unwrap_or(beyond),
        }
    };
    Ok((lo..=hi)
        .map(|j| {
            let y1 = if zeros.binary_search(&j).is_ok() { next_zero(j + 1) - j } else { 0 };
            let y2 = next_zero(j) - j;
            let (a, b, c, d) = four_square(y2 as u64);
            [y1, y2, a as i64, b as i64, c as i64, d as i64]
        })
        .collect())
}

fn line_window(window: &WindowSpec) -> Result<(i64, i64), BuildError> {
    match *window {
        WindowSpec::Nat { lo, hi } => Ok((lo as i64, hi as i64)),
        WindowSpec::Int { lo, hi } => Ok((lo, hi)),
        _ => Err(BuildError::Invalid(format!("expected an nat or int window, got {window}"))),
    }
}

/// Witness for `{X·Y₁, Y₂ − Y₃² − … − Y₆², σ(Y₂) − Y₂ + 1 − Y₁}` in the
/// variables `(X, Y₁, …, Y₆)`, given `X` on every index of the window.
pub fn build_inf_zeros_witness(x: &[FieldElem], window: &WindowSpec) -> Result<Witness, BuildError> {
    let (lo, hi) = line_window(window)?;
    if x.len() as i64 != hi - lo + 1 {
        return Err(BuildError::Invalid(format!("{} values for the window {window}", x.len())));
    }
    let cols = inf_zeros_columns(lo, x, "X")?;
    let field = x.first().map_or(FieldKind::Q, FieldElem::kind);
    Ok(Witness::from_fn(window.clone(), field, 7, |var, m| {
        let k = (line_index(m).unwrap() - lo) as usize;
        match var {
            0 => x[k].clone(),
            _ => FieldElem::from_rational(field, Rational::from_integer(cols[k][var - 1].into())),
        }
    })?)
}

/// Triangle wave with steps of ±1 that equals `a` at `i = h` and returns to 0
/// once per period `2·max(|a|, 1)`. For `a = 0` it alternates between 0 and 1.
pub fn zigzag(a: i64, h: i64, i: i64) -> i64 {
    let amp = a.abs().max(1);
    let phase = if a == 0 { h } else { h - amp };
    let r = (i - phase).rem_euclid(2 * amp);
    let sign = if a < 0 { -1 } else { 1 };
    sign * r.min(2 * amp - r)
}

/// Witness for the system compiled from `p` at the integer root `a`: each
/// `X_k` zig-zags between 0 and `a_k`, all of them reaching `a` together once
/// every `lcm` of the periods, `X_0 = P(X_1, …, X_n)`, and the gadget
/// variables follow the zero pattern of each `X_m`.
///
/// On ℤ the zig-zags run on through negative indices.
pub fn build_diophantine_witness(p: &Poly, a: &[i64], window: &WindowSpec) -> Result<Witness, BuildError> {
    let n = p.nvars();
    if a.len() != n {
        return Err(BuildError::Invalid(format!("{p} has {n} unknowns but {} values were given", a.len())));
    }
    let at: Vec<Rational> = a.iter().map(|&v| Rational::from_integer(v.into())).collect();
    let value = p.eval_rational(&at);
    if !value.is_zero() {
        return Err(BuildError::NotASolution(format!("P({a:?}) = {value}")));
    }
    let (lo, hi) = line_window(window)?;
    let h = a.iter().filter(|v| **v != 0).map(|v| v.abs()).max().unwrap_or(0);

    let mut columns: Vec<Vec<FieldElem>> = vec![Vec::new(); n + 1];
    for i in lo..=hi {
        let xs: Vec<i64> = a.iter().map(|&ak| zigzag(ak, h, i)).collect();
        let pt: Vec<Rational> = xs.iter().map(|&v| Rational::from_integer(v.into())).collect();
        columns[0].push(FieldElem::from_rational(FieldKind::Q, p.eval_rational(&pt)));
        for (k, v) in xs.into_iter().enumerate() {
            columns[k + 1].push(q(v));
        }
    }
    let gadgets = columns
        .iter()
        .enumerate()
        .map(|(m, col)| inf_zeros_columns(lo, col, &format!("X{m}")))
        .collect::<Result<Vec<_>, _>>()?;

    let arity = n + 1 + 6 * (n + 1);
    let mut values = BTreeMap::new();
    for (k, m) in window.enumerate().into_iter().enumerate() {
        for (var, col) in columns.iter().enumerate() {
            values.insert((var, m.clone()), col[k].clone());
        }
        for (mm, g) in gadgets.iter().enumerate() {
            for j in 1..=6 {
                values.insert((gadget_var(n, mm, j), m.clone()), q(g[k][j - 1]));
            }
        }
    }
    debug_assert!(matches!(window.kind(), MonoidKind::Nat | MonoidKind::Int));
    Ok(Witness::new(window.clone(), FieldKind::Q, arity, values)?)
}

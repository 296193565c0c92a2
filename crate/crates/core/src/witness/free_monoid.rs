//! Witnesses for order-normalized and free-monoid systems.

use std::collections::BTreeMap;

use super::{line_index, BuildError};
use crate::diffpoly::{eval_at, DiffPoly, Witness};
use crate::monoid::{MonoidElem, MonoidKind, WindowSpec};
use crate::reductions::{CompiledSystem, NormalizedSystem};

/// Moves a witness of the original ℕ-system to the normalized one:
/// `V_{i,j}` at `ℓ` is `X_i` at `ℓ + j`. The window loses its last `max L_i`
/// indices.
pub fn transport_normalized_witness(ns: &NormalizedSystem, w: &Witness) -> Result<Witness, BuildError> {
    let WindowSpec::Nat { lo, hi } = *w.window() else {
        return Err(BuildError::Invalid(format!("expected an nat window, got {}", w.window())));
    };
    if w.arity() != ns.original_arity() {
        return Err(BuildError::Invalid(format!(
            "witness has {} variables, the original system {}",
            w.arity(),
            ns.original_arity()
        )));
    }
    let reach = ns.levels.iter().copied().max().unwrap_or(0) as u64;
    if hi < lo + reach {
        return Err(BuildError::Invalid(format!("window {} is shorter than the chain length {reach}", w.window())));
    }
    let window = WindowSpec::Nat { lo, hi: hi - reach };
    let mut values = BTreeMap::new();
    for l in lo..=hi - reach {
        for (i, &level) in ns.levels.iter().enumerate() {
            for j in 0..=level {
                let v = w.get(i, &MonoidElem::Nat(l + j as u64)).expect("complete witness");
                values.insert((ns.chain_var(i, j), MonoidElem::Nat(l)), v.clone());
            }
        }
    }
    Ok(Witness::new(window, w.field(), ns.ring.arity(), values)?)
}

/// `y_m := x_{s + A(m)}` and `z_m := 1/g(x_s)`, where `A(m)` is the number of
/// trailing `a`s of `m` and `s` the first index of the ℕ-witness `x` at which
/// the order-0 polynomial `g` is nonzero.
pub fn build_free_monoid_witness(
    compiled: &CompiledSystem,
    x: &Witness,
    g: &DiffPoly,
    max_len: usize,
) -> Result<Witness, BuildError> {
    if compiled.system.kind() != MonoidKind::FreeWord2 {
        return Err(BuildError::Invalid(format!("system is over {}, not freeword2", compiled.system.kind())));
    }
    let n = compiled.system.arity() - 1;
    if x.arity() != n || x.window().kind() != MonoidKind::Nat || g.kind() != MonoidKind::Nat {
        return Err(BuildError::Invalid(format!(
            "expected an nat witness in {n} variables, got {} over {}",
            x.arity(),
            x.window().kind()
        )));
    }
    let indices = x.window().enumerate();
    let mut found = None;
    for m in &indices {
        let c = eval_at(g, x, m)?;
        if !c.is_zero() {
            found = Some((line_index(m).unwrap() as u64, c));
            break;
        }
    }
    let (s, c) = found.ok_or_else(|| BuildError::NotASolution(format!("g vanishes on all of {}", x.window())))?;
    let last = s + max_len as u64;
    if !x.window().contains(&MonoidElem::Nat(last)) {
        return Err(BuildError::TooShort {
            needed: last as usize,
            have: indices.len().saturating_sub(1),
        });
    }
    let z = c.inv()?;
    let window = WindowSpec::FreeWord2 { max_len };
    Ok(Witness::from_fn(window, x.field(), n + 1, |var, m| {
        if var == n {
            return z.clone();
        }
        let at = MonoidElem::Nat(s + m.a_power_suffix() as u64);
        x.get(var, &at).expect("index checked above").clone()
    })?)
}

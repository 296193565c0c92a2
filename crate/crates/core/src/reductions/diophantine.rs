//! Integer polynomial equations into difference systems.

use serde_json::json;

use super::{check_fresh, CompiledSystem, Reduction, ReductionError, SourceDescriptor};
use crate::diffpoly::{DiffPoly, DiffSystem, Ring};
use crate::monoid::MonoidKind;
use crate::poly::Poly;

/// `{X·Y₁, Y₂ − Y₃² − Y₄² − Y₅² − Y₆², σ(Y₂) − Y₂ + 1 − Y₁}`: its solutions are
/// exactly the `X` with infinitely many zeros on ℕ.
pub fn inf_zeros_gadget(
    ring: &Ring,
    x_var: usize,
    fresh_y: [usize; 6],
) -> Result<Vec<DiffPoly>, ReductionError> {
    check_fresh(std::iter::once(x_var).chain(fresh_y), ring.arity())?;
    let y = |k: usize| ring.var(fresh_y[k - 1]);
    let squares = (3..=6).fold(ring.zero(), |acc, k| &acc + &y(k).pow(2));
    Ok(vec![
        &ring.var(x_var) * &y(1),
        &y(2) - &squares,
        &(&(&ring.sigma(fresh_y[1]) - &y(2)) + &ring.int(1)) - &y(1),
    ])
}

/// Index of `Y_{m,k}` (`k` in `1..=6`) for `n` unknowns.
pub fn gadget_var(n: usize, m: usize, k: usize) -> usize {
    n + 1 + 6 * m + (k - 1)
}

/// `F_P = G_0 ∪ … ∪ G_n ∪ {X_0 − P(X_1, …, X_n), (σ(X_k) − X_k)² − 1}`.
///
/// Variables are `X0, …, Xn` followed by the gadget blocks `Y_{m,1..6}`.
pub fn compile_diophantine(p: &Poly, kind: MonoidKind) -> Result<CompiledSystem, ReductionError> {
    if !matches!(kind, MonoidKind::Nat | MonoidKind::Int) {
        return Err(ReductionError::Invalid(format!("Diophantine systems compile to nat or int, not {kind}")));
    }
    if !p.has_integer_coeffs() {
        return Err(ReductionError::Invalid(format!("{p} must have integer coefficients")));
    }
    let n = p.nvars();
    let arity = n + 1 + 6 * (n + 1);
    let mut names: Vec<String> = (0..=n).map(|m| format!("X{m}")).collect();
    let mut legend = names.clone();
    for m in 0..=n {
        for k in 1..=6 {
            names.push(format!("Y{m}_{k}"));
            legend.push(format!("Y_{{{m},{k}}}"));
        }
    }
    let ring = Ring::new(kind, names).map_err(ReductionError::Invalid)?;
    debug_assert_eq!(ring.arity(), arity);

    let mut eqs = Vec::new();
    for m in 0..=n {
        let ys = std::array::from_fn(|k| gadget_var(n, m, k + 1));
        eqs.extend(inf_zeros_gadget(&ring, m, ys)?);
    }
    let xs: Vec<DiffPoly> = (1..=n).map(|k| ring.var(k)).collect();
    eqs.push(&ring.var(0) - &DiffPoly::from_poly(kind, arity, p, &xs));
    for k in 1..=n {
        eqs.push(&(&ring.sigma(k) - &ring.var(k)).pow(2) - &ring.int(1));
    }
    let system = DiffSystem::new(ring, eqs, None)?;
    let source = SourceDescriptor {
        reduction: Reduction::Diophantine,
        inputs: json!({ "P": p.display_with(&Poly::default_names(n.max(2))), "monoid": kind }),
    };
    Ok(CompiledSystem::new(system, legend, source))
}

//! Systems over ℕ into systems over the free monoid on `{a, b}`.

use serde_json::json;

use super::{CompiledSystem, Reduction, ReductionError, SourceDescriptor};
use crate::diffpoly::{DiffPoly, DiffSystem, Ring, ShiftedVar};
use crate::monoid::{MonoidElem, MonoidKind};

/// Output of [`normalize_order`]: equations of order at most 1 and an
/// inequation of order 0 in the original variables plus chain variables
/// `V_{i,j}` standing for `σ^j(X_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedSystem {
    pub ring: Ring,
    pub equations: Vec<DiffPoly>,
    pub g: DiffPoly,
    pub legend: Vec<String>,
    /// Number of chain variables introduced for each original variable.
    pub levels: Vec<usize>,
}

impl NormalizedSystem {
    pub fn original_arity(&self) -> usize {
        self.levels.len()
    }

    /// Index of `V_{i,j}` (`j ≥ 1`), or of `X_i` itself for `j = 0`.
    pub fn chain_var(&self, i: usize, j: usize) -> usize {
        if j == 0 {
            return i;
        }
        assert!(j <= self.levels[i], "V_{{{i},{j}}} does not exist");
        self.original_arity() + self.levels[..i].iter().sum::<usize>() + (j - 1)
    }
}

fn nat_order_of(f: &DiffPoly, var: usize) -> Result<usize, ReductionError> {
    let mut best = 0;
    for v in f.shifted_vars().into_iter().filter(|v| v.var == var) {
        match v.shift {
            MonoidElem::Nat(j) => best = best.max(j as usize),
            other => return Err(ReductionError::Invalid(format!("shift {other} is not in nat"))),
        }
    }
    Ok(best)
}

/// Rewrites `F, g` over ℕ so that `F ⊆ k[X, σ(X)]` and `g ∈ k[X]`.
///
/// With `L_i = max(ord_F(X_i) − 1, ord_g(X_i), 0)`, each `σ^j(X_i)` with
/// `1 ≤ j ≤ L_i` becomes `V_{i,j}` and `σ^{L_i+1}(X_i)` becomes `σ(V_{i,L_i})`;
/// the chain equations `V_{i,1} − σ(X_i)`, `V_{i,j} − σ(V_{i,j−1})` follow the
/// rewritten `F`.
pub fn normalize_order(ring: &Ring, f: &[DiffPoly], g: &DiffPoly) -> Result<NormalizedSystem, ReductionError> {
    if ring.kind != MonoidKind::Nat {
        return Err(ReductionError::Invalid(format!("order normalization needs nat, not {}", ring.kind)));
    }
    let n = ring.arity();
    let mut levels = Vec::with_capacity(n);
    for i in 0..n {
        let df = f.iter().map(|p| nat_order_of(p, i)).try_fold(0, |a, b| b.map(|b| a.max(b)))?;
        let eg = nat_order_of(g, i)?;
        levels.push(df.saturating_sub(1).max(eg));
    }
    let mut names = ring.vars.clone();
    let mut legend = ring.vars.clone();
    for (i, &l) in levels.iter().enumerate() {
        for j in 1..=l {
            names.push(format!("V{}_{j}", i + 1));
            legend.push(format!("V_{{{},{j}}}", i + 1));
        }
    }
    let arity = names.len();
    let new_ring = Ring::new(MonoidKind::Nat, names).map_err(ReductionError::Invalid)?;
    let out = NormalizedSystem {
        ring: new_ring.clone(),
        equations: Vec::new(),
        g: new_ring.zero(),
        legend,
        levels,
    };
    let image = |v: &ShiftedVar| -> DiffPoly {
        let j = match v.shift {
            MonoidElem::Nat(j) => j as usize,
            _ => unreachable!("shifts checked above"),
        };
        let l = out.levels[v.var];
        if j <= l {
            new_ring.var(out.chain_var(v.var, j))
        } else {
            debug_assert_eq!(j, l + 1);
            new_ring.sigma(out.chain_var(v.var, l))
        }
    };
    let mut equations: Vec<DiffPoly> = f.iter().map(|p| p.substitute(MonoidKind::Nat, arity, image)).collect();
    for (i, &l) in out.levels.iter().enumerate() {
        for j in 1..=l {
            equations.push(&new_ring.var(out.chain_var(i, j)) - &new_ring.sigma(out.chain_var(i, j - 1)));
        }
    }
    let g = g.substitute(MonoidKind::Nat, arity, image);
    Ok(NormalizedSystem { equations, g, ..out })
}

/// `{f̃_1, …, f̃_ℓ, Z·σ^b(g̃) − 1}` over `{a, b}*`, where `~` replaces `σ` by
/// `σ^a` and `X_i` by `Y_i`; `Z` is the last variable.
pub fn compile_free_monoid(ring: &Ring, f: &[DiffPoly], g: &DiffPoly) -> Result<CompiledSystem, ReductionError> {
    if ring.kind != MonoidKind::Nat {
        return Err(ReductionError::Invalid(format!("free-monoid compilation starts from nat, not {}", ring.kind)));
    }
    let n = ring.arity();
    for (k, p) in f.iter().enumerate() {
        let o = (0..n).map(|i| nat_order_of(p, i)).try_fold(0, |a, b| b.map(|b| a.max(b)))?;
        if o > 1 {
            return Err(ReductionError::Order(format!(
                "equation {k} has order {o}; run normalize_order first"
            )));
        }
    }
    let og = (0..n).map(|i| nat_order_of(g, i)).try_fold(0, |a, b| b.map(|b| a.max(b)))?;
    if og > 0 {
        return Err(ReductionError::Order(format!("g has order {og}; run normalize_order first")));
    }
    let kind = MonoidKind::FreeWord2;
    let arity = n + 1;
    let mut names: Vec<String> = (1..=n).map(|i| format!("Y{i}")).collect();
    names.push("Z".into());
    let mut legend: Vec<String> = (1..=n).map(|i| format!("Y_{i}")).collect();
    legend.push("Z".into());
    let target = Ring::new(kind, names).map_err(ReductionError::Invalid)?;
    let a = MonoidElem::word("a").expect("valid word");
    let b = MonoidElem::word("b").expect("valid word");
    let image = |v: &ShiftedVar| match v.shift {
        MonoidElem::Nat(0) => target.var(v.var),
        _ => target.shifted(v.var, a.clone()),
    };
    let mut eqs: Vec<DiffPoly> = f.iter().map(|p| p.substitute(kind, arity, image)).collect();
    let g_tilde = g.substitute(kind, arity, image);
    eqs.push(&(&target.var(n) * &g_tilde.apply_shift(&b)?) - &target.int(1));
    let system = DiffSystem::new(target, eqs, None)?;
    let source = SourceDescriptor {
        reduction: Reduction::FreeMonoid,
        inputs: json!({
            "vars": ring.vars,
            "equations": f.iter().map(|p| ring.print(p)).collect::<Vec<_>>(),
            "g": ring.print(g),
        }),
    };
    Ok(CompiledSystem::new(system, legend, source))
}

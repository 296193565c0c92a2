//! Compilers from source problems into difference systems.
//!
//! Every compiler numbers its variables canonically and records a legend of
//! role names together with a descriptor of the inputs it was given.

mod diophantine;
mod domino;
mod dynamics;
mod free_monoid;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::diffpoly::{DiffSystem, PolyError};

pub use diophantine::{compile_diophantine, gadget_var, inf_zeros_gadget};
pub use domino::{compile_domino, Domino, DominoSet};
pub use dynamics::{compile_dynamics, indicator_system, DynamicsLayout, PieceVars};
pub use free_monoid::{compile_free_monoid, normalize_order, NormalizedSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("variable index {0} is used twice")]
    Collision(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("order precondition violated: {0}")]
    Order(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    Dynamics,
    Diophantine,
    Domino,
    FreeMonoid,
    NormalizeOrder,
}

impl std::fmt::Display for Reduction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Reduction::Dynamics => "dynamics",
            Reduction::Diophantine => "diophantine",
            Reduction::Domino => "domino",
            Reduction::FreeMonoid => "free-monoid",
            Reduction::NormalizeOrder => "normalize-order",
        };
        f.write_str(s)
    }
}

/// Which compiler produced a system, and from what.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceDescriptor {
    pub reduction: Reduction,
    pub inputs: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledSystem {
    pub system: DiffSystem,
    /// Role name of every variable, indexed like the ring.
    pub legend: Vec<String>,
    pub source: SourceDescriptor,
}

impl CompiledSystem {
    pub fn new(system: DiffSystem, legend: Vec<String>, source: SourceDescriptor) -> Self {
        assert_eq!(legend.len(), system.arity(), "legend must name every variable");
        CompiledSystem { system, legend, source }
    }

    /// The system JSON extended with `"legend"` and `"source"`.
    pub fn to_json(&self) -> Value {
        let mut v = self.system.to_json();
        let obj = v.as_object_mut().expect("system JSON is an object");
        obj.insert("legend".into(), json!(self.legend));
        obj.insert("source".into(), serde_json::to_value(&self.source).expect("serializable"));
        v
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let system = DiffSystem::from_json(v)?;
        let legend: Vec<String> = match v.get("legend") {
            Some(l) => serde_json::from_value(l.clone()).map_err(|e| format!("bad \"legend\": {e}"))?,
            None => return Err("compiled system has no \"legend\"".into()),
        };
        if legend.len() != system.arity() {
            return Err(format!(
                "legend names {} variables, system has {}",
                legend.len(),
                system.arity()
            ));
        }
        let source = serde_json::from_value(v.get("source").cloned().ok_or("compiled system has no \"source\"")?)
            .map_err(|e| format!("bad \"source\": {e}"))?;
        Ok(CompiledSystem { system, legend, source })
    }

    /// One `index  name  role` line per variable.
    pub fn explain(&self) -> String {
        let mut out = format!("reduction: {}\n", self.source.reduction);
        for (i, (name, role)) in self.system.ring.vars.iter().zip(&self.legend).enumerate() {
            out.push_str(&format!("{i:>4}  {name:<10} {role}\n"));
        }
        out
    }
}

pub(crate) fn check_fresh(used: impl IntoIterator<Item = usize>, arity: usize) -> Result<(), ReductionError> {
    let mut seen = BTreeSet::new();
    for i in used {
        if i >= arity {
            return Err(ReductionError::Poly(PolyError::VarOutOfRange { index: i, arity }));
        }
        if !seen.insert(i) {
            return Err(ReductionError::Collision(i));
        }
    }
    Ok(())
}

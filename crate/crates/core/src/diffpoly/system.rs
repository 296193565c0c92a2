//! Systems of difference equations, finite witness windows and the window verifier.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use super::{DiffPoly, PolyError, Ring};
use crate::field::{FieldElem, FieldKind};
use crate::monoid::{MonoidElem, MonoidKind, WindowSpec};

/// Equations `F = 0` together with an optional inequation `g ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffSystem {
    pub ring: Ring,
    pub equations: Vec<DiffPoly>,
    pub inequation: Option<DiffPoly>,
}

impl DiffSystem {
    pub fn new(ring: Ring, equations: Vec<DiffPoly>, inequation: Option<DiffPoly>) -> Result<Self, PolyError> {
        for f in equations.iter().chain(inequation.iter()) {
            if f.kind() != ring.kind || f.arity() != ring.arity() {
                return Err(PolyError::RingMismatch(format!(
                    "member over {} in {} variables, system over {} in {}",
                    f.kind(),
                    f.arity(),
                    ring.kind,
                    ring.arity()
                )));
            }
        }
        Ok(DiffSystem {
            ring,
            equations,
            inequation,
        })
    }

    pub fn kind(&self) -> MonoidKind {
        self.ring.kind
    }

    pub fn arity(&self) -> usize {
        self.ring.arity()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.ring.kind,
            "arity": self.arity(),
            "vars": self.ring.vars,
            "equations": self.equations.iter().map(|f| self.ring.print(f)).collect::<Vec<_>>(),
            "inequation": self.inequation.as_ref().map(|g| self.ring.print(g)),
        })
    }

    /// Reads `{"kind", "arity", "vars"?, "equations", "inequation"?}`.
    pub fn from_json(v: &Value) -> Result<Self, String> {
        let kind: MonoidKind = serde_json::from_value(v.get("kind").cloned().ok_or("system has no \"kind\"")?)
            .map_err(|e| format!("bad \"kind\": {e}"))?;
        let ring = match v.get("vars") {
            Some(vars) => {
                let vars: Vec<String> =
                    serde_json::from_value(vars.clone()).map_err(|e| format!("bad \"vars\": {e}"))?;
                Ring::new(kind, vars)?
            }
            None => {
                let arity = v
                    .get("arity")
                    .and_then(Value::as_u64)
                    .ok_or("system needs \"arity\" or \"vars\"")?;
                Ring::default_for(kind, arity as usize)
            }
        };
        if let Some(a) = v.get("arity").and_then(Value::as_u64) {
            if a as usize != ring.arity() {
                return Err(format!("\"arity\" is {a} but {} variables are named", ring.arity()));
            }
        }
        let parse = |text: &Value| -> Result<DiffPoly, String> {
            let s = text.as_str().ok_or_else(|| format!("polynomial {text} is not a string"))?;
            ring.parse(s).map_err(|e| format!("in \"{s}\": {e}"))
        };
        let equations = v
            .get("equations")
            .and_then(Value::as_array)
            .ok_or("system has no \"equations\" list")?
            .iter()
            .map(parse)
            .collect::<Result<Vec<_>, _>>()?;
        let inequation = match v.get("inequation") {
            None | Some(Value::Null) => None,
            Some(g) => Some(parse(g)?),
        };
        DiffSystem::new(ring, equations, inequation).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("window is over {window} but index {index} is over {found}")]
    KindMismatch {
        window: MonoidKind,
        found: MonoidKind,
        index: MonoidElem,
    },
    #[error("no value for variable {var} at window index {index}")]
    MissingValue { var: usize, index: MonoidElem },
    #[error("index {index} lies outside the window {window}")]
    OutsideWindow { index: MonoidElem, window: WindowSpec },
    #[error("variable {var} out of range for arity {arity}")]
    VarOutOfRange { var: usize, arity: usize },
    #[error("value {value} at ({var}, {index}) is not in the witness field {field}")]
    FieldMismatch {
        var: usize,
        index: MonoidElem,
        value: String,
        field: FieldKind,
    },
    #[error("{0}")]
    Format(String),
}

/// Finitely many sequence values: one per variable and window index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    window: WindowSpec,
    field: FieldKind,
    arity: usize,
    values: BTreeMap<(usize, MonoidElem), FieldElem>,
}

impl Witness {
    /// Validates that every `(var, index)` of the window has exactly one value.
    pub fn new(
        window: WindowSpec,
        field: FieldKind,
        arity: usize,
        values: BTreeMap<(usize, MonoidElem), FieldElem>,
    ) -> Result<Self, WitnessError> {
        for ((var, index), value) in &values {
            if *var >= arity {
                return Err(WitnessError::VarOutOfRange { var: *var, arity });
            }
            if index.kind() != window.kind() {
                return Err(WitnessError::KindMismatch {
                    window: window.kind(),
                    found: index.kind(),
                    index: index.clone(),
                });
            }
            if !window.contains(index) {
                return Err(WitnessError::OutsideWindow {
                    index: index.clone(),
                    window: window.clone(),
                });
            }
            if value.kind() != field {
                return Err(WitnessError::FieldMismatch {
                    var: *var,
                    index: index.clone(),
                    value: value.to_string(),
                    field,
                });
            }
        }
        for index in window.enumerate() {
            for var in 0..arity {
                if !values.contains_key(&(var, index.clone())) {
                    return Err(WitnessError::MissingValue { var, index });
                }
            }
        }
        Ok(Witness {
            window,
            field,
            arity,
            values,
        })
    }

    /// Fills the window from a value function.
    pub fn from_fn(
        window: WindowSpec,
        field: FieldKind,
        arity: usize,
        mut value: impl FnMut(usize, &MonoidElem) -> FieldElem,
    ) -> Result<Self, WitnessError> {
        let mut values = BTreeMap::new();
        for index in window.enumerate() {
            for var in 0..arity {
                let v = value(var, &index);
                values.insert((var, index.clone()), v);
            }
        }
        Self::new(window, field, arity, values)
    }

    pub fn window(&self) -> &WindowSpec {
        &self.window
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &BTreeMap<(usize, MonoidElem), FieldElem> {
        &self.values
    }

    pub fn get(&self, var: usize, index: &MonoidElem) -> Option<&FieldElem> {
        self.values.get(&(var, index.clone()))
    }

    /// A copy with one value replaced; the index must lie in the window.
    pub fn with_value(&self, var: usize, index: &MonoidElem, value: FieldElem) -> Result<Witness, WitnessError> {
        let mut values = self.values.clone();
        values.insert((var, index.clone()), value);
        Self::new(self.window.clone(), self.field, self.arity, values)
    }

    /// The values of one variable in window order.
    pub fn column(&self, var: usize) -> Vec<(MonoidElem, FieldElem)> {
        self.window
            .enumerate()
            .into_iter()
            .map(|m| {
                let v = self.values[&(var, m.clone())].clone();
                (m, v)
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let values: Vec<Value> = self
            .values
            .iter()
            .map(|((var, index), v)| json!([var, index.to_json(), v.to_string()]))
            .collect();
        json!({
            "window": self.window,
            "field": self.field,
            "arity": self.arity,
            "values": values,
        })
    }

    /// Reads `{"window", "field"?, "arity"?, "values": [[var, idx, val], ...]}`.
    ///
    /// Without `"arity"` the arity is one more than the largest variable seen;
    /// without `"field"`, values are read as rationals.
    pub fn from_json(v: &Value) -> Result<Self, WitnessError> {
        let fmt_err = |m: String| WitnessError::Format(m);
        let window: WindowSpec = serde_json::from_value(
            v.get("window")
                .cloned()
                .ok_or_else(|| fmt_err("witness has no \"window\"".into()))?,
        )
        .map_err(|e| fmt_err(format!("bad \"window\": {e}")))?;
        let field: FieldKind = match v.get("field") {
            Some(f) => serde_json::from_value(f.clone()).map_err(|e| fmt_err(format!("bad \"field\": {e}")))?,
            None => FieldKind::Q,
        };
        let rows = v
            .get("values")
            .and_then(Value::as_array)
            .ok_or_else(|| fmt_err("witness has no \"values\" list".into()))?;
        let mut values = BTreeMap::new();
        let mut max_var = None;
        for row in rows {
            let row = row
                .as_array()
                .filter(|r| r.len() == 3)
                .ok_or_else(|| fmt_err(format!("value entry {row} is not [var, index, value]")))?;
            let var = row[0]
                .as_u64()
                .ok_or_else(|| fmt_err(format!("variable {} is not a natural number", row[0])))? as usize;
            let index = MonoidElem::from_json(window.kind(), &row[1]).map_err(|e| fmt_err(e.to_string()))?;
            let text = match &row[2] {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                other => return Err(fmt_err(format!("value {other} is neither a string nor a number"))),
            };
            let value = FieldElem::parse_in(field, &text).map_err(|e| fmt_err(format!("value '{text}': {e}")))?;
            max_var = max_var.max(Some(var));
            if values.insert((var, index.clone()), value).is_some() {
                return Err(fmt_err(format!("duplicate value for variable {var} at index {index}")));
            }
        }
        let arity = match v.get("arity") {
            Some(a) => a.as_u64().ok_or_else(|| fmt_err("bad \"arity\"".into()))? as usize,
            None => max_var.map_or(0, |m| m + 1),
        };
        Witness::new(window, field, arity, values)
    }
}

/// Evaluates `f` at `index`, reading `σ^m(X_i)` as the value of `X_i` at `index·m`.
pub fn eval_at(f: &DiffPoly, w: &Witness, index: &MonoidElem) -> Result<FieldElem, PolyError> {
    if f.kind() != w.window.kind() || index.kind() != f.kind() {
        return Err(PolyError::RingMismatch(format!(
            "polynomial over {}, window over {}, index {index}",
            f.kind(),
            w.window.kind()
        )));
    }
    f.eval_with(w.field, |v| {
        let at = index.op(&v.shift)?;
        w.get(v.var, &at).cloned().ok_or(PolyError::MissingValue { var: v.var, index: at })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationReport {
    pub equation: usize,
    /// Indices where every needed value was present, in window order.
    pub checked: Vec<MonoidElem>,
    /// Checked indices with a nonzero value.
    pub failures: Vec<(MonoidElem, FieldElem)>,
    /// Window indices skipped because some shifted value lies outside the window.
    pub unchecked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequationReport {
    pub checked: usize,
    pub nonzero: Vec<MonoidElem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    WindowVerified,
    NotVerified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub window: WindowSpec,
    pub equations: Vec<EquationReport>,
    pub inequation: Option<InequationReport>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::WindowVerified
    }

    pub fn first_failure(&self) -> Option<(usize, &MonoidElem, &FieldElem)> {
        self.equations
            .iter()
            .find_map(|r| r.failures.first().map(|(m, v)| (r.equation, m, v)))
    }

    fn reasons(&self) -> Vec<String> {
        let mut out = Vec::new();
        let failing = self.equations.iter().filter(|r| !r.failures.is_empty()).count();
        if failing > 0 {
            out.push(format!("{failing} equation(s) fail"));
        }
        let empty = self.equations.iter().filter(|r| r.checked.is_empty()).count();
        if empty > 0 {
            out.push(format!("{empty} equation(s) have no checkable index"));
        }
        if let Some(g) = &self.inequation {
            if g.nonzero.is_empty() {
                out.push("the inequation vanishes at every checked index".into());
            }
        }
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "window: {}", self.window)?;
        for r in &self.equations {
            writeln!(
                f,
                "equation {}: {} checked, {} failed, {} unchecked",
                r.equation + 1,
                r.checked.len(),
                r.failures.len(),
                r.unchecked
            )?;
            for (m, v) in &r.failures {
                writeln!(f, "  fails at index {m}: value {v}")?;
            }
        }
        if let Some(g) = &self.inequation {
            let listed: Vec<String> = g.nonzero.iter().take(8).map(ToString::to_string).collect();
            let more = if g.nonzero.len() > 8 { ", ..." } else { "" };
            writeln!(
                f,
                "inequation: nonzero at {} of {} checked indices [{}{more}]",
                g.nonzero.len(),
                g.checked,
                listed.join(", ")
            )?;
        }
        match self.verdict {
            Verdict::WindowVerified => write!(f, "verdict: window-verified"),
            Verdict::NotVerified => write!(f, "verdict: not verified ({})", self.reasons().join("; ")),
        }
    }
}

/// Checks every equation at every window index whose shifted values all lie
/// in the window. The verdict is `WindowVerified` iff no check fails, every
/// equation was checked at least once and, when an inequation is present, it
/// is nonzero at some checked index.
pub fn verify_window(s: &DiffSystem, w: &Witness) -> Result<VerificationReport, PolyError> {
    if s.kind() != w.window.kind() {
        return Err(PolyError::RingMismatch(format!(
            "system over {}, witness window over {}",
            s.kind(),
            w.window.kind()
        )));
    }
    if s.arity() != w.arity {
        return Err(PolyError::RingMismatch(format!(
            "system has {} variables, witness has {}",
            s.arity(),
            w.arity
        )));
    }
    let indices = w.window.enumerate();
    let scan = |f: &DiffPoly| -> Result<(Vec<(MonoidElem, FieldElem)>, usize), PolyError> {
        let mut vals = Vec::new();
        let mut unchecked = 0;
        for m in &indices {
            match eval_at(f, w, m) {
                Ok(v) => vals.push((m.clone(), v)),
                Err(PolyError::MissingValue { .. }) => unchecked += 1,
                Err(e) => return Err(e),
            }
        }
        Ok((vals, unchecked))
    };
    let equations = s
        .equations
        .par_iter()
        .enumerate()
        .map(|(k, f)| {
            let (vals, unchecked) = scan(f)?;
            let checked = vals.iter().map(|(m, _)| m.clone()).collect();
            let failures = vals.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            Ok(EquationReport {
                equation: k,
                checked,
                failures,
                unchecked,
            })
        })
        .collect::<Result<Vec<_>, PolyError>>()?;
    let inequation = match &s.inequation {
        None => None,
        Some(g) => {
            let (vals, _) = scan(g)?;
            Some(InequationReport {
                checked: vals.len(),
                nonzero: vals.into_iter().filter(|(_, v)| !v.is_zero()).map(|(m, _)| m).collect(),
            })
        }
    };
    let ok = equations.iter().all(|r| r.failures.is_empty() && !r.checked.is_empty())
        && inequation.as_ref().is_none_or(|g| !g.nonzero.is_empty());
    Ok(VerificationReport {
        window: w.window.clone(),
        equations,
        inequation,
        verdict: if ok { Verdict::WindowVerified } else { Verdict::NotVerified },
    })
}

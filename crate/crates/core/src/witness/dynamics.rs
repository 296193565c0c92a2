//! Witnesses for compiled dynamics systems, and the way back: reading an
//! orbit of the map off a verified witness.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{line_index, BuildError};
use crate::diffpoly::Witness;
use crate::field::{FieldElem, FieldError, FieldKind};
use crate::monoid::{MonoidElem, MonoidKind, WindowSpec};
use crate::piecewise::{PiecewiseError, Trajectory};
use crate::poly::Poly;
use crate::reductions::{CompiledSystem, DynamicsLayout, ReductionError};

const U: usize = 0;
const U_PRIME: usize = 1;

/// A solution `(y, z)` of `S_W` at the point `x`: `z = 1` on `V(h)` with all
/// `y = 0`; otherwise `z = 0` and the first `k` with `h_k(x) ≠ 0` gets
/// `y_k = 1/h_k(x)`.
pub fn indicator_values(
    h: &[Poly],
    kind: FieldKind,
    x: &[FieldElem],
) -> Result<(Vec<FieldElem>, FieldElem), FieldError> {
    let mut y = vec![FieldElem::zero(kind); h.len()];
    for (k, hk) in h.iter().enumerate() {
        let v = hk.eval(kind, x)?;
        if !v.is_zero() {
            y[k] = v.inv()?;
            return Ok((y, FieldElem::zero(kind)));
        }
    }
    Ok((y, FieldElem::one(kind)))
}

fn index_at(kind: MonoidKind, i: i64) -> MonoidElem {
    match kind {
        MonoidKind::Nat => MonoidElem::Nat(i as u64),
        _ => MonoidElem::Int(i),
    }
}

/// Extends the orbit `traj`, placed so that its start sits at index
/// `i0_offset`, to a witness of the compiled system on `window`.
///
/// Before the start `X` is padded with zeros; `U` is 1 strictly after the
/// start and `U′ = 1/X_n` there.
pub fn build_dynamics_witness(
    compiled: &CompiledSystem,
    traj: &Trajectory,
    i0_offset: i64,
    window: &WindowSpec,
) -> Result<Witness, BuildError> {
    let layout = DynamicsLayout::from_compiled(compiled)?;
    let kind = compiled.system.kind();
    if window.kind() != kind {
        return Err(BuildError::Invalid(format!("system is over {kind}, window {window} is not")));
    }
    let n = layout.n();
    let start = traj.start();
    if start.len() != n {
        return Err(BuildError::Trajectory {
            step: 0,
            message: format!("point has dimension {}, map has dimension {n}", start.len()),
        });
    }
    let field = start[0].kind();
    for g in &layout.v {
        if !g.eval(field, start)?.is_zero() {
            return Err(BuildError::Trajectory {
                step: 0,
                message: format!("start does not lie in V: {g} is nonzero"),
            });
        }
    }
    let indices = window.enumerate();
    let hi = indices.iter().filter_map(line_index).max().unwrap_or(i0_offset);
    if i0_offset >= hi || !window.contains(&index_at(kind, i0_offset)) {
        return Err(BuildError::Invalid(format!(
            "the start index {i0_offset} must lie in {window} before its last index"
        )));
    }
    let needed = (hi - i0_offset) as usize;
    if needed > traj.len() {
        return Err(BuildError::TooShort { needed, have: traj.len() });
    }
    for (s, p) in traj.points.iter().enumerate().take(needed + 1).skip(1) {
        if p[n - 1].is_zero() {
            return Err(BuildError::Trajectory {
                step: s,
                message: format!("the last coordinate vanishes at step {s}"),
            });
        }
    }

    let zero = FieldElem::zero(field);
    let one = FieldElem::one(field);
    let padding = vec![zero.clone(); n];
    let mut values = BTreeMap::new();
    for m in indices {
        let s = line_index(&m).expect("line window") - i0_offset;
        let x = if s >= 0 { &traj.points[s as usize] } else { &padding };
        let mut put = |var: usize, v: FieldElem| {
            values.insert((var, m.clone()), v);
        };
        put(U, if s >= 1 { one.clone() } else { zero.clone() });
        put(U_PRIME, if s >= 1 { x[n - 1].inv()? } else { zero.clone() });
        for (k, v) in x.iter().enumerate() {
            put(layout.x(k), v.clone());
        }
        for p in &layout.pieces {
            let (ys, z) = indicator_values(&p.h, field, x)?;
            for (&var, v) in p.y.iter().zip(ys) {
                put(var, v);
            }
            put(p.z, z);
            match &p.h_prime {
                Some(hp) => {
                    let (ys, z) = indicator_values(hp, field, x)?;
                    for (&var, v) in p.y_prime.iter().zip(ys) {
                        put(var, v);
                    }
                    put(p.z_prime, z);
                }
                None => put(p.z_prime, zero.clone()),
            }
        }
    }
    Ok(Witness::new(window.clone(), field, layout.arity, values)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("U = {value} at index {index} is neither 0 nor 1")]
    NotBinary { index: MonoidElem, value: String },
    #[error("U drops or jumps by more than 1 between index {index} and the next")]
    NotStep { index: MonoidElem },
    #[error("U never steps from 0 to 1 inside the window")]
    NoStep,
    #[error("the point at the step index {index} is not in V: {equation} is nonzero")]
    NotInV { index: MonoidElem, equation: String },
    #[error("index {index}: the next point is not the image under the map")]
    MapViolation { index: MonoidElem },
    #[error("index {index}: the last coordinate vanishes after the step")]
    GuardVanishes { index: MonoidElem },
    #[error(transparent)]
    Partition(#[from] PiecewiseError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("{0}")]
    Invalid(String),
}

/// What a witness of a compiled dynamics system says about the map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractedRun {
    /// The last index with `u = 0`.
    pub i0: MonoidElem,
    /// `x_{i0}, x_{i0+1}, …` up to the end of the window.
    pub points: Vec<Vec<FieldElem>>,
    /// Number of checked transitions `x_{i+1} = p(x_i)`.
    pub transitions: usize,
}

/// Reads the `U` column of a witness, finds its 0→1 step `i0` and checks that
/// `x_{i0} ∈ V`, that `x_{i+1} = p(x_i)` for every `i ≥ i0` in the window and
/// that the last coordinate is nonzero after `i0`.
pub fn extract_dynamics_run(compiled: &CompiledSystem, w: &Witness) -> Result<ExtractedRun, ExtractError> {
    let layout = DynamicsLayout::from_compiled(compiled)?;
    if w.arity() != layout.arity || w.window().kind() != compiled.system.kind() {
        return Err(ExtractError::Invalid("witness does not match the compiled system".into()));
    }
    let field = w.field();
    let u = w.column(U);
    for (m, v) in &u {
        if !v.is_zero() && !v.is_one() {
            return Err(ExtractError::NotBinary {
                index: m.clone(),
                value: v.to_string(),
            });
        }
    }
    let mut i0 = None;
    for pair in u.windows(2) {
        let (a, b) = (&pair[0].1, &pair[1].1);
        match (a.is_zero(), b.is_zero()) {
            (true, false) => i0 = Some(pair[0].0.clone()),
            (false, true) => return Err(ExtractError::NotStep { index: pair[0].0.clone() }),
            _ => {}
        }
    }
    let i0 = i0.ok_or(ExtractError::NoStep)?;
    let n = layout.n();
    let point = |m: &MonoidElem| -> Vec<FieldElem> {
        (0..n).map(|k| w.get(layout.x(k), m).expect("complete witness").clone()).collect()
    };
    let tail: Vec<MonoidElem> = u.iter().map(|(m, _)| m.clone()).skip_while(|m| m != &i0).collect();
    let points: Vec<Vec<FieldElem>> = tail.iter().map(point).collect();
    for g in &layout.v {
        if !g.eval(field, &points[0])?.is_zero() {
            return Err(ExtractError::NotInV {
                index: i0,
                equation: g.to_string(),
            });
        }
    }
    for (k, pair) in points.windows(2).enumerate() {
        let (_, image) = layout.map.step(&pair[0])?;
        if image != pair[1] {
            return Err(ExtractError::MapViolation { index: tail[k].clone() });
        }
        if pair[1][n - 1].is_zero() {
            return Err(ExtractError::GuardVanishes { index: tail[k + 1].clone() });
        }
    }
    Ok(ExtractedRun {
        i0,
        transitions: points.len().saturating_sub(1),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::verify_window;
    use crate::piecewise::{LocallyClosedPiece, PiecewiseMap};
    use crate::reductions::compile_dynamics;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn succ() -> PiecewiseMap {
        PiecewiseMap::new(
            1,
            vec![LocallyClosedPiece {
                w: vec![],
                w_prime: vec![],
                q: vec![p("x1+1")],
            }],
        )
        .unwrap()
    }

    fn start(s: &str) -> Vec<FieldElem> {
        crate::piecewise::parse_point(FieldKind::Q, s).unwrap()
    }

    #[test]
    fn successor_witness() {
        let map = succ();
        let c = compile_dynamics(&map, &[p("x1")], MonoidKind::Nat).unwrap();
        let traj = map.iterate(&start("0"), 10).unwrap();
        let w = build_dynamics_witness(&c, &traj, 0, &WindowSpec::Nat { lo: 0, hi: 10 }).unwrap();
        let u: Vec<String> = w.column(0).iter().take(3).map(|(_, v)| v.to_string()).collect();
        assert_eq!(u, ["0", "1", "1"]);
        let up: Vec<String> = w.column(1).iter().take(4).map(|(_, v)| v.to_string()).collect();
        assert_eq!(up, ["0", "1", "1/2", "1/3"]);
        let report = verify_window(&c.system, &w).unwrap();
        assert!(report.is_verified(), "{report}");
        assert_eq!(report.inequation.unwrap().nonzero, [MonoidElem::Nat(0)]);

        let run = extract_dynamics_run(&c, &w).unwrap();
        assert_eq!(run.i0, MonoidElem::Nat(0));
        assert_eq!(run.transitions, 10);
    }

    #[test]
    fn integer_window_pads_with_zeros() {
        let map = succ();
        let c = compile_dynamics(&map, &[p("x1")], MonoidKind::Int).unwrap();
        let traj = map.iterate(&start("0"), 8).unwrap();
        let w = build_dynamics_witness(&c, &traj, 0, &WindowSpec::Int { lo: -3, hi: 8 }).unwrap();
        assert!(verify_window(&c.system, &w).unwrap().is_verified());
        let run = extract_dynamics_run(&c, &w).unwrap();
        assert_eq!(run.i0, MonoidElem::Int(0));
    }

    #[test]
    fn zero_in_guarded_coordinate() {
        let map = succ();
        let c = compile_dynamics(&map, &[p("x1+3")], MonoidKind::Nat).unwrap();
        let traj = map.iterate(&start("-3"), 6).unwrap();
        let err = build_dynamics_witness(&c, &traj, 0, &WindowSpec::Nat { lo: 0, hi: 6 }).unwrap_err();
        assert!(matches!(err, BuildError::Trajectory { step: 3, .. }), "{err}");
    }

    #[test]
    fn tampering_is_detected() {
        let map = succ();
        let c = compile_dynamics(&map, &[p("x1")], MonoidKind::Nat).unwrap();
        let traj = map.iterate(&start("0"), 6).unwrap();
        let w = build_dynamics_witness(&c, &traj, 0, &WindowSpec::Nat { lo: 0, hi: 6 }).unwrap();
        let bad = w.with_value(0, &MonoidElem::Nat(3), FieldElem::zero(FieldKind::Q)).unwrap();
        assert!(matches!(extract_dynamics_run(&c, &bad), Err(ExtractError::NotStep { .. })));
        let bad = w.with_value(0, &MonoidElem::Nat(0), FieldElem::one(FieldKind::Q)).unwrap();
        assert_eq!(extract_dynamics_run(&c, &bad), Err(ExtractError::NoStep));
        let bad = w.with_value(2, &MonoidElem::Nat(4), FieldElem::zero(FieldKind::Q)).unwrap();
        assert!(matches!(extract_dynamics_run(&c, &bad), Err(ExtractError::MapViolation { .. })));
    }
}

//! Instrumented runs of the detector map.
//!
//! Besides iterating, the monitor tracks the base-3 expansion that the map is
//! supposed to be computing and checks it step by step: every digit piece must
//! fire with `x4 = ⌊x3/3⌋`, peel off the expected digit, and a completed loop
//! `(c, N, 0, 0, ·)` must carry exactly `P_N(c)` in the fifth coordinate.

use num_bigint::BigUint;
use thiserror::Error;

use super::{detector_map, pn_digits, pn_polynomial, PiecewiseError, Trajectory};
use crate::field::{FieldElem, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectorError {
    #[error(transparent)]
    Map(#[from] PiecewiseError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("step {step}: {message}")]
    Invariant { step: usize, message: String },
}

/// The state `(c, N, 0, 0, P_N(c))` reached at `step`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectorEvent {
    pub n: u64,
    pub step: usize,
    pub value: FieldElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectorRun {
    pub trajectory: Trajectory,
    pub completions: Vec<DetectorEvent>,
    /// First step with `x5 = 0`, together with the `N` being processed.
    pub first_zero: Option<(usize, u64)>,
}

impl DetectorRun {
    pub fn completion_of(&self, n: u64) -> Option<&DetectorEvent> {
        self.completions.iter().find(|e| e.n == n)
    }

    /// The fifth coordinate along the run.
    pub fn x5(&self) -> impl Iterator<Item = &FieldElem> {
        self.trajectory.points.iter().map(|p| &p[4])
    }
}

fn small_int(v: &FieldElem, step: usize, what: &str) -> Result<i64, DetectorError> {
    v.as_integer()
        .and_then(|n| i64::try_from(n).ok())
        .filter(|n| *n >= 0)
        .ok_or_else(|| DetectorError::Invariant {
            step,
            message: format!("{what} = {v} is not a natural number"),
        })
}

/// Runs from `(c, 0, 0, 0, 1)` for `steps` steps.
pub fn run_detector(c: FieldElem, steps: usize) -> Result<DetectorRun, DetectorError> {
    run(c, |_, s| s >= steps)
}

/// Runs from `(c, 0, 0, 0, 1)` until the loop for `max_n` has completed.
pub fn run_detector_until(c: FieldElem, max_n: u64) -> Result<DetectorRun, DetectorError> {
    run(c, |last, _| last.is_some_and(|e: &DetectorEvent| e.n >= max_n))
}

fn run(c: FieldElem, mut done: impl FnMut(Option<&DetectorEvent>, usize) -> bool) -> Result<DetectorRun, DetectorError> {
    let kind = c.kind();
    let map = detector_map();
    let one = FieldElem::one(kind);
    let zero = FieldElem::zero(kind);
    let start = vec![c.clone(), zero.clone(), zero.clone(), zero, one.clone()];

    let mut points = vec![start];
    let mut piece_trace = Vec::new();
    let mut completions = vec![DetectorEvent {
        n: 0,
        step: 0,
        value: one,
    }];
    let mut first_zero = None;
    // digits of the N currently being expanded, and how many are consumed
    let mut pending: Vec<u8> = Vec::new();
    let mut consumed = 0usize;

    while !done(completions.last(), piece_trace.len()) {
        let step = piece_trace.len();
        let x = points.last().unwrap();
        let (j, y) = map.step(x)?;
        let n = small_int(&y[1], step + 1, "x2")? as u64;
        match j {
            0 => {
                pending = pn_digits(&BigUint::from(n));
                consumed = 0;
            }
            2..=4 => {
                let x3 = small_int(&x[2], step, "x3")?;
                let x4 = small_int(&x[3], step, "x4")?;
                if x4 != x3 / 3 {
                    return Err(DetectorError::Invariant {
                        step,
                        message: format!("digit piece fired with x4 = {x4}, expected floor({x3}/3) = {}", x3 / 3),
                    });
                }
                let digit = (x3 - 3 * x4) as u8;
                if pending.get(consumed) != Some(&digit) {
                    return Err(DetectorError::Invariant {
                        step,
                        message: format!("digit {digit} peeled, expected digit {consumed} of {n} ({:?})", pending),
                    });
                }
                consumed += 1;
            }
            _ => {}
        }
        if y[2].is_zero() && j != 0 {
            if consumed != pending.len() {
                return Err(DetectorError::Invariant {
                    step: step + 1,
                    message: format!("loop for {n} ended after {consumed} of {} digits", pending.len()),
                });
            }
            let expect = pn_polynomial(&BigUint::from(n)).eval(kind, std::slice::from_ref(&c))?;
            if y[4] != expect {
                return Err(DetectorError::Invariant {
                    step: step + 1,
                    message: format!("x5 = {} but P_{n}(c) = {expect}", y[4]),
                });
            }
            completions.push(DetectorEvent {
                n,
                step: step + 1,
                value: y[4].clone(),
            });
        }
        if first_zero.is_none() && y[4].is_zero() {
            first_zero = Some((step + 1, n));
        }
        piece_trace.push(j);
        points.push(y);
    }
    Ok(DetectorRun {
        trajectory: Trajectory { points, piece_trace },
        completions,
        first_zero,
    })
}

//! Piecewise polynomial maps `𝔸ⁿ → 𝔸ⁿ` over locally closed pieces.

mod constructions;
mod detector;
mod pn;

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{FieldElem, FieldError, FieldKind};
use crate::poly::Poly;

pub use constructions::{detector_map, hilbert10_map, tn_map, DETECTOR_DIM};
pub use detector::{run_detector, run_detector_until, DetectorError, DetectorEvent, DetectorRun};
pub use pn::{pn_digits, pn_index_of, pn_polynomial, PnError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PiecewiseError {
    #[error("point {point} matches no piece")]
    NoPieceMatches { point: String },
    #[error("point {point} matches several pieces: {pieces:?}")]
    MultiplePiecesMatch { point: String, pieces: Vec<usize> },
    #[error("point has dimension {got}, map has dimension {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid piecewise map: {0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl PiecewiseError {
    /// Whether the error means the pieces do not partition the space.
    pub fn is_partition_violation(&self) -> bool {
        matches!(
            self,
            PiecewiseError::NoPieceMatches { .. } | PiecewiseError::MultiplePiecesMatch { .. }
        )
    }
}

/// `C = V(W) ∖ V(W′)` with the branch `q` applied on `C`.
///
/// An empty `w_prime` stands for the empty closed set, so membership is then
/// just the vanishing of `w`; an empty `w` is the whole space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocallyClosedPiece {
    pub w: Vec<Poly>,
    pub w_prime: Vec<Poly>,
    pub q: Vec<Poly>,
}

impl LocallyClosedPiece {
    pub fn contains(&self, kind: FieldKind, x: &[FieldElem]) -> Result<bool, FieldError> {
        for h in &self.w {
            if !h.eval(kind, x)?.is_zero() {
                return Ok(false);
            }
        }
        if self.w_prime.is_empty() {
            return Ok(true);
        }
        for h in &self.w_prime {
            if !h.eval(kind, x)?.is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseMap {
    n: usize,
    pieces: Vec<LocallyClosedPiece>,
}

/// Exact orbit of a point together with the piece taken at every step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub points: Vec<Vec<FieldElem>>,
    pub piece_trace: Vec<usize>,
}

impl Trajectory {
    pub fn start(&self) -> &[FieldElem] {
        &self.points[0]
    }

    /// Number of steps taken.
    pub fn len(&self) -> usize {
        self.piece_trace.len()
    }

    pub fn is_empty(&self) -> bool {
        self.piece_trace.is_empty()
    }

    /// First step index at which coordinate `k` (0-based) is zero.
    pub fn first_zero(&self, k: usize) -> Option<usize> {
        self.points.iter().position(|p| p[k].is_zero())
    }
}

fn point_text(x: &[FieldElem]) -> String {
    let parts: Vec<String> = x.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

impl PiecewiseMap {
    pub fn new(n: usize, pieces: Vec<LocallyClosedPiece>) -> Result<Self, PiecewiseError> {
        if pieces.is_empty() {
            return Err(PiecewiseError::Invalid("a map needs at least one piece".into()));
        }
        for (j, p) in pieces.iter().enumerate() {
            if p.q.len() != n {
                return Err(PiecewiseError::Invalid(format!(
                    "piece {j} has {} branch polynomials, expected {n}",
                    p.q.len()
                )));
            }
            if let Some(h) = p.w.iter().chain(&p.w_prime).chain(&p.q).find(|h| h.nvars() > n) {
                return Err(PiecewiseError::Invalid(format!("piece {j}: {h} uses more than {n} variables")));
            }
        }
        Ok(PiecewiseMap { n, pieces })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[LocallyClosedPiece] {
        &self.pieces
    }

    /// The unique piece containing `x`; every piece is tested.
    pub fn classify(&self, x: &[FieldElem]) -> Result<usize, PiecewiseError> {
        if x.len() != self.n {
            return Err(PiecewiseError::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        let kind = x.first().map_or(FieldKind::Q, FieldElem::kind);
        let mut hits = Vec::new();
        for (j, p) in self.pieces.iter().enumerate() {
            if p.contains(kind, x)? {
                hits.push(j);
            }
        }
        match hits.len() {
            0 => Err(PiecewiseError::NoPieceMatches { point: point_text(x) }),
            1 => Ok(hits[0]),
            _ => Err(PiecewiseError::MultiplePiecesMatch {
                point: point_text(x),
                pieces: hits,
            }),
        }
    }

    /// Applies the matched piece's branch.
    pub fn step(&self, x: &[FieldElem]) -> Result<(usize, Vec<FieldElem>), PiecewiseError> {
        let j = self.classify(x)?;
        let kind = x.first().map_or(FieldKind::Q, FieldElem::kind);
        let y = self.pieces[j]
            .q
            .iter()
            .map(|q| q.eval(kind, x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((j, y))
    }

    pub fn iterate(&self, x0: &[FieldElem], steps: usize) -> Result<Trajectory, PiecewiseError> {
        let mut points = vec![x0.to_vec()];
        let mut piece_trace = Vec::with_capacity(steps);
        for _ in 0..steps {
            let (j, y) = self.step(points.last().unwrap())?;
            piece_trace.push(j);
            points.push(y);
        }
        Ok(Trajectory { points, piece_trace })
    }

    fn var_names(&self) -> Vec<String> {
        (1..=self.n).map(|i| format!("x{i}")).collect()
    }

    pub fn to_json(&self) -> Value {
        let names = self.var_names();
        let list = |ps: &[Poly]| ps.iter().map(|p| p.display_with(&names)).collect::<Vec<_>>();
        json!({
            "n": self.n,
            "pieces": self.pieces.iter().map(|p| json!({
                "W": list(&p.w),
                "Wprime": list(&p.w_prime),
                "q": list(&p.q),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, PiecewiseError> {
        let bad = |m: String| PiecewiseError::Invalid(m);
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("map has no \"n\"".into()))? as usize;
        let polys = |piece: &Value, key: &str| -> Result<Vec<Poly>, PiecewiseError> {
            match piece.get(key) {
                None | Some(Value::Null) => Ok(Vec::new()),
                Some(Value::Array(items)) => items
                    .iter()
                    .map(|s| {
                        let s = s.as_str().ok_or_else(|| bad(format!("{key}: {s} is not a string")))?;
                        Poly::parse(s).map_err(|e| bad(format!("{key}: \"{s}\": {e}")))
                    })
                    .collect(),
                Some(other) => Err(bad(format!("{key} must be a list, got {other}"))),
            }
        };
        let pieces = v
            .get("pieces")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("map has no \"pieces\" list".into()))?
            .iter()
            .map(|p| {
                Ok(LocallyClosedPiece {
                    w: polys(p, "W")?,
                    w_prime: polys(p, "Wprime")?,
                    q: polys(p, "q")?,
                })
            })
            .collect::<Result<Vec<_>, PiecewiseError>>()?;
        PiecewiseMap::new(n, pieces)
    }
}

impl fmt::Display for PiecewiseMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.var_names();
        let list = |ps: &[Poly]| ps.iter().map(|p| p.display_with(&names)).collect::<Vec<_>>().join(", ");
        for (j, p) in self.pieces.iter().enumerate() {
            writeln!(f, "piece {j}: V({}) minus V({}) -> ({})", list(&p.w), list(&p.w_prime), list(&p.q))?;
        }
        Ok(())
    }
}

/// Parses a comma-separated start point such as `"1/2,0,0,0,1"` or `"t,0,0,0,1"`.
pub fn parse_point(kind: FieldKind, text: &str) -> Result<Vec<FieldElem>, FieldError> {
    text.split(',').map(|s| FieldElem::parse_in(kind, s.trim())).collect()
}

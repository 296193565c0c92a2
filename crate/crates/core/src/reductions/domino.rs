//! Domino (Wang tile) sets into two-dimensional difference systems.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{CompiledSystem, Reduction, ReductionError, SourceDescriptor};
use crate::diffpoly::{DiffPoly, DiffSystem, Ring};
use crate::monoid::{MonoidElem, MonoidKind};

/// Edge marks of one tile: left, right, top, bottom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Domino {
    pub l: u32,
    pub r: u32,
    pub t: u32,
    pub b: u32,
}

impl Domino {
    pub fn marks(&self) -> [u32; 4] {
        [self.l, self.r, self.t, self.b]
    }
}

/// Tiles whose marks lie in `1..=N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominoSet {
    #[serde(rename = "N")]
    pub n: u32,
    pub dominoes: Vec<Domino>,
}

impl DominoSet {
    pub fn new(n: u32, dominoes: Vec<Domino>) -> Result<Self, ReductionError> {
        if dominoes.is_empty() {
            return Err(ReductionError::Invalid("the domino set is empty".into()));
        }
        for (k, d) in dominoes.iter().enumerate() {
            if let Some(m) = d.marks().into_iter().find(|m| !(1..=n).contains(m)) {
                return Err(ReductionError::Invalid(format!("domino {k} has mark {m} outside 1..{n}")));
            }
        }
        Ok(DominoSet { n, dominoes })
    }

    /// `N` defaults to the largest mark when absent.
    pub fn from_json(v: &Value) -> Result<Self, ReductionError> {
        let dominoes: Vec<Domino> = serde_json::from_value(
            v.get("dominoes")
                .cloned()
                .ok_or_else(|| ReductionError::Invalid("no \"dominoes\" list".into()))?,
        )
        .map_err(|e| ReductionError::Invalid(format!("bad \"dominoes\": {e}")))?;
        let n = match v.get("N") {
            Some(n) => n
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| ReductionError::Invalid(format!("bad \"N\": {n}")))?,
            None => dominoes.iter().flat_map(|d| d.marks()).max().unwrap_or(0),
        };
        DominoSet::new(n, dominoes)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// `{(X−1)…(X−N), (Y−1)…(Y−N), ∏_k ((b_k − X)² + (t_k − σ^{(0,1)}X)² + (l_k − Y)² + (r_k − σ^{(1,0)}Y)²)}`.
///
/// `X` at `(i, j)` is the mark of the horizontal edge from `(i, j)` to
/// `(i+1, j)`, `Y` the mark of the vertical edge from `(i, j)` to `(i, j+1)`.
pub fn compile_domino(d: &DominoSet, kind: MonoidKind) -> Result<CompiledSystem, ReductionError> {
    let DominoSet { n, dominoes } = DominoSet::new(d.n, d.dominoes.clone())?;
    let (up, right) = match kind {
        MonoidKind::Nat2 => (MonoidElem::Nat2(0, 1), MonoidElem::Nat2(1, 0)),
        MonoidKind::Int2 => (MonoidElem::Int2(0, 1), MonoidElem::Int2(1, 0)),
        _ => return Err(ReductionError::Invalid(format!("domino systems compile to nat2 or int2, not {kind}"))),
    };
    let ring = Ring::new(kind, vec!["X".into(), "Y".into()]).map_err(ReductionError::Invalid)?;
    let (x, y) = (ring.var(0), ring.var(1));
    let marks = |v: &DiffPoly| (1..=n as i64).fold(ring.int(1), |acc, m| &acc * &(v - &ring.int(m)));
    let sq = |c: u32, v: &DiffPoly| (&ring.int(c as i64) - v).pow(2);
    let x_up = ring.shifted(0, up);
    let y_right = ring.shifted(1, right);
    let cover = dominoes.iter().fold(ring.int(1), |acc, dk| {
        let f = &(&(&sq(dk.b, &x) + &sq(dk.t, &x_up)) + &sq(dk.l, &y)) + &sq(dk.r, &y_right);
        &acc * &f
    });
    let system = DiffSystem::new(ring.clone(), vec![marks(&x), marks(&y), cover], None)?;
    let source = SourceDescriptor {
        reduction: Reduction::Domino,
        inputs: serde_json::json!({ "dominoes": d.to_json(), "monoid": kind }),
    };
    Ok(CompiledSystem::new(system, vec!["X".into(), "Y".into()], source))
}

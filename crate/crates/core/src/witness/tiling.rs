//! Tilings by dominoes, their witnesses, and a bounded exhaustive search.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::BuildError;
use crate::diffpoly::Witness;
use crate::field::{FieldElem, FieldKind};
use crate::monoid::{MonoidElem, MonoidKind, WindowSpec};
use crate::reductions::{Domino, DominoSet};

pub const TILE_SEARCH_CAP: usize = 6;

/// A rectangle of cells, each holding a domino index. A periodic tiling
/// repeats the rectangle over the whole plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tiling {
    pub origin: (i64, i64),
    pub width: usize,
    pub height: usize,
    pub periodic: bool,
    /// Row-major: cell `(i, j)` is at `(j − origin.1)·width + (i − origin.0)`.
    pub cells: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Grid,
    Torus,
}

impl std::str::FromStr for SearchMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "grid" => Ok(SearchMode::Grid),
            "torus" => Ok(SearchMode::Torus),
            _ => Err(format!("unknown search mode '{s}' (expected grid or torus)")),
        }
    }
}

impl Tiling {
    /// The domino at cell `(i, j)`, wrapping around when periodic.
    pub fn cell(&self, i: i64, j: i64) -> Option<usize> {
        let (mut a, mut b) = (i - self.origin.0, j - self.origin.1);
        let (w, h) = (self.width as i64, self.height as i64);
        if self.periodic {
            a = a.rem_euclid(w);
            b = b.rem_euclid(h);
        } else if !(0..w).contains(&a) || !(0..h).contains(&b) {
            return None;
        }
        Some(self.cells[(b * w + a) as usize])
    }

    /// Checks domino indices and that touching edges carry equal marks.
    pub fn check(&self, d: &DominoSet) -> Result<(), BuildError> {
        if self.cells.len() != self.width * self.height || self.cells.is_empty() {
            return Err(BuildError::Tiling(format!(
                "{} cells for a {}x{} rectangle",
                self.cells.len(),
                self.width,
                self.height
            )));
        }
        if let Some(k) = self.cells.iter().find(|&&k| k >= d.dominoes.len()) {
            return Err(BuildError::Tiling(format!("domino index {k} out of range")));
        }
        let (ox, oy) = self.origin;
        for b in 0..self.height as i64 {
            for a in 0..self.width as i64 {
                let (i, j) = (ox + a, oy + b);
                let here = &d.dominoes[self.cell(i, j).unwrap()];
                if let Some(r) = self.cell(i + 1, j) {
                    if here.r != d.dominoes[r].l {
                        return Err(BuildError::Tiling(format!(
                            "cells ({i},{j}) and ({},{j}) disagree on their shared edge",
                            i + 1
                        )));
                    }
                }
                if let Some(t) = self.cell(i, j + 1) {
                    if here.t != d.dominoes[t].b {
                        return Err(BuildError::Tiling(format!(
                            "cells ({i},{j}) and ({i},{}) disagree on their shared edge",
                            j + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `{"N", "dominoes", "periodic", "cells": [[i, j, k], …]}`.
    pub fn to_json(&self, d: &DominoSet) -> Value {
        let mut cells = Vec::with_capacity(self.cells.len());
        for b in 0..self.height as i64 {
            for a in 0..self.width as i64 {
                let (i, j) = (self.origin.0 + a, self.origin.1 + b);
                cells.push(json!([i, j, self.cell(i, j).unwrap()]));
            }
        }
        json!({ "N": d.n, "dominoes": d.dominoes, "periodic": self.periodic, "cells": cells })
    }

    pub fn from_json(v: &Value) -> Result<(DominoSet, Tiling), BuildError> {
        let d = DominoSet::from_json(v)?;
        let bad = |m: String| BuildError::Tiling(m);
        let periodic = v.get("periodic").and_then(Value::as_bool).unwrap_or(false);
        let raw: Vec<(i64, i64, usize)> = serde_json::from_value(
            v.get("cells").cloned().ok_or_else(|| bad("no \"cells\" list".into()))?,
        )
        .map_err(|e| bad(format!("bad \"cells\": {e}")))?;
        if raw.is_empty() {
            return Err(bad("no cells".into()));
        }
        let lo = (raw.iter().map(|c| c.0).min().unwrap(), raw.iter().map(|c| c.1).min().unwrap());
        let hi = (raw.iter().map(|c| c.0).max().unwrap(), raw.iter().map(|c| c.1).max().unwrap());
        let (width, height) = ((hi.0 - lo.0 + 1) as usize, (hi.1 - lo.1 + 1) as usize);
        let mut cells = vec![None; width * height];
        for (i, j, k) in raw {
            let slot = &mut cells[(j - lo.1) as usize * width + (i - lo.0) as usize];
            if slot.replace(k).is_some() {
                return Err(bad(format!("cell ({i},{j}) is listed twice")));
            }
        }
        let cells = cells
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("cells do not fill a rectangle".into()))?;
        let t = Tiling {
            origin: lo,
            width,
            height,
            periodic,
            cells,
        };
        t.check(&d)?;
        Ok((d, t))
    }
}

fn grid_index(kind: MonoidKind, i: i64, j: i64) -> MonoidElem {
    match kind {
        MonoidKind::Nat2 => MonoidElem::Nat2(i as u64, j as u64),
        _ => MonoidElem::Int2(i, j),
    }
}

fn grid_bounds(window: &WindowSpec) -> Result<([i64; 2], [i64; 2]), BuildError> {
    match *window {
        WindowSpec::Nat2 { lo, hi } => Ok(([lo[0] as i64, lo[1] as i64], [hi[0] as i64, hi[1] as i64])),
        WindowSpec::Int2 { lo, hi } => Ok((lo, hi)),
        _ => Err(BuildError::Invalid(format!("expected a nat2 or int2 window, got {window}"))),
    }
}

/// Reads the edge marks of a tiling: `X(i, j)` is the bottom mark of cell
/// `(i, j)` and `Y(i, j)` its left mark.
///
/// Without an explicit window a periodic tiling is read on its rectangle
/// widened by one in each direction, so that every cell is interior, and a
/// finite tiling on its own rectangle.
pub fn tiling_to_witness(
    d: &DominoSet,
    t: &Tiling,
    kind: MonoidKind,
    window: Option<WindowSpec>,
) -> Result<Witness, BuildError> {
    t.check(d)?;
    let extra = usize::from(t.periodic);
    let window = match window {
        Some(w) => w,
        None => {
            let (ox, oy) = t.origin;
            let (hx, hy) = (ox + (t.width - 1 + extra) as i64, oy + (t.height - 1 + extra) as i64);
            match kind {
                MonoidKind::Nat2 if ox >= 0 && oy >= 0 => WindowSpec::Nat2 {
                    lo: [ox as u64, oy as u64],
                    hi: [hx as u64, hy as u64],
                },
                MonoidKind::Int2 => WindowSpec::Int2 { lo: [ox, oy], hi: [hx, hy] },
                _ => return Err(BuildError::Invalid(format!("cannot place the tiling in a {kind} window"))),
            }
        }
    };
    if window.kind() != kind {
        return Err(BuildError::Invalid(format!("window {window} is not over {kind}")));
    }
    let (lo, hi) = grid_bounds(&window)?;
    let mut values = BTreeMap::new();
    for i in lo[0]..=hi[0] {
        for j in lo[1]..=hi[1] {
            let k = t
                .cell(i, j)
                .ok_or_else(|| BuildError::Tiling(format!("window cell ({i},{j}) is not tiled")))?;
            let dk: &Domino = &d.dominoes[k];
            let m = grid_index(kind, i, j);
            values.insert((0, m.clone()), FieldElem::from_int(FieldKind::Q, dk.b));
            values.insert((1, m), FieldElem::from_int(FieldKind::Q, dk.l));
        }
    }
    Ok(Witness::new(window, FieldKind::Q, 2, values)?)
}

/// Reads back the cells whose four edges all lie in the witness window.
pub fn witness_to_tiling(d: &DominoSet, w: &Witness) -> Result<Tiling, BuildError> {
    if w.arity() != 2 {
        return Err(BuildError::Invalid(format!("a domino witness has 2 variables, not {}", w.arity())));
    }
    let (lo, hi) = grid_bounds(w.window())?;
    let mut marks: BTreeMap<(usize, i64, i64), u32> = BTreeMap::new();
    for ((var, m), v) in w.values() {
        let c = m.components().expect("grid index");
        let mark = v
            .as_integer()
            .and_then(|n| u32::try_from(n).ok())
            .filter(|n| (1..=d.n).contains(n))
            .ok_or_else(|| {
                BuildError::Tiling(format!(
                    "{} at {m} is {v}, not a mark in 1..{}",
                    ["X", "Y"][*var],
                    d.n
                ))
            })?;
        marks.insert((*var, c[0], c[1]), mark);
    }
    let (width, height) = ((hi[0] - lo[0]) as usize, (hi[1] - lo[1]) as usize);
    if width == 0 || height == 0 {
        return Err(BuildError::Tiling(format!("window {} has no interior cell", w.window())));
    }
    let mut cells = Vec::with_capacity(width * height);
    for j in lo[1]..hi[1] {
        for i in lo[0]..hi[0] {
            let want = Domino {
                b: marks[&(0, i, j)],
                t: marks[&(0, i, j + 1)],
                l: marks[&(1, i, j)],
                r: marks[&(1, i + 1, j)],
            };
            let k = d.dominoes.iter().position(|dk| *dk == want).ok_or_else(|| {
                BuildError::Tiling(format!("no domino has the marks {want:?} of cell ({i},{j})"))
            })?;
            cells.push(k);
        }
    }
    Ok(Tiling {
        origin: (lo[0], lo[1]),
        width,
        height,
        periodic: false,
        cells,
    })
}

/// Exhaustive backtracking over `k×k` placements with the default cap.
pub fn finite_tiling_search(d: &DominoSet, k: usize, mode: SearchMode) -> Result<Option<Tiling>, BuildError> {
    finite_tiling_search_capped(d, k, mode, TILE_SEARCH_CAP)
}

/// First tiling in row-major, lowest-index-first order. A torus result
/// certifies a periodic tiling of the plane.
pub fn finite_tiling_search_capped(
    d: &DominoSet,
    k: usize,
    mode: SearchMode,
    cap: usize,
) -> Result<Option<Tiling>, BuildError> {
    if k > cap {
        return Err(BuildError::CapExceeded { k, cap });
    }
    if k == 0 {
        return Err(BuildError::Invalid("grid size must be at least 1".into()));
    }
    let ds = &d.dominoes;
    let torus = mode == SearchMode::Torus;
    let fits = |cells: &[usize], pos: usize, c: usize| -> bool {
        let (i, j) = (pos % k, pos / k);
        let dc = &ds[c];
        // on a 1-wide torus the wrap-around neighbour is the cell itself
        let at = |q: usize| if q == pos { dc } else { &ds[cells[q]] };
        if i > 0 && ds[cells[pos - 1]].r != dc.l {
            return false;
        }
        if j > 0 && ds[cells[pos - k]].t != dc.b {
            return false;
        }
        if torus && i == k - 1 && dc.r != at(j * k).l {
            return false;
        }
        if torus && j == k - 1 && dc.t != at(i).b {
            return false;
        }
        true
    };
    let total = k * k;
    let mut cells: Vec<usize> = Vec::with_capacity(total);
    let mut next: Vec<usize> = vec![0];
    while let Some(from) = next.pop() {
        let pos = cells.len();
        match (from..ds.len()).find(|&c| fits(&cells, pos, c)) {
            Some(c) => {
                cells.push(c);
                next.push(c + 1);
                if cells.len() == total {
                    return Ok(Some(Tiling {
                        origin: (0, 0),
                        width: k,
                        height: k,
                        periodic: torus,
                        cells,
                    }));
                }
                next.push(0);
            }
            None => {
                cells.pop();
            }
        }
    }
    Ok(None)
}

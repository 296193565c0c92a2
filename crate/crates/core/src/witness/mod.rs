//! Witness builders: turn a certificate for a source problem into a finite
//! window of a solution of the compiled system.

mod diophantine;
mod dynamics;
mod free_monoid;
mod tiling;

use thiserror::Error;

use crate::diffpoly::{PolyError, WitnessError};
use crate::field::FieldError;
use crate::monoid::MonoidElem;
use crate::reductions::ReductionError;

pub use diophantine::{build_diophantine_witness, build_inf_zeros_witness, four_square, zigzag};
pub use dynamics::{build_dynamics_witness, extract_dynamics_run, indicator_values, ExtractError, ExtractedRun};
pub use free_monoid::{build_free_monoid_witness, transport_normalized_witness};
pub use tiling::{
    finite_tiling_search, finite_tiling_search_capped, tiling_to_witness, witness_to_tiling, SearchMode, Tiling,
    TILE_SEARCH_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("the window holds {found} zero(s) of {what}; at least two are needed")]
    InsufficientZeros { what: String, found: usize },
    #[error("not a solution: {0}")]
    NotASolution(String),
    #[error("trajectory step {step}: {message}")]
    Trajectory { step: usize, message: String },
    #[error("the window needs trajectory step {needed}, but only {have} steps are available")]
    TooShort { needed: usize, have: usize },
    #[error("tiling: {0}")]
    Tiling(String),
    #[error("grid size {k} exceeds the search cap {cap}")]
    CapExceeded { k: usize, cap: usize },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

/// The integer behind an ℕ or ℤ index.
pub(crate) fn line_index(m: &MonoidElem) -> Option<i64> {
    match m {
        MonoidElem::Nat(i) => i64::try_from(*i).ok(),
        MonoidElem::Int(i) => Some(*i),
        _ => None,
    }
}

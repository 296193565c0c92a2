//! Exact difference-algebra toolkit: monoid-indexed difference polynomials,
//! piecewise polynomial dynamics, compilers from source problems into
//! difference systems, and witness builders with window verification.

pub mod expr;
pub mod field;
pub mod monoid;
pub mod poly;
pub mod diffpoly;
pub mod piecewise;
pub mod reductions;
pub mod witness;

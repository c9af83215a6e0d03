//! Exact decision procedures around additive decompositions of functions on
//! finite plane sets: given a finite `K ⊂ ℚ²` and values `f : K → ℚ`, decide
//! whether `f(x, y) = g(x) + h(y)` is solvable, construct solutions, certify
//! failures, and optimize the sup norms of the parts — all in exact rational
//! arithmetic.
//!
//! The crate also decides the associated rook game on marked cells (in the
//! plane and in higher dimensions, via zero-marginal weight vectors), decides
//! basic embeddability of finite graphs into the plane and into `ℝ × T_n`,
//! and ships numeric diagnostics for the classical families of sets on which
//! decompositions degenerate.
//!
//! Every decision comes with a checkable certificate: a closed rook route
//! with nonzero alternating sum, a zero-marginal integer vector, a peeling
//! order, or an explicit decomposition that verifies exactly.

pub mod decomp;
pub mod game;
pub mod graphs;
pub mod io;
pub mod lp;
pub mod rat;
pub mod rook;
pub mod sequences;

mod linalg;

pub use rat::Rat;

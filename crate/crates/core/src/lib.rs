//! Primal-dual approximation for even cycle transversal (ECT) on
//! node-weighted planar graphs.
//!
//! The solver repeatedly raises dual variables of even cycles of the
//! residual graph: cheap cycles with at most two attachment nodes directly,
//! otherwise blended inequalities of a tiling of a minimal pocket of the
//! 2-compression. A pair-aware reverse-delete then trims the hitting set.
//! Every run emits a dual certificate whose objective lower-bounds the
//! optimum.

pub mod blocks;
pub mod compress;
pub mod cycles;
pub mod dual;
pub mod embed;
pub mod error;
pub mod format;
pub mod generators;
pub mod graph;
pub mod instance;
pub mod matching;
pub mod pocket;
pub mod solver;
pub mod oracle;
pub mod tiling;

pub use num_rational::BigRational as Rational;

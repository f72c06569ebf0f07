//! Intermediate-separability entanglement measures for n-qubit pure states.
//!
//! The crate computes the family `R_2, ..., R_n` of separability indicators:
//! `R_m` vanishes exactly when the state factors into at least `m`
//! subsystems, interpolating between a global-entanglement test at `m = 2`
//! and the Meyer-Wallach measure at `m = n`. Three evaluation routes are
//! provided and cross-checked against each other:
//!
//! * [`measures`] — exhaustive enumeration over all set partitions with a
//!   given block count, for arbitrary states up to the combinatorial wall;
//! * [`symmetric`] — a closed-form fast path for permutation-symmetric
//!   states (GHZ, W, Dicke) that reaches `n = 50` and beyond;
//! * [`measures::bipartition_closed_form`] — the specialized `m = 2`
//!   product over bipartitions.
//!
//! [`partitions`] supplies the exact set-partition combinatorics (streaming
//! enumeration, shape multiplicities, Stirling numbers with asymptotics) and
//! [`geometric`] the geometric measure of entanglement via multi-start
//! overlap maximization.
//!
//! Data-parallel loops run on rayon by default; building with
//! `--no-default-features` yields a fully sequential crate with
//! bit-identical numeric output.

pub mod error;
mod exec;
pub mod geometric;
pub mod io;
pub mod measures;
pub mod partitions;
pub mod state;
pub mod symmetric;

pub use error::{Error, Result};
pub use measures::{MeasureReport, MeasureRow, DEFAULT_EPS_SEP};
pub use state::{QubitSubset, StateVector};

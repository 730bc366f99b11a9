//! Solvers for the d-distance matching problem on ordered bipartite graphs.
//!
//! An instance consists of an ordered node set `S = s_1..s_n`, an unordered
//! node set `T = t_1..t_k`, rational edge weights and a distance parameter
//! `d`. A feasible solution is an edge set in which every node of `S` is
//! covered at most once and any two edges sharing a `T`-node sit at
//! `S`-positions at least `d` apart (cyclically, in the cycle variant). The
//! perfect variant additionally requires every `S`-node to be covered.
//!
//! The crate provides:
//!
//! * [`core`]: the instance/matching model, feasibility checking, hit sets,
//!   windows, the non-perfect-to-perfect reduction and the text formats;
//! * [`exact`]: exact optima via dynamic programming (parameterized by `d`
//!   or by `|T|`), an exhaustive oracle and plain bipartite matching
//!   subroutines;
//! * [`approx`]: greedy algorithms, a window-partition approximation and
//!   local search with exact guarantee arithmetic;
//! * [`lp`]: an exact-rational simplex, the natural LP relaxation, flat
//!   edge orders, LP-based rounding, fractional decomposition and
//!   integrality-gap measurement;
//! * [`regular`]: recognition and full decomposition of regular instances;
//! * [`gen`]: reproducible instance generators, hardness-reduction
//!   constructions and the built-in example fixtures.
//!
//! All solver paths use arbitrary-precision rationals; floating point only
//! ever appears in report formatting.

pub mod approx;
pub mod core;
pub mod exact;
pub mod gen;
pub mod lp;
pub mod rational;
pub mod regular;

use thiserror::Error;

/// Errors reported by parsers, validators and resource guards.
///
/// Infeasibility of a solve is not an error; solvers report it through
/// [`exact::SolveOutcome`].
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// A precondition on arguments or input data is violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A text-format parse failure, with the 1-based line number.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// A size guard tripped; the computation was refused, not attempted.
    #[error("resource guard: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;

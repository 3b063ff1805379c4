//! Permutation algebra and sliding-tile puzzles.
//!
//! Boards are read as permutations of `{1..n}` (cell to label, blank as
//! label `n`), moves act on them as transpositions, and solvability is
//! decided by comparing the sign of the board permutation with the parity of
//! the blank's distance from its home cell. On top of that sit exact BFS
//! oracles, IDA* with Manhattan, linear-conflict and additive pattern
//! database heuristics, and a small binary format for pattern databases.

pub mod board;
pub mod pdb;
pub mod perm;
pub mod solvability;
pub mod solver;

pub use board::{Board, BoardError, Move, MoveSequence};
pub use pdb::{PatternDatabase, PdbError};
pub use perm::{CycleDecomposition, Notation, ParseError, Parity, PermError, Permutation};
pub use solvability::{Certificate, Enumeration, EnumerationLimits, Verification};
pub use solver::{Heuristic, SearchLimits, SearchResult, SolveError};

//! Parity-based solvability, its certificate, and the exhaustive BFS oracle.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::board::{Board, BoardError, Move, MoveSequence};
use crate::perm::Parity;

/// The two parities the decision rests on, shown side by side.
///
/// Every move is one transposition of labels, so it flips the configuration
/// parity, and it shifts the blank by one cell, so it flips the parity of the
/// blank's distance from home. The goal has both even, so a board can reach
/// it only if the two parities agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certificate {
    pub config_parity: Parity,
    pub blank_distance: usize,
    pub blank_parity: Parity,
    pub solvable: bool,
}

/// Stable `key=value` lines.
impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "config_parity={}", self.config_parity)?;
        writeln!(f, "blank_distance={}", self.blank_distance)?;
        writeln!(f, "blank_parity={}", self.blank_parity)?;
        write!(f, "solvable={}", self.solvable)
    }
}

pub fn certificate(board: &Board) -> Certificate {
    let config_parity = board.to_permutation().sign();
    let blank_distance = board.blank_distance();
    let blank_parity = Parity::of(blank_distance);
    Certificate {
        config_parity,
        blank_distance,
        blank_parity,
        solvable: config_parity == blank_parity,
    }
}

pub fn is_solvable(board: &Board) -> bool {
    certificate(board).solvable
}

/// Outcome of replaying a move sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub reached: Board,
    pub solved: bool,
}

/// Replays `seq` from `start`. An illegal step is reported as
/// [`BoardError::IllegalMoveAt`] with its index.
pub fn verify_sequence(start: &Board, seq: &MoveSequence) -> Result<Verification, BoardError> {
    let reached = start.apply_sequence(seq)?;
    let solved = reached.is_goal();
    Ok(Verification { reached, solved })
}

/// Resource ceilings for exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    /// Boards with more cells are refused before any work is done.
    pub max_cells: usize,
    /// Hard cap on visited states.
    pub max_states: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_cells: 9,
            max_states: 1 << 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error(transparent)]
    Board(#[from] BoardError),
    #[error("board has {cells} cells, enumeration limit is {max}")]
    TooManyCells { cells: usize, max: usize },
    #[error("state limit of {max} exceeded")]
    StateLimit { max: usize },
}

/// Summary of an exhaustive search from the goal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enumeration {
    pub count: usize,
    pub max_depth: usize,
}

/// Every board reachable from the goal, keyed by its packed cells, with its
/// BFS depth.
#[derive(Debug, Clone)]
pub struct ReachableSet {
    width: usize,
    height: usize,
    depths: HashMap<u64, u8>,
    max_depth: usize,
}

impl ReachableSet {
    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn contains(&self, board: &Board) -> bool {
        self.distance(board).is_some()
    }

    /// Exact distance to the goal, or `None` when unreachable or of the
    /// wrong dimensions.
    pub fn distance(&self, board: &Board) -> Option<usize> {
        if board.width() != self.width || board.height() != self.height {
            return None;
        }
        board
            .packed()
            .and_then(|k| self.depths.get(&k))
            .map(|&d| d as usize)
    }

    pub fn summary(&self) -> Enumeration {
        Enumeration {
            count: self.len(),
            max_depth: self.max_depth,
        }
    }
}

/// Breadth-first search over all boards reachable from the goal.
pub fn reachable_set(
    width: usize,
    height: usize,
    limits: &EnumerationLimits,
) -> Result<ReachableSet, EnumerationError> {
    let goal = Board::goal(width, height)?;
    let n = goal.len();
    if n > limits.max_cells.min(16) {
        return Err(EnumerationError::TooManyCells {
            cells: n,
            max: limits.max_cells.min(16),
        });
    }
    let start = goal.packed().expect("at most 16 cells");
    let mut depths = HashMap::new();
    depths.insert(start, 0u8);
    let mut frontier = vec![(start, n - 1)];
    let mut depth = 0usize;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &(key, blank) in &frontier {
            for m in Move::ALL {
                let Some(target) = m.target(blank, width, height) else {
                    continue;
                };
                let child = swap_nibbles(key, blank, target);
                if depths.contains_key(&child) {
                    continue;
                }
                if depths.len() >= limits.max_states {
                    return Err(EnumerationError::StateLimit {
                        max: limits.max_states,
                    });
                }
                depths.insert(child, (depth + 1) as u8);
                next.push((child, target));
            }
        }
        if !next.is_empty() {
            depth += 1;
        }
        frontier = next;
    }
    Ok(ReachableSet {
        width,
        height,
        depths,
        max_depth: depth,
    })
}

/// Count and diameter of the goal's component.
pub fn reachable_states(
    width: usize,
    height: usize,
    limits: &EnumerationLimits,
) -> Result<Enumeration, EnumerationError> {
    reachable_set(width, height, limits).map(|s| s.summary())
}

#[inline]
fn swap_nibbles(key: u64, a: usize, b: usize) -> u64 {
    let va = (key >> (4 * a)) & 0xF;
    let vb = (key >> (4 * b)) & 0xF;
    let cleared = key & !((0xF << (4 * a)) | (0xF << (4 * b)));
    cleared | (va << (4 * b)) | (vb << (4 * a))
}

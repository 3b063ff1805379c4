//! Fixed instances shared by the criterion benches.

use permslide::{Board, MoveSequence};

/// Seeded 4x4 scrambles, `steps` random moves each.
pub fn scrambles(width: usize, height: usize, steps: usize, count: u64) -> Vec<(Board, MoveSequence)> {
    (0..count)
        .map(|seed| Board::scramble(width, height, steps, seed).expect("valid dimensions"))
        .collect()
}

//! Sliding-tile boards, blank moves, and the bridge to [`Permutation`].
//!
//! A board of `n = width * height` cells holds labels `1..=n`; label `n` is
//! the blank. Reading the board as a map from cell (1-based, row-major) to
//! label gives its permutation, and sliding a tile `t` into the blank is the
//! left action of the transposition `(n t)` on that permutation.

use std::fmt;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::perm::Permutation;

/// Largest board the text format and the solvers accept.
pub const MAX_CELLS: usize = 255;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoardError {
    #[error("invalid dimensions {width}x{height}: both must be at least 2 and the board at most {MAX_CELLS} cells")]
    InvalidDimensions { width: usize, height: usize },
    #[error("empty board text")]
    Empty,
    #[error("row {row} has {found} tiles, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid token {0:?}")]
    InvalidToken(String),
    #[error("tile {value} is out of range 1..={max}")]
    ValueOutOfRange { value: usize, max: usize },
    #[error("duplicate tile {0}")]
    DuplicateTile(usize),
    #[error("more than one blank")]
    DuplicateBlank,
    #[error("missing blank")]
    MissingBlank,
    #[error("permutation degree {degree} does not match a {width}x{height} board")]
    DegreeMismatch {
        degree: usize,
        width: usize,
        height: usize,
    },
    #[error("illegal move {0}: the blank is at the edge")]
    IllegalMove(Move),
    #[error("illegal move {direction} at index {index}")]
    IllegalMoveAt { index: usize, direction: Move },
    #[error("invalid move token {0:?}")]
    InvalidMoveToken(String),
}

/// Direction the blank travels. The slid tile moves the opposite way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    BlankUp,
    BlankDown,
    BlankLeft,
    BlankRight,
}

impl Move {
    /// All moves in search order.
    pub const ALL: [Move; 4] = [Move::BlankUp, Move::BlankDown, Move::BlankLeft, Move::BlankRight];

    pub fn inverse(self) -> Move {
        match self {
            Move::BlankUp => Move::BlankDown,
            Move::BlankDown => Move::BlankUp,
            Move::BlankLeft => Move::BlankRight,
            Move::BlankRight => Move::BlankLeft,
        }
    }

    pub fn token(self) -> char {
        match self {
            Move::BlankUp => 'U',
            Move::BlankDown => 'D',
            Move::BlankLeft => 'L',
            Move::BlankRight => 'R',
        }
    }

    pub fn from_token(c: char) -> Option<Move> {
        match c {
            'U' => Some(Move::BlankUp),
            'D' => Some(Move::BlankDown),
            'L' => Some(Move::BlankLeft),
            'R' => Some(Move::BlankRight),
            _ => None,
        }
    }

    /// Index into [`Move::ALL`].
    pub(crate) fn index(self) -> usize {
        self as usize
    }

    /// Cell the blank moves to, if it stays on the grid. Cells are 0-based.
    #[inline]
    pub(crate) fn target(self, blank: usize, width: usize, height: usize) -> Option<usize> {
        match self {
            Move::BlankUp if blank >= width => Some(blank - width),
            Move::BlankDown if blank + width < width * height => Some(blank + width),
            Move::BlankLeft if !blank.is_multiple_of(width) => Some(blank - 1),
            Move::BlankRight if blank % width + 1 < width => Some(blank + 1),
            _ => None,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

/// Moves applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MoveSequence(pub Vec<Move>);

impl MoveSequence {
    pub fn new() -> Self {
        MoveSequence(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Move> {
        self.0.iter()
    }

    /// The sequence that undoes `self`.
    pub fn inverse(&self) -> MoveSequence {
        MoveSequence(self.0.iter().rev().map(|m| m.inverse()).collect())
    }
}

impl From<Vec<Move>> for MoveSequence {
    fn from(moves: Vec<Move>) -> Self {
        MoveSequence(moves)
    }
}

impl<'a> IntoIterator for &'a MoveSequence {
    type Item = &'a Move;
    type IntoIter = std::slice::Iter<'a, Move>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Space-separated `U D L R` tokens.
impl fmt::Display for MoveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Accepts `U D L R` tokens separated by whitespace or run together.
/// Lines of the form `key=value` are skipped so that solver output can be
/// fed back in unchanged.
impl FromStr for MoveSequence {
    type Err = BoardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut moves = Vec::new();
        for line in s.lines().filter(|l| !l.contains('=')) {
            for token in line.split_whitespace() {
                for c in token.chars() {
                    moves.push(
                        Move::from_token(c)
                            .ok_or_else(|| BoardError::InvalidMoveToken(token.to_string()))?,
                    );
                }
            }
        }
        Ok(MoveSequence(moves))
    }
}

/// A `width x height` sliding-tile position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Board {
    width: usize,
    height: usize,
    cells: Vec<u8>,
    blank: usize,
}

fn check_dimensions(width: usize, height: usize) -> Result<(), BoardError> {
    if width < 2 || height < 2 || width.saturating_mul(height) > MAX_CELLS {
        Err(BoardError::InvalidDimensions { width, height })
    } else {
        Ok(())
    }
}

impl Board {
    /// The solved board: labels in row-major order with the blank last.
    pub fn goal(width: usize, height: usize) -> Result<Board, BoardError> {
        check_dimensions(width, height)?;
        let n = width * height;
        Ok(Board {
            width,
            height,
            cells: (1..=n).map(|l| l as u8).collect(),
            blank: n - 1,
        })
    }

    /// Builds a board from row-major labels `1..=n`, with `n` as the blank.
    pub fn from_cells(width: usize, height: usize, cells: &[usize]) -> Result<Board, BoardError> {
        check_dimensions(width, height)?;
        let n = width * height;
        if cells.len() != n {
            return Err(BoardError::DegreeMismatch {
                degree: cells.len(),
                width,
                height,
            });
        }
        let mut seen = vec![false; n];
        let mut blank = None;
        for (i, &label) in cells.iter().enumerate() {
            if label == 0 || label > n {
                return Err(BoardError::ValueOutOfRange { value: label, max: n });
            }
            if std::mem::replace(&mut seen[label - 1], true) {
                return Err(if label == n {
                    BoardError::DuplicateBlank
                } else {
                    BoardError::DuplicateTile(label)
                });
            }
            if label == n {
                blank = Some(i);
            }
        }
        Ok(Board {
            width,
            height,
            cells: cells.iter().map(|&l| l as u8).collect(),
            blank: blank.ok_or(BoardError::MissingBlank)?,
        })
    }

    /// Internal constructor for search code that keeps the invariants itself.
    pub(crate) fn from_raw(width: usize, height: usize, cells: Vec<u8>) -> Board {
        let n = (width * height) as u8;
        let blank = cells
            .iter()
            .position(|&l| l == n)
            .expect("board without blank");
        Board {
            width,
            height,
            cells,
            blank,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of cells, which is also the blank's label.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major labels, blank included as label `n`.
    pub fn cells(&self) -> Vec<usize> {
        self.cells.iter().map(|&l| l as usize).collect()
    }

    pub(crate) fn raw_cells(&self) -> &[u8] {
        &self.cells
    }

    /// Label at 1-based cell `position`.
    pub fn tile_at(&self, position: usize) -> Option<usize> {
        position
            .checked_sub(1)
            .and_then(|i| self.cells.get(i))
            .map(|&l| l as usize)
    }

    /// 1-based cell of the blank.
    pub fn blank_position(&self) -> usize {
        self.blank + 1
    }

    /// `(row, column)` of the blank, 0-based.
    pub fn blank_coords(&self) -> (usize, usize) {
        (self.blank / self.width, self.blank % self.width)
    }

    /// Manhattan distance from the blank to its goal cell (bottom right).
    pub fn blank_distance(&self) -> usize {
        let (r, c) = self.blank_coords();
        (self.height - 1 - r) + (self.width - 1 - c)
    }

    pub fn is_goal(&self) -> bool {
        self.cells
            .iter()
            .enumerate()
            .all(|(i, &l)| l as usize == i + 1)
    }

    /// Reads the position→label map as a permutation of degree `n`.
    pub fn to_permutation(&self) -> Permutation {
        Permutation::from_zero_based_unchecked(self.cells.iter().map(|&l| l as u16 - 1).collect())
    }

    pub fn from_permutation(p: &Permutation, width: usize, height: usize) -> Result<Board, BoardError> {
        check_dimensions(width, height)?;
        if p.degree() != width * height {
            return Err(BoardError::DegreeMismatch {
                degree: p.degree(),
                width,
                height,
            });
        }
        let cells = p.zero_based().iter().map(|&x| x as u8 + 1).collect();
        Ok(Board::from_raw(width, height, cells))
    }

    pub fn is_legal(&self, m: Move) -> bool {
        m.target(self.blank, self.width, self.height).is_some()
    }

    /// Legal moves in [`Move::ALL`] order.
    pub fn legal_moves(&self) -> Vec<Move> {
        Move::ALL.into_iter().filter(|&m| self.is_legal(m)).collect()
    }

    /// Label of the tile that `m` slides into the blank.
    pub fn moved_tile(&self, m: Move) -> Result<usize, BoardError> {
        m.target(self.blank, self.width, self.height)
            .map(|t| self.cells[t] as usize)
            .ok_or(BoardError::IllegalMove(m))
    }

    pub fn apply_move(&self, m: Move) -> Result<Board, BoardError> {
        let mut next = self.clone();
        next.apply_move_in_place(m)?;
        Ok(next)
    }

    pub fn apply_move_in_place(&mut self, m: Move) -> Result<(), BoardError> {
        let target = m
            .target(self.blank, self.width, self.height)
            .ok_or(BoardError::IllegalMove(m))?;
        self.cells.swap(self.blank, target);
        self.blank = target;
        Ok(())
    }

    /// The label transposition `(n t)` realizing `m`, where `t` is the slid
    /// tile. Left-composing it with [`Board::to_permutation`] gives the
    /// permutation of the board after the move.
    pub fn move_transposition(&self, m: Move) -> Result<Permutation, BoardError> {
        let tile = self.moved_tile(m)?;
        let n = self.len();
        Ok(Permutation::transposition(n, n, tile).expect("blank and tile are distinct points of 1..=n"))
    }

    /// Applies `seq` left to right, failing at the first illegal move.
    pub fn apply_sequence(&self, seq: &MoveSequence) -> Result<Board, BoardError> {
        let mut board = self.clone();
        for (index, &m) in seq.iter().enumerate() {
            board
                .apply_move_in_place(m)
                .map_err(|_| BoardError::IllegalMoveAt { index, direction: m })?;
        }
        Ok(board)
    }

    /// Random walk of `steps` legal moves from the goal that never undoes
    /// the previous move. Deterministic for a given seed.
    pub fn scramble(
        width: usize,
        height: usize,
        steps: usize,
        seed: u64,
    ) -> Result<(Board, MoveSequence), BoardError> {
        let mut board = Board::goal(width, height)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut moves = Vec::with_capacity(steps);
        let mut last: Option<Move> = None;
        for _ in 0..steps {
            let options: Vec<Move> = board
                .legal_moves()
                .into_iter()
                .filter(|&m| Some(m.inverse()) != last)
                .collect();
            let &m = options.choose(&mut rng).expect("every cell has at least two moves");
            board.apply_move_in_place(m)?;
            moves.push(m);
            last = Some(m);
        }
        Ok((board, MoveSequence(moves)))
    }

    /// Packs up to 16 cells into a `u64`, four bits per cell holding
    /// `label - 1`.
    pub fn packed(&self) -> Option<u64> {
        (self.len() <= 16).then(|| pack(&self.cells))
    }

    pub fn from_packed(width: usize, height: usize, key: u64) -> Result<Board, BoardError> {
        check_dimensions(width, height)?;
        let n = width * height;
        if n > 16 {
            return Err(BoardError::InvalidDimensions { width, height });
        }
        let cells: Vec<usize> = (0..n).map(|i| ((key >> (4 * i)) & 0xF) as usize + 1).collect();
        Board::from_cells(width, height, &cells)
    }
}

#[inline]
pub(crate) fn pack(cells: &[u8]) -> u64 {
    cells
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &l)| acc | (u64::from(l - 1) << (4 * i)))
}

/// Rows of space-separated labels with `0` for the blank.
impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.len();
        for (r, row) in self.cells.chunks(self.width).enumerate() {
            if r > 0 {
                f.write_str("\n")?;
            }
            for (c, &l) in row.iter().enumerate() {
                if c > 0 {
                    f.write_str(" ")?;
                }
                let shown = if l as usize == n { 0 } else { l as usize };
                write!(f, "{shown}")?;
            }
        }
        Ok(())
    }
}

/// Newline-separated rows of whitespace-separated tokens. The blank is `0`
/// or `_`; dimensions come from the row and column counts.
impl FromStr for Board {
    type Err = BoardError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let rows: Vec<Vec<&str>> = text
            .lines()
            .map(|l| l.split_whitespace().collect::<Vec<_>>())
            .filter(|r| !r.is_empty())
            .collect();
        let Some(first) = rows.first() else {
            return Err(BoardError::Empty);
        };
        let width = first.len();
        let height = rows.len();
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != width) {
            return Err(BoardError::RaggedRows {
                row: row + 1,
                expected: width,
                found: r.len(),
            });
        }
        check_dimensions(width, height)?;
        let n = width * height;
        let mut cells = Vec::with_capacity(n);
        let mut seen = vec![false; n + 1];
        let mut blank_seen = false;
        for token in rows.iter().flatten() {
            if *token == "_" || *token == "0" {
                if std::mem::replace(&mut blank_seen, true) {
                    return Err(BoardError::DuplicateBlank);
                }
                cells.push(n);
                continue;
            }
            let v: usize = token
                .parse()
                .map_err(|_| BoardError::InvalidToken(token.to_string()))?;
            if v <= n && std::mem::replace(&mut seen[v], true) {
                return Err(BoardError::DuplicateTile(v));
            }
            cells.push(v);
        }
        if !blank_seen {
            return Err(BoardError::MissingBlank);
        }
        if let Some(&v) = cells.iter().find(|&&v| v == 0 || v > n) {
            return Err(BoardError::ValueOutOfRange { value: v, max: n - 1 });
        }
        if cells.iter().filter(|&&v| v == n).count() > 1 {
            return Err(BoardError::ValueOutOfRange { value: n, max: n - 1 });
        }
        Board::from_cells(width, height, &cells)
    }
}

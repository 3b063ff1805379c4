//! Additive pattern databases.
//!
//! A database covers a subset of tiles. Its table is indexed by the
//! lexicographic rank of the ordered selection of cells those tiles occupy,
//! and holds the fewest moves of pattern tiles needed to bring all of them
//! home, where blank travel over non-pattern tiles is free. Because only the
//! pattern's own tiles are charged, databases over disjoint tile sets can be
//! summed and stay admissible.
//!
//! On-disk layout, little-endian:
//!
//! ```text
//! "SPDB" | version: u8 = 1 | width: u8 | height: u8 | k: u8 | k tile labels (ascending)
//!        | table length L: u64 | L distance bytes
//! ```

use std::collections::VecDeque;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::board::{Board, Move};

pub const MAGIC: &[u8; 4] = b"SPDB";
pub const VERSION: u8 = 1;
/// Largest pattern size accepted by [`PatternDatabase::build`].
pub const MAX_PATTERN: usize = 8;
/// Ceiling on the build's working table (one byte per pattern placement and
/// blank cell).
pub const MAX_WORK_BYTES: usize = 1 << 30;
/// Table value for placements that cannot be reached from the goal.
pub const UNREACHABLE: u8 = u8::MAX;

#[derive(Debug, Error)]
pub enum PdbError {
    #[error("invalid dimensions {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },
    #[error("pattern must have between 1 and {MAX_PATTERN} tiles, got {0}")]
    PatternSize(usize),
    #[error("tile {tile} is not a non-blank label of a {cells}-cell board")]
    InvalidTile { tile: usize, cells: usize },
    #[error("tile {0} appears twice in the pattern")]
    DuplicateTile(usize),
    #[error("pattern tiles are not stored in ascending order")]
    UnsortedTiles,
    #[error("build needs {needed} bytes of working memory, limit is {limit}")]
    MemoryLimit { needed: usize, limit: usize },
    #[error("pattern distance exceeds the 8-bit table range")]
    DistanceOverflow,
    #[error("bad magic bytes {0:?}")]
    BadMagic([u8; 4]),
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("file ends inside the header")]
    TruncatedHeader,
    #[error("header declares {declared} entries, pattern requires {expected}")]
    DeclaredLength { declared: u64, expected: u64 },
    #[error("table has {found} bytes, header declares {expected}")]
    TableLength { expected: u64, found: u64 },
    #[error("database is for {db_width}x{db_height}, board is {width}x{height}")]
    DimensionMismatch {
        db_width: usize,
        db_height: usize,
        width: usize,
        height: usize,
    },
    #[error("tile {0} is covered by more than one database")]
    OverlappingPatterns(usize),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// `a! / (a - b)!`
fn falling(a: usize, b: usize) -> usize {
    (a - b + 1..=a).product()
}

/// Ranks ordered `k`-selections of `n` cells in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
struct SelectionRanker {
    n: usize,
    weights: Vec<usize>,
}

impl SelectionRanker {
    fn new(n: usize, k: usize) -> Self {
        let weights = (0..k).map(|i| falling(n - 1 - i, k - 1 - i)).collect();
        SelectionRanker { n, weights }
    }

    fn len(&self) -> usize {
        falling(self.n, self.weights.len())
    }

    #[inline]
    fn rank(&self, cells: &[u8]) -> usize {
        let mut used = 0u64;
        let mut rank = 0;
        for (&cell, &w) in cells.iter().zip(&self.weights) {
            let below = (used & ((1u64 << cell) - 1)).count_ones() as usize;
            rank += (cell as usize - below) * w;
            used |= 1 << cell;
        }
        rank
    }

    fn unrank(&self, mut rank: usize, out: &mut [u8]) {
        let mut used = 0u64;
        for (slot, &w) in out.iter_mut().zip(&self.weights) {
            let mut skip = rank / w;
            rank %= w;
            let mut cell = 0;
            loop {
                if used & (1 << cell) == 0 {
                    if skip == 0 {
                        break;
                    }
                    skip -= 1;
                }
                cell += 1;
            }
            *slot = cell as u8;
            used |= 1 << cell;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternDatabase {
    width: usize,
    height: usize,
    tiles: Vec<u8>,
    table: Vec<u8>,
    ranker: SelectionRanker,
}

fn validate(width: usize, height: usize, tiles: &[usize]) -> Result<Vec<u8>, PdbError> {
    if width < 2 || height < 2 || width * height > 64 || width > 255 || height > 255 {
        return Err(PdbError::InvalidDimensions { width, height });
    }
    let n = width * height;
    if tiles.is_empty() || tiles.len() > MAX_PATTERN {
        return Err(PdbError::PatternSize(tiles.len()));
    }
    let mut sorted = tiles.to_vec();
    sorted.sort_unstable();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(PdbError::DuplicateTile(pair[0]));
        }
    }
    if let Some(&tile) = sorted.iter().find(|&&t| t == 0 || t >= n) {
        return Err(PdbError::InvalidTile { tile, cells: n });
    }
    Ok(sorted.into_iter().map(|t| t as u8).collect())
}

impl PatternDatabase {
    /// Exhaustive 0-1 breadth-first search from the goal over pattern
    /// placements and blank cells. Moving a pattern tile costs one, any other
    /// blank move is free; each table entry is the minimum over blank cells.
    pub fn build(width: usize, height: usize, tiles: &[usize]) -> Result<Self, PdbError> {
        let tiles = validate(width, height, tiles)?;
        let n = width * height;
        let k = tiles.len();
        let ranker = SelectionRanker::new(n, k);
        let placements = ranker.len();
        let needed = placements.saturating_mul(n);
        if needed > MAX_WORK_BYTES {
            return Err(PdbError::MemoryLimit {
                needed,
                limit: MAX_WORK_BYTES,
            });
        }

        let mut dist = vec![UNREACHABLE; needed];
        let goal_cells: Vec<u8> = tiles.iter().map(|&t| t - 1).collect();
        let start = ranker.rank(&goal_cells) * n + (n - 1);
        dist[start] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(start as u32);

        let mut cells = vec![0u8; k];
        let mut tile_at = vec![u8::MAX; n];
        while let Some(idx) = queue.pop_front() {
            let idx = idx as usize;
            let d = dist[idx];
            let rank = idx / n;
            let blank = idx % n;
            ranker.unrank(rank, &mut cells);
            for (j, &c) in cells.iter().enumerate() {
                tile_at[c as usize] = j as u8;
            }
            for m in Move::ALL {
                let Some(target) = m.target(blank, width, height) else {
                    continue;
                };
                let j = tile_at[target];
                let (next, nd) = if j == u8::MAX {
                    (rank * n + target, d)
                } else {
                    if d >= UNREACHABLE - 1 {
                        return Err(PdbError::DistanceOverflow);
                    }
                    cells[j as usize] = blank as u8;
                    let r = ranker.rank(&cells);
                    cells[j as usize] = target as u8;
                    (r * n + target, d + 1)
                };
                if nd < dist[next] {
                    dist[next] = nd;
                    if nd == d {
                        queue.push_front(next as u32);
                    } else {
                        queue.push_back(next as u32);
                    }
                }
            }
            for &c in &cells {
                tile_at[c as usize] = u8::MAX;
            }
        }

        let table = dist
            .chunks_exact(n)
            .map(|per_blank| per_blank.iter().copied().min().unwrap_or(UNREACHABLE))
            .collect();
        Ok(PatternDatabase {
            width,
            height,
            tiles,
            table,
            ranker,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Pattern tile labels, ascending.
    pub fn tiles(&self) -> Vec<usize> {
        self.tiles.iter().map(|&t| t as usize).collect()
    }

    pub(crate) fn raw_tiles(&self) -> &[u8] {
        &self.tiles
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Rank of a placement given as the 0-based cell of each pattern tile,
    /// in ascending tile order.
    pub fn rank(&self, cells: &[u8]) -> usize {
        self.ranker.rank(cells)
    }

    /// Table value for a placement of the pattern tiles (0-based cells).
    #[inline]
    pub fn lookup(&self, cells: &[u8]) -> u8 {
        self.table[self.ranker.rank(cells)]
    }

    fn check_board(&self, board: &Board) -> Result<(), PdbError> {
        if board.width() != self.width || board.height() != self.height {
            return Err(PdbError::DimensionMismatch {
                db_width: self.width,
                db_height: self.height,
                width: board.width(),
                height: board.height(),
            });
        }
        Ok(())
    }

    /// Lower bound on the pattern tiles' share of the distance to the goal.
    pub fn estimate(&self, board: &Board) -> Result<u8, PdbError> {
        self.check_board(board)?;
        let mut cell_of = vec![0u8; board.len() + 1];
        for (i, &l) in board.raw_cells().iter().enumerate() {
            cell_of[l as usize] = i as u8;
        }
        let cells: Vec<u8> = self.tiles.iter().map(|&t| cell_of[t as usize]).collect();
        Ok(self.lookup(&cells))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + self.tiles.len() + self.table.len());
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(self.width as u8);
        out.push(self.height as u8);
        out.push(self.tiles.len() as u8);
        out.extend_from_slice(&self.tiles);
        out.extend_from_slice(&(self.table.len() as u64).to_le_bytes());
        out.extend_from_slice(&self.table);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, PdbError> {
        let mut rest = bytes;
        let mut take = |len: usize| -> Result<&[u8], PdbError> {
            if rest.len() < len {
                return Err(PdbError::TruncatedHeader);
            }
            let (head, tail) = rest.split_at(len);
            rest = tail;
            Ok(head)
        };
        let magic: [u8; 4] = take(4)?.try_into().expect("four bytes");
        if &magic != MAGIC {
            return Err(PdbError::BadMagic(magic));
        }
        let fixed = take(4)?;
        let (version, width, height, k) = (fixed[0], fixed[1] as usize, fixed[2] as usize, fixed[3] as usize);
        if version != VERSION {
            return Err(PdbError::UnsupportedVersion(version));
        }
        let listed: Vec<usize> = take(k)?.iter().map(|&t| t as usize).collect();
        let tiles = validate(width, height, &listed)?;
        if tiles.iter().map(|&t| t as usize).ne(listed.iter().copied()) {
            return Err(PdbError::UnsortedTiles);
        }
        let declared = u64::from_le_bytes(take(8)?.try_into().expect("eight bytes"));
        let ranker = SelectionRanker::new(width * height, k);
        let expected = ranker.len() as u64;
        if declared != expected {
            return Err(PdbError::DeclaredLength { declared, expected });
        }
        if rest.len() as u64 != declared {
            return Err(PdbError::TableLength {
                expected: declared,
                found: rest.len() as u64,
            });
        }
        Ok(PatternDatabase {
            width,
            height,
            tiles,
            table: rest.to_vec(),
            ranker,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), PdbError> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PdbError> {
        Self::from_bytes(&fs::read(path)?)
    }
}

/// Checks that every database fits `width x height` and that no tile is
/// covered twice.
pub fn check_disjoint(databases: &[PatternDatabase], width: usize, height: usize) -> Result<(), PdbError> {
    let mut covered = vec![false; width * height + 1];
    for db in databases {
        if db.width != width || db.height != height {
            return Err(PdbError::DimensionMismatch {
                db_width: db.width,
                db_height: db.height,
                width,
                height,
            });
        }
        for &t in &db.tiles {
            if std::mem::replace(&mut covered[t as usize], true) {
                return Err(PdbError::OverlappingPatterns(t as usize));
            }
        }
    }
    Ok(())
}

/// Sum of the databases' estimates for `board`.
pub fn pdb_heuristic(board: &Board, databases: &[PatternDatabase]) -> Result<u32, PdbError> {
    check_disjoint(databases, board.width(), board.height())?;
    databases
        .iter()
        .map(|db| db.estimate(board).map(u32::from))
        .sum()
}

/// Splits the non-blank tiles into consecutive groups of at most
/// `group_size` labels.
pub fn default_partition(width: usize, height: usize, group_size: usize) -> Vec<Vec<usize>> {
    let n = width * height;
    let labels: Vec<usize> = (1..n).collect();
    labels
        .chunks(group_size.clamp(1, MAX_PATTERN))
        .map(<[usize]>::to_vec)
        .collect()
}

/// Pattern size used by [`default_databases`] for an `n`-cell board.
pub fn default_group_size(cells: usize) -> usize {
    match cells {
        0..=9 => 4,
        10..=16 => 5,
        _ => 3,
    }
}

/// Builds databases over [`default_partition`] with [`default_group_size`].
pub fn default_databases(width: usize, height: usize) -> Result<Vec<PatternDatabase>, PdbError> {
    default_partition(width, height, default_group_size(width * height))
        .iter()
        .map(|tiles| PatternDatabase::build(width, height, tiles))
        .collect()
}

//! Optimal solvers: admissible heuristics, IDA*, and an exact BFS oracle.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::board::{pack, Board, Move, MoveSequence};
use crate::pdb::{check_disjoint, PatternDatabase, PdbError};
use crate::solvability::{certificate, Certificate};

pub use crate::pdb::pdb_heuristic;

/// Largest board [`bfs_optimal`] will search without an explicit node limit.
pub const BFS_DEFAULT_MAX_CELLS: usize = 9;
/// Largest board [`bfs_optimal`] will search at all.
pub const BFS_MAX_CELLS: usize = 10;

const TIME_CHECK_INTERVAL: u64 = 4096;

/// Optional resource ceilings. Exceeding any of them aborts the search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
    pub max_depth: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    Nodes,
    Time,
    Depth,
    Cells,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("board is unsolvable\n{0}")]
    Unsolvable(Certificate),
    #[error("{limit:?} limit exceeded after {nodes_expanded} expanded nodes")]
    LimitExceeded { limit: Limit, nodes_expanded: u64 },
    #[error(transparent)]
    Pdb(#[from] PdbError),
}

impl SolveError {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, SolveError::LimitExceeded { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub moves: MoveSequence,
    pub nodes_expanded: u64,
    pub elapsed: Duration,
}

impl SearchResult {
    pub fn length(&self) -> usize {
        self.moves.len()
    }
}

/// Heuristic used by [`ida_star`].
#[derive(Debug, Clone, Copy)]
pub enum Heuristic<'a> {
    Manhattan,
    LinearConflict,
    PatternDatabases(&'a [PatternDatabase]),
}

impl Heuristic<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            Heuristic::Manhattan => "manhattan",
            Heuristic::LinearConflict => "linear-conflict",
            Heuristic::PatternDatabases(_) => "pdb",
        }
    }
}

/// Search-side view of a board: 0-based labels, blank is `n - 1`.
struct Grid {
    width: usize,
    height: usize,
    cells: Vec<u8>,
    pos: Vec<u8>,
    blank: usize,
}

impl Grid {
    fn new(board: &Board) -> Grid {
        let cells: Vec<u8> = board.raw_cells().iter().map(|&l| l - 1).collect();
        let mut pos = vec![0u8; cells.len()];
        for (i, &t) in cells.iter().enumerate() {
            pos[t as usize] = i as u8;
        }
        Grid {
            width: board.width(),
            height: board.height(),
            blank: board.blank_position() - 1,
            cells,
            pos,
        }
    }

    fn is_goal(&self) -> bool {
        self.cells.iter().enumerate().all(|(i, &t)| i == t as usize)
    }
}

/// Incrementally maintained heuristic value.
trait Estimator {
    type Undo: Copy;

    fn value(&self) -> u32;

    /// Called after `tile` moved from cell `from` to cell `to`; `grid`
    /// already reflects the move.
    fn update(&mut self, grid: &Grid, tile: u8, from: usize, to: usize) -> Self::Undo;

    fn undo(&mut self, undo: Self::Undo);
}

/// `table[tile * n + cell]` = taxicab distance from `cell` to the tile's home.
fn distance_table(width: usize, height: usize) -> Vec<u8> {
    let n = width * height;
    let mut table = vec![0u8; n * n];
    for tile in 0..n - 1 {
        let (tr, tc) = (tile / width, tile % width);
        for cell in 0..n {
            let (r, c) = (cell / width, cell % width);
            table[tile * n + cell] = (r.abs_diff(tr) + c.abs_diff(tc)) as u8;
        }
    }
    table
}

struct ManhattanEstimator {
    n: usize,
    table: Vec<u8>,
    h: u32,
}

impl ManhattanEstimator {
    fn new(grid: &Grid) -> Self {
        let n = grid.cells.len();
        let table = distance_table(grid.width, grid.height);
        let h = grid
            .cells
            .iter()
            .enumerate()
            .filter(|&(_, &t)| t as usize != n - 1)
            .map(|(cell, &t)| u32::from(table[t as usize * n + cell]))
            .sum();
        ManhattanEstimator { n, table, h }
    }
}

impl Estimator for ManhattanEstimator {
    type Undo = u32;

    fn value(&self) -> u32 {
        self.h
    }

    #[inline]
    fn update(&mut self, _grid: &Grid, tile: u8, from: usize, to: usize) -> u32 {
        let old = self.h;
        let row = tile as usize * self.n;
        self.h = self.h + u32::from(self.table[row + to]) - u32::from(self.table[row + from]);
        old
    }

    fn undo(&mut self, undo: u32) {
        self.h = undo;
    }
}

/// Tiles that must leave a line so the rest sit in goal order: the line's
/// tiles minus the longest increasing run of their goal offsets.
fn conflicts_in(goal_offsets: &[u8], tails: &mut Vec<u8>) -> u8 {
    tails.clear();
    for &x in goal_offsets {
        match tails.binary_search(&x) {
            Ok(_) => {}
            Err(i) if i == tails.len() => tails.push(x),
            Err(i) => tails[i] = x,
        }
    }
    (goal_offsets.len() - tails.len()) as u8
}

struct LinearConflictEstimator {
    manhattan: ManhattanEstimator,
    rows: Vec<u8>,
    cols: Vec<u8>,
    extra: u32,
    scratch: Vec<u8>,
    tails: Vec<u8>,
}

#[derive(Clone, Copy)]
struct LinearConflictUndo {
    manhattan: u32,
    extra: u32,
    vertical: bool,
    lines: [(u8, u8); 2],
}

impl LinearConflictEstimator {
    fn new(grid: &Grid) -> Self {
        let mut est = LinearConflictEstimator {
            manhattan: ManhattanEstimator::new(grid),
            rows: vec![0; grid.height],
            cols: vec![0; grid.width],
            extra: 0,
            scratch: Vec::new(),
            tails: Vec::new(),
        };
        for r in 0..grid.height {
            est.rows[r] = est.row_conflicts(grid, r);
        }
        for c in 0..grid.width {
            est.cols[c] = est.col_conflicts(grid, c);
        }
        est.extra = est.rows.iter().chain(&est.cols).map(|&x| u32::from(x)).sum();
        est
    }

    fn row_conflicts(&mut self, grid: &Grid, r: usize) -> u8 {
        let (w, blank) = (grid.width, (grid.cells.len() - 1) as u8);
        self.scratch.clear();
        for &t in &grid.cells[r * w..(r + 1) * w] {
            if t != blank && t as usize / w == r {
                self.scratch.push((t as usize % w) as u8);
            }
        }
        conflicts_in(&self.scratch, &mut self.tails)
    }

    fn col_conflicts(&mut self, grid: &Grid, c: usize) -> u8 {
        let (w, blank) = (grid.width, (grid.cells.len() - 1) as u8);
        self.scratch.clear();
        for r in 0..grid.height {
            let t = grid.cells[r * w + c];
            if t != blank && t as usize % w == c {
                self.scratch.push((t as usize / w) as u8);
            }
        }
        conflicts_in(&self.scratch, &mut self.tails)
    }
}

impl Estimator for LinearConflictEstimator {
    type Undo = LinearConflictUndo;

    fn value(&self) -> u32 {
        self.manhattan.value() + 2 * self.extra
    }

    fn update(&mut self, grid: &Grid, tile: u8, from: usize, to: usize) -> LinearConflictUndo {
        let w = grid.width;
        // A vertical slide changes which rows the tile sits in; its order
        // within the column is unchanged, and vice versa.
        let vertical = from % w == to % w;
        let undo_lines;
        let old_extra = self.extra;
        if vertical {
            let (a, b) = (from / w, to / w);
            undo_lines = [(a as u8, self.rows[a]), (b as u8, self.rows[b])];
            let (na, nb) = (self.row_conflicts(grid, a), self.row_conflicts(grid, b));
            self.extra = self.extra + u32::from(na) + u32::from(nb)
                - u32::from(self.rows[a])
                - u32::from(self.rows[b]);
            self.rows[a] = na;
            self.rows[b] = nb;
        } else {
            let (a, b) = (from % w, to % w);
            undo_lines = [(a as u8, self.cols[a]), (b as u8, self.cols[b])];
            let (na, nb) = (self.col_conflicts(grid, a), self.col_conflicts(grid, b));
            self.extra = self.extra + u32::from(na) + u32::from(nb)
                - u32::from(self.cols[a])
                - u32::from(self.cols[b]);
            self.cols[a] = na;
            self.cols[b] = nb;
        }
        LinearConflictUndo {
            manhattan: self.manhattan.update(grid, tile, from, to),
            extra: old_extra,
            vertical,
            lines: undo_lines,
        }
    }

    fn undo(&mut self, undo: LinearConflictUndo) {
        self.manhattan.undo(undo.manhattan);
        self.extra = undo.extra;
        let lines = if undo.vertical { &mut self.rows } else { &mut self.cols };
        for &(i, v) in &undo.lines {
            lines[i as usize] = v;
        }
    }
}

struct PdbEstimator<'a> {
    databases: &'a [PatternDatabase],
    /// For each 0-based tile: (database index, slot), or `None`.
    owner: Vec<Option<(usize, usize)>>,
    placements: Vec<Vec<u8>>,
    values: Vec<u8>,
    h: u32,
}

impl<'a> PdbEstimator<'a> {
    fn new(grid: &Grid, databases: &'a [PatternDatabase]) -> Self {
        let mut owner = vec![None; grid.cells.len()];
        let mut placements = Vec::with_capacity(databases.len());
        let mut values = Vec::with_capacity(databases.len());
        for (d, db) in databases.iter().enumerate() {
            let cells: Vec<u8> = db
                .raw_tiles()
                .iter()
                .enumerate()
                .map(|(slot, &label)| {
                    owner[label as usize - 1] = Some((d, slot));
                    grid.pos[label as usize - 1]
                })
                .collect();
            values.push(db.lookup(&cells));
            placements.push(cells);
        }
        let h = values.iter().map(|&v| u32::from(v)).sum();
        PdbEstimator {
            databases,
            owner,
            placements,
            values,
            h,
        }
    }
}

impl Estimator for PdbEstimator<'_> {
    type Undo = Option<(usize, usize, u8, u8)>;

    fn value(&self) -> u32 {
        self.h
    }

    #[inline]
    fn update(&mut self, _grid: &Grid, tile: u8, from: usize, to: usize) -> Self::Undo {
        let (d, slot) = self.owner[tile as usize]?;
        let placement = &mut self.placements[d];
        placement[slot] = to as u8;
        let old = self.values[d];
        let new = self.databases[d].lookup(placement);
        self.values[d] = new;
        self.h = self.h + u32::from(new) - u32::from(old);
        Some((d, slot, old, from as u8))
    }

    fn undo(&mut self, undo: Self::Undo) {
        if let Some((d, slot, old, from)) = undo {
            self.placements[d][slot] = from;
            self.h = self.h + u32::from(old) - u32::from(self.values[d]);
            self.values[d] = old;
        }
    }
}

/// Sum over non-blank tiles of the taxicab distance to the tile's home cell.
pub fn manhattan(board: &Board) -> u32 {
    ManhattanEstimator::new(&Grid::new(board)).value()
}

/// Manhattan distance plus two for every tile that must leave its goal row
/// or column to let the others pass.
pub fn linear_conflict(board: &Board) -> u32 {
    LinearConflictEstimator::new(&Grid::new(board)).value()
}

enum Outcome {
    Found,
    Exceeded(u32),
}

struct Ida<'l, E> {
    grid: Grid,
    est: E,
    path: Vec<Move>,
    nodes: u64,
    limits: &'l SearchLimits,
    started: Instant,
}

impl<E: Estimator> Ida<'_, E> {
    fn check_limits(&self) -> Result<(), Limit> {
        if let Some(max) = self.limits.max_nodes {
            if self.nodes > max {
                return Err(Limit::Nodes);
            }
        }
        if let Some(max) = self.limits.max_time {
            if self.nodes.is_multiple_of(TIME_CHECK_INTERVAL) && self.started.elapsed() > max {
                return Err(Limit::Time);
            }
        }
        Ok(())
    }

    fn dfs(&mut self, g: u32, bound: u32, prev: Option<Move>) -> Result<Outcome, Limit> {
        let h = self.est.value();
        let f = g + h;
        if f > bound {
            return Ok(Outcome::Exceeded(f));
        }
        if h == 0 && self.grid.is_goal() {
            return Ok(Outcome::Found);
        }
        self.nodes += 1;
        self.check_limits()?;

        let mut next_bound = u32::MAX;
        let blank_label = (self.grid.cells.len() - 1) as u8;
        for m in Move::ALL {
            if prev == Some(m.inverse()) {
                continue;
            }
            let from_blank = self.grid.blank;
            let Some(target) = m.target(from_blank, self.grid.width, self.grid.height) else {
                continue;
            };
            let tile = self.grid.cells[target];
            self.grid.cells[from_blank] = tile;
            self.grid.cells[target] = blank_label;
            self.grid.pos[tile as usize] = from_blank as u8;
            self.grid.pos[blank_label as usize] = target as u8;
            self.grid.blank = target;
            let undo = self.est.update(&self.grid, tile, target, from_blank);
            self.path.push(m);

            let outcome = self.dfs(g + 1, bound, Some(m))?;
            if let Outcome::Found = outcome {
                return Ok(Outcome::Found);
            }
            if let Outcome::Exceeded(t) = outcome {
                next_bound = next_bound.min(t);
            }

            self.path.pop();
            self.est.undo(undo);
            self.grid.cells[target] = tile;
            self.grid.cells[from_blank] = blank_label;
            self.grid.pos[tile as usize] = target as u8;
            self.grid.pos[blank_label as usize] = from_blank as u8;
            self.grid.blank = from_blank;
        }
        Ok(Outcome::Exceeded(next_bound))
    }

    fn run(mut self) -> Result<SearchResult, SolveError> {
        let abort = |limit, nodes| SolveError::LimitExceeded {
            limit,
            nodes_expanded: nodes,
        };
        let mut bound = self.est.value();
        loop {
            if let Some(max) = self.limits.max_depth {
                if bound as usize > max {
                    return Err(abort(Limit::Depth, self.nodes));
                }
            }
            match self.dfs(0, bound, None) {
                Ok(Outcome::Found) => {
                    return Ok(SearchResult {
                        moves: MoveSequence(self.path),
                        nodes_expanded: self.nodes,
                        elapsed: self.started.elapsed(),
                    })
                }
                Ok(Outcome::Exceeded(next)) => {
                    assert!(next != u32::MAX, "search space exhausted on a solvable board");
                    bound = next;
                }
                Err(limit) => return Err(abort(limit, self.nodes)),
            }
        }
    }
}

/// Iterative-deepening A*. Returns an optimal move sequence when the
/// heuristic is admissible. Unsolvable boards are rejected by the parity
/// test before any node is expanded.
pub fn ida_star(
    board: &Board,
    heuristic: Heuristic<'_>,
    limits: &SearchLimits,
) -> Result<SearchResult, SolveError> {
    let started = Instant::now();
    let cert = certificate(board);
    if !cert.solvable {
        return Err(SolveError::Unsolvable(cert));
    }
    let grid = Grid::new(board);
    match heuristic {
        Heuristic::Manhattan => {
            let est = ManhattanEstimator::new(&grid);
            Ida::new(grid, est, limits, started).run()
        }
        Heuristic::LinearConflict => {
            let est = LinearConflictEstimator::new(&grid);
            Ida::new(grid, est, limits, started).run()
        }
        Heuristic::PatternDatabases(dbs) => {
            check_disjoint(dbs, board.width(), board.height())?;
            let est = PdbEstimator::new(&grid, dbs);
            Ida::new(grid, est, limits, started).run()
        }
    }
}

impl<'l, E: Estimator> Ida<'l, E> {
    fn new(grid: Grid, est: E, limits: &'l SearchLimits, started: Instant) -> Self {
        Ida {
            grid,
            est,
            path: Vec::new(),
            nodes: 0,
            limits,
            started,
        }
    }
}

fn factorials(n: usize) -> Vec<usize> {
    let mut f = vec![1usize; n + 1];
    for i in 1..=n {
        f[i] = f[i - 1] * i;
    }
    f
}

/// Lehmer rank of 0-based labels.
fn permutation_rank(cells: &[u8], fact: &[usize]) -> usize {
    let n = cells.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = cells[i + 1..].iter().filter(|&&c| c < cells[i]).count();
        rank += smaller * fact[n - 1 - i];
    }
    rank
}

/// Exact shortest solution by breadth-first search from `board`.
///
/// Boards above [`BFS_DEFAULT_MAX_CELLS`] cells need an explicit
/// `max_nodes`; boards above [`BFS_MAX_CELLS`] are always refused.
pub fn bfs_optimal(board: &Board, limits: &SearchLimits) -> Result<SearchResult, SolveError> {
    let started = Instant::now();
    let cert = certificate(board);
    if !cert.solvable {
        return Err(SolveError::Unsolvable(cert));
    }
    let n = board.len();
    let too_large = n > BFS_MAX_CELLS || (n > BFS_DEFAULT_MAX_CELLS && limits.max_nodes.is_none());
    if too_large {
        return Err(SolveError::LimitExceeded {
            limit: Limit::Cells,
            nodes_expanded: 0,
        });
    }
    let (width, height) = (board.width(), board.height());
    let fact = factorials(n);
    const UNSEEN: u32 = u32::MAX;
    let mut parent = vec![UNSEEN; fact[n]];
    let mut via = vec![0u8; fact[n]];

    let unpack = |key: u64, out: &mut [u8]| {
        for (i, c) in out.iter_mut().enumerate() {
            *c = ((key >> (4 * i)) & 0xF) as u8;
        }
    };
    let goal_rank = 0;
    let start_cells: Vec<u8> = board.raw_cells().iter().map(|&l| l - 1).collect();
    let start_rank = permutation_rank(&start_cells, &fact);
    parent[start_rank] = start_rank as u32;

    let mut nodes = 0u64;
    let mut queue = VecDeque::new();
    queue.push_back((pack(board.raw_cells()), board.blank_position() - 1));
    let mut cells = vec![0u8; n];
    let mut found = start_rank == goal_rank;
    while !found {
        let Some((key, blank)) = queue.pop_front() else {
            unreachable!("goal not reachable from a solvable board");
        };
        nodes += 1;
        if limits.max_nodes.is_some_and(|max| nodes > max) {
            return Err(SolveError::LimitExceeded {
                limit: Limit::Nodes,
                nodes_expanded: nodes,
            });
        }
        if let Some(max) = limits.max_time {
            if nodes.is_multiple_of(TIME_CHECK_INTERVAL) && started.elapsed() > max {
                return Err(SolveError::LimitExceeded {
                    limit: Limit::Time,
                    nodes_expanded: nodes,
                });
            }
        }
        unpack(key, &mut cells);
        let rank = permutation_rank(&cells, &fact);
        for m in Move::ALL {
            let Some(target) = m.target(blank, width, height) else {
                continue;
            };
            cells.swap(blank, target);
            let child = permutation_rank(&cells, &fact);
            if parent[child] == UNSEEN {
                parent[child] = rank as u32;
                via[child] = m.index() as u8;
                // same layout as pack(): four bits of label - 1 per cell
                let child_key = cells
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &c)| acc | (u64::from(c) << (4 * i)));
                queue.push_back((child_key, target));
                if child == goal_rank {
                    found = true;
                    cells.swap(blank, target);
                    break;
                }
            }
            cells.swap(blank, target);
        }
    }

    let mut moves = Vec::new();
    let mut at = goal_rank;
    while at != start_rank {
        moves.push(Move::ALL[via[at] as usize]);
        at = parent[at] as usize;
    }
    moves.reverse();
    if let Some(max) = limits.max_depth {
        if moves.len() > max {
            return Err(SolveError::LimitExceeded {
                limit: Limit::Depth,
                nodes_expanded: nodes,
            });
        }
    }
    Ok(SearchResult {
        moves: MoveSequence(moves),
        nodes_expanded: nodes,
        elapsed: started.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdb::PatternDatabase;
    use crate::solvability::is_solvable;

    const LLOYD: &str = "1 2 3 4\n5 6 7 8\n9 10 11 12\n13 15 14 0";

    fn board(s: &str) -> Board {
        s.parse().unwrap()
    }

    /// Per-tile taxicab sum computed from coordinates alone.
    fn manhattan_oracle(b: &Board) -> u32 {
        let (w, n) = (b.width(), b.len());
        b.cells()
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l != n)
            .map(|(cell, &l)| {
                let (r, c) = (cell / w, cell % w);
                let (gr, gc) = ((l - 1) / w, (l - 1) % w);
                (r.abs_diff(gr) + c.abs_diff(gc)) as u32
            })
            .sum()
    }

    #[test]
    fn manhattan_examples() {
        let g = Board::goal(4, 4).unwrap();
        assert_eq!(manhattan(&g), 0);
        let lloyd = board(LLOYD);
        assert_eq!(manhattan_oracle(&lloyd), 2);
        assert_eq!(manhattan(&lloyd), 2);
        assert_eq!(manhattan(&g.apply_move(Move::BlankUp).unwrap()), 1);
        for seed in 0..50 {
            let (b, _) = Board::scramble(4, 4, 60, seed).unwrap();
            assert_eq!(manhattan(&b), manhattan_oracle(&b));
        }
    }

    #[test]
    fn linear_conflict_examples() {
        assert_eq!(linear_conflict(&Board::goal(4, 4).unwrap()), 0);
        assert_eq!(linear_conflict(&board(LLOYD)), 4);
        // No tile shares a goal row or column with another tile in its line.
        let b = board("0 5 9 13\n2 6 10 14\n3 7 11 15\n4 8 12 1");
        assert_eq!(linear_conflict(&b), manhattan(&b));
        // Three reversed tiles in their goal row need two of them to leave.
        let b = board("3 2 1\n4 5 6\n7 8 0");
        assert_eq!(manhattan(&b), 4);
        assert_eq!(linear_conflict(&b), 8);
    }

    #[test]
    fn incremental_estimators_match_fresh_ones() {
        let dbs: Vec<PatternDatabase> = [[1usize, 2, 3, 4], [5, 6, 7, 8]]
            .iter()
            .map(|t| PatternDatabase::build(3, 3, t).unwrap())
            .collect();
        for (w, h) in [(3, 3), (4, 4), (2, 5)] {
            let (start, _) = Board::scramble(w, h, 10, 7).unwrap();
            let mut grid = Grid::new(&start);
            let mut md = ManhattanEstimator::new(&grid);
            let mut lc = LinearConflictEstimator::new(&grid);
            let mut pe = ((w, h) == (3, 3)).then(|| PdbEstimator::new(&grid, &dbs));
            let (_, walk) = Board::scramble(w, h, 300, 11).unwrap();
            let mut b = start.clone();
            for &m in walk.iter() {
                let Ok(tile) = b.moved_tile(m) else { continue };
                let from = b.raw_cells().iter().position(|&l| l as usize == tile).unwrap();
                let to = b.blank_position() - 1;
                b.apply_move_in_place(m).unwrap();
                grid = Grid::new(&b);
                let t = (tile - 1) as u8;
                md.update(&grid, t, from, to);
                lc.update(&grid, t, from, to);
                if let Some(pe) = pe.as_mut() {
                    pe.update(&grid, t, from, to);
                    assert_eq!(pe.value(), pdb_heuristic(&b, &dbs).unwrap());
                }
                assert_eq!(md.value(), manhattan(&b));
                assert_eq!(lc.value(), linear_conflict(&b));
            }
        }
    }

    #[test]
    fn undo_restores_values() {
        let (b, _) = Board::scramble(4, 4, 40, 3).unwrap();
        let grid = Grid::new(&b);
        let mut lc = LinearConflictEstimator::new(&grid);
        let before = lc.value();
        let m = b.legal_moves()[0];
        let tile = b.moved_tile(m).unwrap();
        let from = b.raw_cells().iter().position(|&l| l as usize == tile).unwrap();
        let moved = b.apply_move(m).unwrap();
        let undo = lc.update(&Grid::new(&moved), (tile - 1) as u8, from, b.blank_position() - 1);
        assert_eq!(lc.value(), linear_conflict(&moved));
        lc.undo(undo);
        assert_eq!(lc.value(), before);
        assert_eq!(lc.rows, LinearConflictEstimator::new(&grid).rows);
        assert_eq!(lc.cols, LinearConflictEstimator::new(&grid).cols);
    }

    #[test]
    fn goal_needs_no_search() {
        let g = Board::goal(4, 4).unwrap();
        for h in [Heuristic::Manhattan, Heuristic::LinearConflict] {
            let r = ida_star(&g, h, &SearchLimits::default()).unwrap();
            assert_eq!(r.length(), 0);
            assert!(r.nodes_expanded <= 1);
        }
        let r = bfs_optimal(&Board::goal(3, 3).unwrap(), &SearchLimits::default()).unwrap();
        assert_eq!(r.length(), 0);
    }

    #[test]
    fn one_move_away() {
        let g = Board::goal(3, 3).unwrap();
        let b = g.apply_move(Move::BlankLeft).unwrap();
        let r = bfs_optimal(&b, &SearchLimits::default()).unwrap();
        assert_eq!(r.moves.0, vec![Move::BlankRight]);
        let r = ida_star(&b, Heuristic::LinearConflict, &SearchLimits::default()).unwrap();
        assert_eq!(r.moves.0, vec![Move::BlankRight]);
    }

    #[test]
    fn unsolvable_boards_are_rejected_without_search() {
        let lloyd = board(LLOYD);
        match ida_star(&lloyd, Heuristic::LinearConflict, &SearchLimits::default()) {
            Err(SolveError::Unsolvable(cert)) => assert!(!cert.solvable),
            other => panic!("expected unsolvable, got {other:?}"),
        }
        let b = board("2 1 3\n4 5 6\n7 8 0");
        assert!(matches!(
            bfs_optimal(&b, &SearchLimits::default()),
            Err(SolveError::Unsolvable(_))
        ));
    }

    #[test]
    fn ida_matches_bfs_on_2x3() {
        let dbs = vec![PatternDatabase::build(3, 2, &[1, 2, 3, 4, 5]).unwrap()];
        let mut tested = 0;
        let mut cells: Vec<usize> = (1..=6).collect();
        // Heap's algorithm over all 720 arrangements.
        let mut c = [0usize; 6];
        let mut check = |cells: &[usize]| {
            let b = Board::from_cells(3, 2, cells).unwrap();
            if !is_solvable(&b) {
                return;
            }
            let exact = bfs_optimal(&b, &SearchLimits::default()).unwrap();
            assert!(b.apply_sequence(&exact.moves).unwrap().is_goal());
            for h in [
                Heuristic::Manhattan,
                Heuristic::LinearConflict,
                Heuristic::PatternDatabases(&dbs),
            ] {
                let r = ida_star(&b, h, &SearchLimits::default()).unwrap();
                assert_eq!(r.length(), exact.length(), "{} on {b}", h.name());
                assert!(b.apply_sequence(&r.moves).unwrap().is_goal());
            }
            tested += 1;
        };
        check(&cells);
        let mut i = 0;
        while i < 6 {
            if c[i] < i {
                if i % 2 == 0 {
                    cells.swap(0, i);
                } else {
                    cells.swap(c[i], i);
                }
                check(&cells);
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        assert_eq!(tested, 360);
    }

    #[test]
    fn limits_abort() {
        let (b, _) = Board::scramble(4, 4, 60, 1).unwrap();
        let limits = SearchLimits {
            max_nodes: Some(10),
            ..SearchLimits::default()
        };
        match ida_star(&b, Heuristic::Manhattan, &limits) {
            Err(SolveError::LimitExceeded {
                limit: Limit::Nodes,
                nodes_expanded,
            }) => assert_eq!(nodes_expanded, 11),
            other => panic!("expected node limit, got {other:?}"),
        }
        let limits = SearchLimits {
            max_depth: Some(3),
            ..SearchLimits::default()
        };
        assert!(matches!(
            ida_star(&b, Heuristic::Manhattan, &limits),
            Err(SolveError::LimitExceeded { limit: Limit::Depth, .. })
        ));
        let limits = SearchLimits {
            max_time: Some(Duration::ZERO),
            ..SearchLimits::default()
        };
        assert!(matches!(
            ida_star(&b, Heuristic::Manhattan, &limits),
            Err(SolveError::LimitExceeded { limit: Limit::Time, .. })
        ));
        assert!(matches!(
            bfs_optimal(&b, &SearchLimits::default()),
            Err(SolveError::LimitExceeded { limit: Limit::Cells, .. })
        ));
    }

    #[test]
    fn pdb_heuristic_must_match_board() {
        let dbs = vec![PatternDatabase::build(3, 3, &[1, 2]).unwrap()];
        let b = Board::goal(4, 4).unwrap().apply_move(Move::BlankUp).unwrap();
        assert!(matches!(
            ida_star(&b, Heuristic::PatternDatabases(&dbs), &SearchLimits::default()),
            Err(SolveError::Pdb(PdbError::DimensionMismatch { .. }))
        ));
    }

    #[test]
    fn rank_is_lehmer_code() {
        let fact = factorials(4);
        assert_eq!(permutation_rank(&[0, 1, 2, 3], &fact), 0);
        assert_eq!(permutation_rank(&[3, 2, 1, 0], &fact), 23);
        assert_eq!(permutation_rank(&[1, 0, 2, 3], &fact), 6);
    }
}

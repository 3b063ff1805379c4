use permslide::pdb::{default_partition, pdb_heuristic, PatternDatabase, PdbError};
use permslide::solvability::{reachable_set, verify_sequence, EnumerationLimits};
use permslide::solver::{bfs_optimal, ida_star, linear_conflict, manhattan, Heuristic, SearchLimits};
use permslide::Board;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_solvable(rng: &mut ChaCha8Rng, w: usize, h: usize) -> Board {
    loop {
        let n = w * h;
        let mut cells: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            cells.swap(i, rng.random_range(0..=i));
        }
        let b = Board::from_cells(w, h, &cells).unwrap();
        if permslide::solvability::is_solvable(&b) {
            return b;
        }
    }
}

fn pdbs_3x3() -> Vec<PatternDatabase> {
    default_partition(3, 3, 4)
        .iter()
        .map(|t| PatternDatabase::build(3, 3, t).unwrap())
        .collect()
}

#[test]
fn heuristics_are_admissible_and_ordered() {
    let exact = reachable_set(3, 3, &EnumerationLimits::default()).unwrap();
    let dbs = pdbs_3x3();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..2000 {
        let b = random_solvable(&mut rng, 3, 3);
        let d = exact.distance(&b).unwrap() as u32;
        let md = manhattan(&b);
        let lc = linear_conflict(&b);
        assert!(md <= lc && lc <= d, "{b}: md {md} lc {lc} d {d}");
        assert!(pdb_heuristic(&b, &dbs).unwrap() <= d);
    }
}

#[test]
fn pdb_entries_bounded_by_diameter() {
    let db = PatternDatabase::build(3, 3, &[1, 2, 3]).unwrap();
    assert!(db.table().iter().all(|&d| d <= 31));
}

#[test]
fn full_pattern_on_2x2_is_exact() {
    let db = vec![PatternDatabase::build(2, 2, &[1, 2, 3]).unwrap()];
    let reach = reachable_set(2, 2, &EnumerationLimits::default()).unwrap();
    for seed in 0..40 {
        let (b, _) = Board::scramble(2, 2, seed as usize, seed).unwrap();
        let exact = bfs_optimal(&b, &SearchLimits::default()).unwrap().length();
        assert_eq!(exact, reach.distance(&b).unwrap());
        assert_eq!(pdb_heuristic(&b, &db).unwrap() as usize, exact);
    }
}

#[test]
fn linear_conflict_never_expands_more_than_manhattan() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let limits = SearchLimits::default();
    for _ in 0..100 {
        let b = random_solvable(&mut rng, 3, 3);
        let md = ida_star(&b, Heuristic::Manhattan, &limits).unwrap();
        let lc = ida_star(&b, Heuristic::LinearConflict, &limits).unwrap();
        assert_eq!(md.length(), lc.length());
        assert!(lc.nodes_expanded <= md.nodes_expanded, "{b}");
    }
    for seed in 0..10 {
        let (b, _) = Board::scramble(4, 4, 30, seed).unwrap();
        let md = ida_star(&b, Heuristic::Manhattan, &limits).unwrap();
        let lc = ida_star(&b, Heuristic::LinearConflict, &limits).unwrap();
        assert_eq!(md.length(), lc.length());
        assert!(lc.nodes_expanded <= md.nodes_expanded);
    }
}

#[test]
fn ida_is_deterministic() {
    let (b, _) = Board::scramble(4, 4, 40, 3).unwrap();
    let limits = SearchLimits::default();
    let first = ida_star(&b, Heuristic::LinearConflict, &limits).unwrap();
    let second = ida_star(&b, Heuristic::LinearConflict, &limits).unwrap();
    assert_eq!(first.moves, second.moves);
    assert_eq!(first.nodes_expanded, second.nodes_expanded);
}

#[test]
fn scrambled_4x4_solutions_replay_within_witness() {
    let limits = SearchLimits::default();
    for seed in 0..20 {
        let (b, walk) = Board::scramble(4, 4, 30, seed).unwrap();
        let r = ida_star(&b, Heuristic::LinearConflict, &limits).unwrap();
        assert!(r.length() <= walk.len());
        assert!(r.length() as u32 >= linear_conflict(&b));
        assert!(verify_sequence(&b, &r.moves).unwrap().solved);
    }
}

#[test]
fn pdb_4x4_small_patterns_guide_search() {
    let dbs: Vec<PatternDatabase> = [vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]
        .iter()
        .map(|t| PatternDatabase::build(4, 4, t).unwrap())
        .collect();
    let limits = SearchLimits::default();
    for seed in 0..5 {
        let (b, _) = Board::scramble(4, 4, 25, seed).unwrap();
        let lc = ida_star(&b, Heuristic::LinearConflict, &limits).unwrap();
        let pdb = ida_star(&b, Heuristic::PatternDatabases(&dbs), &limits).unwrap();
        assert_eq!(lc.length(), pdb.length());
        assert!(verify_sequence(&b, &pdb.moves).unwrap().solved);
    }
}

#[test]
fn pdb_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.pdb");
    let db = PatternDatabase::build(3, 3, &[5, 6, 7, 8]).unwrap();
    db.save(&path).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(bytes, db.to_bytes());
    assert_eq!(PatternDatabase::load(&path).unwrap(), db);

    std::fs::write(&path, &bytes[..bytes.len() - 1]).unwrap();
    assert!(matches!(
        PatternDatabase::load(&path),
        Err(PdbError::TableLength { .. })
    ));
    let mut bad = bytes.clone();
    bad[..4].copy_from_slice(b"XPDB");
    std::fs::write(&path, &bad).unwrap();
    assert!(matches!(PatternDatabase::load(&path), Err(PdbError::BadMagic(_))));
    assert!(matches!(
        PatternDatabase::load(dir.path().join("missing")),
        Err(PdbError::Io(_))
    ));
}

//! `permslide` command-line front end.
//!
//! Exit codes: 0 success or solvable, 1 unsolvable or not solved, 2 input
//! error, 3 resource limit.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use permslide::pdb::{default_databases, PatternDatabase, PdbError};
use permslide::solvability::{
    certificate, reachable_states, verify_sequence, EnumerationError, EnumerationLimits,
};
use permslide::solver::{ida_star, Heuristic, SearchLimits, SolveError};
use permslide::{Board, MoveSequence, Notation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNSOLVABLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

const MOVES_HELP: &str = "Moves are written as U, D, L, R and name the direction the BLANK travels \
(the slid tile moves the opposite way). Boards are rows of space-separated tiles with 0 or _ for the blank.";

#[derive(Debug, Parser)]
#[command(name = "permslide", version, about = "Sliding-tile puzzles as permutations", after_help = MOVES_HELP)]
#[command(disable_help_flag = true)]
pub struct Cli {
    #[arg(long, action = ArgAction::Help, global = true, help = "Print help")]
    help: Option<bool>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Dims {
    #[arg(short = 'w', long, default_value_t = 4)]
    width: usize,
    #[arg(short = 'h', long, default_value_t = 4)]
    height: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum HeuristicName {
    Manhattan,
    LinearConflict,
    Pdb,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the parity certificate; exit 0 if solvable, 1 if not.
    #[command(disable_help_flag = true)]
    Solvable {
        /// Board file, or - for standard input.
        #[arg(default_value = "-")]
        input: String,
    },
    /// Print the board's permutation in cycle notation.
    #[command(disable_help_flag = true)]
    Cycles {
        /// Board file, or - for standard input.
        #[arg(default_value = "-")]
        input: String,
        /// Also print two-line notation.
        #[arg(long)]
        two_line: bool,
    },
    /// Find an optimal move sequence with IDA*.
    #[command(disable_help_flag = true, after_help = MOVES_HELP)]
    Solve {
        /// Board file, or - for standard input.
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value_t = HeuristicName::LinearConflict)]
        heuristic: HeuristicName,
        /// Pattern database file (repeatable). Without any, `--heuristic pdb`
        /// builds a default partition in memory.
        #[arg(long = "pdb")]
        pdbs: Vec<PathBuf>,
        #[arg(long)]
        max_nodes: Option<u64>,
        /// Seconds.
        #[arg(long)]
        max_time: Option<f64>,
        #[arg(long)]
        max_depth: Option<usize>,
    },
    /// Print a board reached by random moves from the goal.
    #[command(disable_help_flag = true)]
    Scramble {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Replay moves on a board; exit 0 iff the goal is reached.
    #[command(disable_help_flag = true, after_help = MOVES_HELP)]
    Verify {
        /// Board file, or - for standard input.
        #[arg(default_value = "-")]
        input: String,
        /// Moves file, or - for standard input. `key=value` lines are ignored.
        #[arg(long)]
        moves: String,
    },
    /// Count boards reachable from the goal and the largest distance.
    #[command(disable_help_flag = true)]
    Enumerate {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, default_value_t = EnumerationLimits::default().max_cells)]
        max_cells: usize,
    },
    /// Build a pattern database and write it to disk.
    #[command(name = "pdb-build", disable_help_flag = true)]
    PdbBuild {
        #[command(flatten)]
        dims: Dims,
        /// Comma-separated tile labels.
        #[arg(long, value_delimiter = ',', required = true)]
        tiles: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Failure carrying its exit code; the message goes to the error stream.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }

    fn resource(message: impl ToString) -> Self {
        Failure {
            code: EXIT_RESOURCE,
            message: message.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::input(e)
    }
}

impl From<PdbError> for Failure {
    fn from(e: PdbError) -> Self {
        match e {
            PdbError::MemoryLimit { .. } => Failure::resource(e),
            _ => Failure::input(e),
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn read_source(&mut self, source: &str) -> Result<String, Failure> {
        if source == "-" {
            let mut text = String::new();
            self.stdin.read_to_string(&mut text)?;
            Ok(text)
        } else {
            fs::read_to_string(source).map_err(|e| Failure::input(format!("{source}: {e}")))
        }
    }

    fn read_board(&mut self, source: &str) -> Result<Board, Failure> {
        self.read_source(source)?
            .parse()
            .map_err(|e| Failure::input(format!("invalid board: {e}")))
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut io = Io { stdin, out };
    match execute(cli.command, &mut io) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn execute(command: Command, io: &mut Io<'_>) -> Result<i32, Failure> {
    match command {
        Command::Solvable { input } => {
            let board = io.read_board(&input)?;
            let cert = certificate(&board);
            writeln!(io.out, "{cert}")?;
            Ok(if cert.solvable { EXIT_OK } else { EXIT_UNSOLVABLE })
        }
        Command::Cycles { input, two_line } => {
            let p = io.read_board(&input)?.to_permutation();
            writeln!(io.out, "{}", p.format(Notation::Cycle))?;
            if two_line {
                writeln!(io.out, "{}", p.format(Notation::TwoLine))?;
            }
            Ok(EXIT_OK)
        }
        Command::Solve {
            input,
            heuristic,
            pdbs,
            max_nodes,
            max_time,
            max_depth,
        } => {
            let board = io.read_board(&input)?;
            let max_time = match max_time {
                Some(s) => Some(
                    Duration::try_from_secs_f64(s)
                        .map_err(|e| Failure::input(format!("--max-time: {e}")))?,
                ),
                None => None,
            };
            let limits = SearchLimits {
                max_nodes,
                max_time,
                max_depth,
            };
            solve(io, &board, heuristic, &pdbs, &limits)
        }
        Command::Scramble { dims, steps, seed } => {
            let (board, _) = Board::scramble(dims.width, dims.height, steps, seed)
                .map_err(Failure::input)?;
            writeln!(io.out, "{board}")?;
            Ok(EXIT_OK)
        }
        Command::Verify { input, moves } => {
            if input == "-" && moves == "-" {
                return Err(Failure::input("board and moves cannot both come from standard input"));
            }
            let board = io.read_board(&input)?;
            let seq: MoveSequence = io
                .read_source(&moves)?
                .parse()
                .map_err(|e| Failure::input(format!("invalid moves: {e}")))?;
            match verify_sequence(&board, &seq) {
                Ok(v) => {
                    writeln!(io.out, "solved={}\nlength={}", v.solved, seq.len())?;
                    Ok(if v.solved { EXIT_OK } else { EXIT_UNSOLVABLE })
                }
                Err(e) => {
                    writeln!(io.out, "solved=false")?;
                    Err(Failure {
                        code: EXIT_UNSOLVABLE,
                        message: e.to_string(),
                    })
                }
            }
        }
        Command::Enumerate { dims, max_cells } => {
            let limits = EnumerationLimits {
                max_cells,
                ..EnumerationLimits::default()
            };
            match reachable_states(dims.width, dims.height, &limits) {
                Ok(e) => {
                    writeln!(io.out, "count={} max_depth={}", e.count, e.max_depth)?;
                    Ok(EXIT_OK)
                }
                Err(e @ EnumerationError::Board(_)) => Err(Failure::input(e)),
                Err(e) => Err(Failure::resource(e)),
            }
        }
        Command::PdbBuild { dims, tiles, out } => {
            let db = PatternDatabase::build(dims.width, dims.height, &tiles)?;
            db.save(&out)?;
            let max = db
                .table()
                .iter()
                .filter(|&&d| d != permslide::pdb::UNREACHABLE)
                .max()
                .copied()
                .unwrap_or(0);
            writeln!(io.out, "entries={} max={} path={}", db.len(), max, out.display())?;
            Ok(EXIT_OK)
        }
    }
}

fn solve(
    io: &mut Io<'_>,
    board: &Board,
    heuristic: HeuristicName,
    pdb_paths: &[PathBuf],
    limits: &SearchLimits,
) -> Result<i32, Failure> {
    let cert = certificate(board);
    if !cert.solvable {
        writeln!(io.out, "{cert}")?;
        return Err(Failure {
            code: EXIT_UNSOLVABLE,
            message: "board is unsolvable".into(),
        });
    }
    let databases = match heuristic {
        HeuristicName::Pdb if pdb_paths.is_empty() => default_databases(board.width(), board.height())?,
        HeuristicName::Pdb => pdb_paths
            .iter()
            .map(|p| {
                PatternDatabase::load(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))
            })
            .collect::<Result<Vec<_>, _>>()?,
        _ => Vec::new(),
    };
    let h = match heuristic {
        HeuristicName::Manhattan => Heuristic::Manhattan,
        HeuristicName::LinearConflict => Heuristic::LinearConflict,
        HeuristicName::Pdb => Heuristic::PatternDatabases(&databases),
    };
    match ida_star(board, h, limits) {
        Ok(r) => {
            writeln!(io.out, "{}", r.moves)?;
            writeln!(
                io.out,
                "length={} nodes={} time={:.6}",
                r.length(),
                r.nodes_expanded,
                r.elapsed.as_secs_f64()
            )?;
            Ok(EXIT_OK)
        }
        Err(SolveError::Unsolvable(cert)) => {
            writeln!(io.out, "{cert}")?;
            Err(Failure {
                code: EXIT_UNSOLVABLE,
                message: "board is unsolvable".into(),
            })
        }
        Err(e @ SolveError::LimitExceeded { .. }) => Err(Failure::resource(e)),
        Err(SolveError::Pdb(e)) => Err(e.into()),
    }
}

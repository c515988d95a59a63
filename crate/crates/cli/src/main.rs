use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use moo_core::bounds::{Bounds, MaxNodesTable};
use moo_core::code::{naive_product, GameParams, Response};
use moo_core::game::{enumerate_codes, Game};
use moo_core::heuristics::{greedy_strategy, Scorer};
use moo_core::oracle::Oracle;
use moo_core::solver::{
    best_response_winrate, eval_table, fixed_point_check, solve_initial_min, RootOptions, RootSolution,
    SolverConfig,
};
use moo_core::strategy::{
    distribution, from_document, match_winrate, to_document, verify, GuessDistribution, Session, Step,
    StrategyTree,
};

#[derive(Parser)]
#[command(name = "moo", version, about = "Exact strategies for the MOO (bulls and cows) game")]
struct Cli {
    #[command(flatten)]
    game: GameArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct GameArgs {
    /// Number of distinct symbols.
    #[arg(long, global = true, default_value_t = 10)]
    symbols: usize,
    /// Code length.
    #[arg(long, global = true, default_value_t = 4)]
    positions: usize,
}

#[derive(Args, Clone)]
struct SolveArgs {
    /// Response groups of the opening guess to solve (class indices 0-13,
    /// comma separated). All groups by default.
    #[arg(long, value_delimiter = ',')]
    groups: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Write the strategy document here.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Precompute the full product table (about 25 MB for the standard game).
    #[arg(long)]
    full_table: bool,
    /// Apply symmetry reduction while at most this many guesses were asked.
    #[arg(long)]
    symmetry_depth: Option<usize>,
    /// Give up after this many seconds.
    #[arg(long)]
    time_limit: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the strategy with the fewest total guesses.
    SolveMin(SolveArgs),
    /// Solve the strategy with the best win rate against a distribution.
    SolveStrongest {
        /// Opponent distribution (file or literal counts).
        #[arg(long)]
        vs: String,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Replay a strategy over every secret and report defects.
    Verify { tree: PathBuf },
    /// Print the guess-count distribution of a strategy.
    Dist {
        tree: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Win rate of one distribution against another.
    Match { a: String, b: String },
    /// Print the max-nodes table and the lower-bound segments.
    Bounds {
        /// Recompute the table instead of using shipped constants.
        #[arg(long)]
        recompute: bool,
    },
    /// Build a greedy strategy from a scoring function.
    Heuristic {
        /// larmouth, landy-max, landy-log1p or landy-xx
        #[arg(long)]
        scorer: Scorer,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Brute-force solve a small game.
    Oracle {
        /// Also solve the best response to this distribution.
        #[arg(long)]
        vs: Option<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check whether a strategy is its own best response.
    FixedPoint {
        tree: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        full_table: bool,
    },
    /// Play a strategy over stdin/stdout: prints "GUESS 0123", reads "2C".
    PlayEngine {
        tree: PathBuf,
        /// Answer the engine's own guesses for a seeded random secret.
        #[arg(long)]
        random_secret: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn params(g: GameArgs) -> Result<GameParams> {
    Ok(GameParams::new(g.symbols, g.positions)?)
}

fn load_tree(path: &Path) -> Result<StrategyTree> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    from_document(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A distribution given as a file or directly as counts.
fn load_distribution(arg: &str) -> Result<GuessDistribution> {
    let text = match fs::read_to_string(arg) {
        Ok(t) => t,
        Err(_) if !Path::new(arg).exists() => arg.to_string(),
        Err(e) => return Err(e).with_context(|| format!("reading {arg}")),
    };
    text.parse()
        .with_context(|| format!("distribution '{}'", arg))
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn build_game(p: GameParams, full_table: bool) -> Game {
    let g = Game::new(p);
    if full_table {
        g.with_full_table()
    } else {
        g
    }
}

fn root_options(s: &SolveArgs) -> Result<RootOptions> {
    if s.workers == 0 {
        bail!("--workers must be at least 1");
    }
    let mut config = SolverConfig::default();
    if let Some(d) = s.symmetry_depth {
        config.symmetry_depth = d;
    }
    Ok(RootOptions {
        config,
        groups: s.groups.clone(),
        workers: s.workers,
        deadline: s.time_limit.map(|t| Instant::now() + Duration::from_secs(t)),
    })
}

fn emit_solution(sol: &RootSolution, output: Option<&PathBuf>) -> Result<()> {
    println!("{sol}");
    if sol.complete {
        println!("distribution: {}", sol.distribution());
    }
    if let Some(path) = output {
        write_out(path, &to_document(&sol.tree()))?;
        println!("strategy written to {}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let p = params(cli.game)?;
    match cli.command {
        Command::SolveMin(s) => {
            let game = build_game(p, s.full_table);
            let bounds = Bounds::for_game(&game);
            let sol = solve_initial_min(&game, &bounds, &root_options(&s)?)?;
            emit_solution(&sol, s.output.as_ref())?;
        }
        Command::SolveStrongest { vs, solve } => {
            let opponent = load_distribution(&vs)?;
            if opponent.space() as usize != p.code_count() {
                bail!("the distribution covers {} secrets, the game has {}", opponent.space(), p.code_count());
            }
            let game = build_game(p, solve.full_table);
            let bounds = Bounds::for_game(&game);
            let best = best_response_winrate(&game, &bounds, &opponent, &root_options(&solve)?)?;
            println!("gamma: {:?}", best.eval.gamma_row());
            emit_solution(&best.solution, solve.output.as_ref())?;
            println!("value: {}", best.solution.value());
            if best.solution.complete {
                println!("win rate: {:.7}", best.win_rate);
            }
        }
        Command::Verify { tree } => {
            let report = verify(&load_tree(&tree)?, p);
            print!("{report}");
            if !report.is_valid() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Dist { tree, output } => {
            let d = distribution(&load_tree(&tree)?, p)?;
            println!("{d}");
            if let Some(path) = output {
                write_out(&path, &format!("{d}\n"))?;
            }
        }
        Command::Match { a, b } => {
            let rate: f64 = match_winrate(&load_distribution(&a)?, &load_distribution(&b)?)?;
            println!("{rate:.7}");
        }
        Command::Bounds { recompute } => {
            let game = Game::new(p);
            let table = if recompute || p != GameParams::standard() {
                MaxNodesTable::compute(&game)
            } else {
                MaxNodesTable::standard()
            };
            print!("{table}");
            let bounds = Bounds::new(table.clone());
            println!();
            for k in table.min_kinds()..=table.max_kinds() {
                let segs: Vec<String> = bounds
                    .segments(k)
                    .segments()
                    .iter()
                    .map(|s| {
                        let range = match s.last {
                            Some(l) => format!("{}..{}", s.first, l),
                            None => format!("{}..", s.first),
                        };
                        format!("{range}: {}n{:+}", s.slope, s.intercept)
                    })
                    .collect();
                println!("kinds {k}: {}", segs.join(" | "));
            }
        }
        Command::Heuristic { scorer, output } => {
            let game = Game::new(p);
            let tree = greedy_strategy(&game, scorer);
            let report = verify(&tree, p);
            println!("scorer: {scorer}");
            print!("{report}");
            if let Some(path) = output {
                write_out(&path, &to_document(&tree))?;
            }
        }
        Command::Oracle { vs, output } => {
            let mut oracle = Oracle::new(p);
            let full = oracle.full_set();
            let total = oracle.min_total(&full);
            println!("codes: {}", full.len());
            println!("minimum total: {total}");
            println!("average: {:.4}", total as f64 / full.len() as f64);
            let mut tree = oracle.min_tree(&full);
            println!("distribution: {}", distribution(&tree, p)?);
            if let Some(vs) = vs {
                let opponent = load_distribution(&vs)?;
                let eval = eval_table(&opponent);
                let value = oracle.max_eval(&full, 1, &eval);
                tree = oracle.eval_tree(&full, 1, &eval);
                println!("best response value: {value}");
                println!("best response win rate: {:.7}", eval.win_rate(value));
                println!("best response distribution: {}", distribution(&tree, p)?);
            }
            if let Some(path) = output {
                write_out(&path, &to_document(&tree))?;
            }
        }
        Command::FixedPoint {
            tree,
            workers,
            full_table,
        } => {
            let strategy = load_tree(&tree)?;
            let report = verify(&strategy, p);
            if !report.is_valid() {
                print!("{report}");
                bail!("the strategy does not verify");
            }
            let game = build_game(p, full_table);
            let bounds = Bounds::for_game(&game);
            let options = RootOptions {
                workers,
                ..RootOptions::default()
            };
            let fp = fixed_point_check(&game, &bounds, &strategy, &options)?;
            println!("own value: {}", fp.own_value);
            println!("best response value: {}", fp.best_value);
            println!("best response win rate: {:.7}", fp.best_response_rate);
            println!("best response distribution: {}", fp.best_response.distribution());
            println!("fixed point: {}", fp.is_fixed_point);
        }
        Command::PlayEngine {
            tree,
            random_secret,
            seed,
        } => {
            let strategy = load_tree(&tree)?;
            return if random_secret {
                self_play(&strategy, p, seed)
            } else {
                play(&strategy, p, io::stdin().lock(), io::stdout().lock())
            };
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Line protocol: `GUESS <code>` out, a response line in, until solved.
fn play(strategy: &StrategyTree, p: GameParams, input: impl BufRead, mut out: impl Write) -> Result<ExitCode> {
    let mut session = Session::new(strategy, p);
    let mut lines = input.lines();
    writeln!(out, "GUESS {}", strategy.guess)?;
    out.flush()?;
    loop {
        let Some(line) = lines.next() else {
            bail!("input ended before the secret was found");
        };
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let response: Response = match text.parse() {
            Ok(r) => r,
            Err(e) => {
                writeln!(out, "ERROR {e}")?;
                out.flush()?;
                continue;
            }
        };
        match session.respond(response) {
            Ok(Step::Guess(g)) => writeln!(out, "GUESS {g}")?,
            Ok(Step::Solved(n)) => {
                writeln!(out, "SOLVED {n}")?;
                return Ok(ExitCode::SUCCESS);
            }
            Err(e) => {
                writeln!(out, "ERROR {e}")?;
                out.flush()?;
                eprintln!("{e}");
                return Ok(ExitCode::FAILURE);
            }
        }
        out.flush()?;
    }
}

fn self_play(strategy: &StrategyTree, p: GameParams, seed: u64) -> Result<ExitCode> {
    let codes = enumerate_codes(p);
    let secret = codes[ChaCha8Rng::seed_from_u64(seed).gen_range(0..codes.len())];
    println!("SECRET {secret}");
    let mut session = Session::new(strategy, p);
    while let Some(g) = session.guess() {
        println!("GUESS {g}");
        let r = naive_product(g, secret);
        println!("{r}");
        match session.respond(r)? {
            Step::Guess(_) => {}
            Step::Solved(n) => println!("SOLVED {n}"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

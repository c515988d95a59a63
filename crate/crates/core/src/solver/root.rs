//! Whole-game solves. The first guess is fixed to the only canonical opening
//! and each of its response groups is solved as an independent work unit.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::bounds::Bounds;
use crate::code::{Code, Response};
use crate::game::{CandidateSet, Game};
use crate::solver::eval::{eval_table, EvalTable};
use crate::solver::search::{Objective, Search, SearchStats, SolverConfig};
use crate::strategy::{GuessDistribution, StrategyTree};
use crate::symmetry::History;

/// Result for one response group of the opening guess.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupReport {
    /// Class index of the group.
    pub index: usize,
    pub response: Response,
    pub elements: usize,
    /// Second guess, absent for the solved group.
    pub second_guess: Option<Code>,
    /// Guesses after the opening one, summed over the group.
    pub total: u64,
    /// Objective value of the group (negated absolute guess count for the
    /// total objective).
    pub value: i64,
    /// Guess counts of the group's secrets, opening guess included.
    pub distribution: GuessDistribution,
    pub elapsed: Duration,
    pub stats: SearchStats,
    pub subtree: Option<StrategyTree>,
}

/// A whole-game solution, possibly restricted to some groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSolution {
    pub first_guess: Code,
    pub groups: Vec<GroupReport>,
    /// Whether every group was solved.
    pub complete: bool,
}

impl RootSolution {
    /// Total guesses including the opening one for every covered secret.
    pub fn total(&self) -> u64 {
        self.groups
            .iter()
            .map(|g| g.total + g.elements as u64)
            .sum()
    }

    pub fn value(&self) -> i64 {
        self.groups.iter().map(|g| g.value).sum()
    }

    pub fn secrets(&self) -> usize {
        self.groups.iter().map(|g| g.elements).sum()
    }

    pub fn average(&self) -> f64 {
        self.total() as f64 / self.secrets() as f64
    }

    pub fn distribution(&self) -> GuessDistribution {
        let mut d = GuessDistribution::new(Vec::new());
        for g in &self.groups {
            for (i, &c) in g.distribution.counts().iter().enumerate() {
                for _ in 0..c {
                    d.record(i + 1);
                }
            }
        }
        d
    }

    pub fn elapsed(&self) -> Duration {
        self.groups.iter().map(|g| g.elapsed).sum()
    }

    /// Merges the group subtrees under the opening guess.
    pub fn tree(&self) -> StrategyTree {
        let mut t = StrategyTree::leaf(self.first_guess);
        for g in &self.groups {
            if let Some(sub) = &g.subtree {
                t.children.insert(g.response, sub.clone());
            }
        }
        t
    }

    /// Per-group table: response, second guess, elements, subtree total and
    /// elapsed time.
    pub fn report(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RootSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>5} | {:>4} | {:>8} | {:>6} | {:>10} | {:>9}",
            "group", "2nd", "elements", "total", "value", "time (s)"
        )?;
        for g in &self.groups {
            writeln!(
                f,
                "{:>5} | {:>4} | {:>8} | {:>6} | {:>10} | {:>9.2}",
                g.response.to_string(),
                g.second_guess.map(|c| c.to_string()).unwrap_or_default(),
                g.elements,
                g.total,
                g.value,
                g.elapsed.as_secs_f64()
            )?;
        }
        write!(
            f,
            "first guess {} | secrets {} | total {} | average {:.3}",
            self.first_guess,
            self.secrets(),
            self.total(),
            self.average()
        )
    }
}

/// Records the guess number of every member of `members` under `tree`.
fn record_depths(game: &Game, tree: &StrategyTree, members: &[u16], depth: usize, out: &mut GuessDistribution) {
    let g = game.index(tree.guess).expect("guess belongs to the game");
    let buckets = game.partition_indices(members, g);
    for (c, bucket) in buckets.iter().enumerate() {
        if bucket.is_empty() {
            continue;
        }
        if c == 0 {
            out.record(depth);
        } else {
            let sub = tree
                .child(game.classes()[c])
                .expect("solver trees cover their sets");
            record_depths(game, sub, bucket, depth + 1, out);
        }
    }
}

/// Options for a whole-game solve.
#[derive(Debug, Clone)]
pub struct RootOptions {
    pub config: SolverConfig,
    /// Class indices of the opening guess to solve; all when `None`.
    pub groups: Option<Vec<usize>>,
    pub workers: usize,
    /// Give up on groups still running after this instant.
    pub deadline: Option<Instant>,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            config: SolverConfig::default(),
            groups: None,
            workers: 1,
            deadline: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("group {0} does not exist (the opening guess has {1} response groups)")]
    UnknownGroup(usize, usize),
    #[error("no groups requested")]
    NoGroups,
    #[error("the time budget ran out before group {0} was solved")]
    Timeout(Response),
}

/// One independent work unit per requested response group of the opening.
pub fn group_decompose(game: &Game, groups: Option<&[usize]>) -> Result<Vec<(usize, CandidateSet)>, SolveError> {
    let classes = game.num_classes();
    let wanted: Vec<usize> = match groups {
        None => (0..classes).collect(),
        Some([]) => return Err(SolveError::NoGroups),
        Some(g) => {
            if let Some(&bad) = g.iter().find(|&&i| i >= classes) {
                return Err(SolveError::UnknownGroup(bad, classes));
            }
            let mut g = g.to_vec();
            g.sort_unstable();
            g.dedup();
            g
        }
    };
    let first = game.code(0);
    let buckets = game.partition(&game.full_set(), first);
    Ok(wanted
        .into_iter()
        .map(|i| (i, buckets[i].clone()))
        .filter(|(_, set)| !set.is_empty())
        .collect())
}

/// Solves the requested groups of the opening, each with value at least
/// `limits[i]` when limits are given.
fn solve_groups(
    game: &Game,
    bounds: &Bounds,
    objective: &Objective,
    options: &RootOptions,
    limits: Option<&[i64]>,
) -> Result<RootSolution, SolveError> {
    let first = game.code(0);
    let mut units = group_decompose(game, options.groups.as_deref())?;
    // big groups first so the pool stays busy
    units.sort_by_key(|(i, s)| (std::cmp::Reverse(s.len()), *i));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Result<GroupReport, SolveError>>> = Mutex::new(Vec::new());
    let workers = options.workers.max(1).min(units.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let mut search = Search::new(game, bounds, objective, options.config.clone());
                search.set_deadline(options.deadline);
                loop {
                    let k = next.fetch_add(1, Ordering::Relaxed);
                    let Some((index, set)) = units.get(k) else { break };
                    let r = solve_unit(game, &mut search, first, *index, set, limits.map(|l| l[*index]));
                    results.lock().unwrap().push(r);
                }
            });
        }
    });
    let mut groups = results
        .into_inner()
        .unwrap()
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    groups.sort_by_key(|g| g.index);
    let complete = groups.len() == game.num_classes();
    Ok(RootSolution {
        first_guess: first,
        groups,
        complete,
    })
}

fn solve_unit(
    game: &Game,
    search: &mut Search,
    first: Code,
    index: usize,
    set: &CandidateSet,
    limit: Option<i64>,
) -> Result<GroupReport, SolveError> {
    let response = game.classes()[index];
    let started = Instant::now();
    let before = search.stats();
    let mut distribution = GuessDistribution::new(Vec::new());
    let (value, subtree) = if index == 0 {
        distribution.record(1);
        (search.score_of(1), None)
    } else {
        let history: History = [(first, response)].into_iter().collect();
        let solved = search.solve(set, &history, limit.unwrap_or(i64::MIN));
        let solved = solved.ok_or(SolveError::Timeout(response))?;
        record_depths(game, &solved.tree, set.members(), 2, &mut distribution);
        (solved.value, Some(solved.tree))
    };
    let after = search.stats();
    Ok(GroupReport {
        index,
        response,
        elements: set.len(),
        second_guess: subtree.as_ref().map(|t| t.guess),
        total: distribution.total_guesses() - set.len() as u64,
        value,
        distribution,
        elapsed: started.elapsed(),
        stats: SearchStats {
            nodes: after.nodes - before.nodes,
            expanded: after.expanded - before.expanded,
            evaluated: after.evaluated - before.evaluated,
        },
        subtree,
    })
}

/// Fewest total guesses for `set` after `history`, counting the guesses
/// still to be asked. With an incumbent, only strictly better totals are
/// returned.
pub fn solve_min_total(
    game: &Game,
    bounds: &Bounds,
    set: &CandidateSet,
    history: &History,
    incumbent: Option<u64>,
    config: SolverConfig,
) -> Option<(u64, StrategyTree)> {
    let shift = (set.len() * history.len()) as i64;
    let limit = incumbent.map_or(i64::MIN, |t| -(t as i64) - shift + 1);
    let mut search = Search::new(game, bounds, &Objective::MinTotal, config);
    let s = search.solve(set, history, limit)?;
    Some(((-s.value - shift) as u64, s.tree))
}

/// Largest gamma sum for `set` after `history`. With an incumbent, only
/// strictly better values are returned.
pub fn solve_max_eval(
    game: &Game,
    bounds: &Bounds,
    set: &CandidateSet,
    history: &History,
    eval: &EvalTable,
    incumbent: Option<i64>,
    config: SolverConfig,
) -> Option<(i64, StrategyTree)> {
    let limit = incumbent.map_or(i64::MIN, |v| v + 1);
    let mut search = Search::new(game, bounds, &Objective::Eval(eval.clone()), config);
    let s = search.solve(set, history, limit)?;
    Some((s.value, s.tree))
}

/// The strategy with the fewest total guesses over the whole game (or the
/// requested groups).
pub fn solve_initial_min(game: &Game, bounds: &Bounds, options: &RootOptions) -> Result<RootSolution, SolveError> {
    solve_groups(game, bounds, &Objective::MinTotal, options, None)
}

/// Best response to an opponent's distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse {
    pub eval: EvalTable,
    pub solution: RootSolution,
    pub win_rate: f64,
}

/// The strategy with the highest win rate against `opponent`.
pub fn best_response_winrate(
    game: &Game,
    bounds: &Bounds,
    opponent: &GuessDistribution,
    options: &RootOptions,
) -> Result<BestResponse, SolveError> {
    let eval = eval_table(opponent);
    let solution = solve_groups(game, bounds, &Objective::Eval(eval.clone()), options, None)?;
    let win_rate = eval.win_rate(solution.value());
    Ok(BestResponse {
        eval,
        solution,
        win_rate,
    })
}

/// Outcome of testing whether a strategy is its own best response.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    /// Gamma sum of the strategy against itself (always zero).
    pub own_value: i64,
    /// Gamma sum of the best response.
    pub best_value: i64,
    pub best_response_rate: f64,
    pub is_fixed_point: bool,
    pub best_response: RootSolution,
}

/// Solves the best response to `strategy`'s own distribution. Each group is
/// searched only for values at least the strategy's own value there, which
/// the strategy itself attains.
pub fn fixed_point_check(
    game: &Game,
    bounds: &Bounds,
    strategy: &StrategyTree,
    options: &RootOptions,
) -> Result<FixedPoint, SolveError> {
    let first = game.code(0);
    let mut dist = GuessDistribution::new(Vec::new());
    record_depths(game, strategy, game.full_set().members(), 1, &mut dist);
    let eval = eval_table(&dist);
    let own_value = eval.value_of(&dist);

    let mut limits = vec![i64::MIN; game.num_classes()];
    if strategy.guess == first {
        let buckets = game.partition(&game.full_set(), first);
        for (c, set) in buckets.iter().enumerate().skip(1) {
            if let (false, Some(sub)) = (set.is_empty(), strategy.child(game.classes()[c])) {
                let mut d = GuessDistribution::new(Vec::new());
                record_depths(game, sub, set.members(), 2, &mut d);
                limits[c] = eval.value_of(&d);
            }
        }
    }
    let objective = Objective::Eval(eval.clone());
    let best_response = solve_groups(game, bounds, &objective, options, Some(&limits))?;
    let best_value = best_response.value();
    let best_response_rate = eval.win_rate(best_value);
    Ok(FixedPoint {
        own_value,
        best_value,
        best_response_rate,
        is_fixed_point: best_value == own_value && best_response_rate <= 0.5,
        best_response,
    })
}

//! Depth-first branch and bound over candidate sets.
//!
//! Both objectives are handled as maximization of a per-secret score that
//! depends only on the guess number at which the secret is found: the total
//! number of guesses uses `-n`, the win-rate objective uses the opponent's
//! gamma table. A node returns its exact optimum whenever that optimum
//! reaches the caller's limit, and `None` otherwise.

use std::collections::BinaryHeap;
use std::time::Instant;

use crate::bounds::Bounds;
use crate::game::{CandidateSet, Game, MAX_CLASSES};
use crate::solver::eval::EvalTable;
use crate::strategy::StrategyTree;
use crate::symmetry::{History, Symmetry};

/// Deepest guess number the score tables cover.
pub const MAX_GUESSES: usize = 24;

/// What the search optimizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Objective {
    /// Fewest total guesses over the set.
    MinTotal,
    /// Largest gamma sum against an opponent.
    Eval(EvalTable),
}

impl Objective {
    /// Score of a secret found with guess number `n`.
    pub fn score(&self, n: usize) -> i64 {
        match self {
            Objective::MinTotal => -(n as i64),
            Objective::Eval(t) => t.gamma(n),
        }
    }
}

/// Which of several optimal guesses a node keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// The numerically smallest optimal guess.
    SmallestCode,
    /// The first optimal guess in bound order (ties by code).
    FirstFound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    /// Cut candidates whose optimistic value cannot reach the limit.
    pub pruning: bool,
    /// Restrict candidates to canonical guesses.
    pub symmetry: bool,
    /// Apply symmetry only while at most this many guesses have been asked.
    pub symmetry_depth: usize,
    /// Skip symmetry detection on sets smaller than this.
    pub symmetry_min_size: usize,
    /// Closed forms for sets of at most three codes.
    pub small_sets: bool,
    pub tie_break: TieBreak,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            pruning: true,
            symmetry: true,
            symmetry_depth: usize::MAX,
            symmetry_min_size: 0,
            small_sets: true,
            tie_break: TieBreak::SmallestCode,
        }
    }
}

impl SolverConfig {
    /// No pruning, no symmetry, no shortcuts.
    pub fn exhaustive() -> Self {
        SolverConfig {
            pruning: false,
            symmetry: false,
            symmetry_depth: 0,
            symmetry_min_size: 0,
            small_sets: false,
            tie_break: TieBreak::SmallestCode,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Nodes entered.
    pub nodes: u64,
    /// Nodes that scored candidate guesses.
    pub expanded: u64,
    /// Candidate guesses whose subtrees were searched.
    pub evaluated: u64,
}

/// Search state for one objective over one game.
pub struct Search<'a> {
    game: &'a Game,
    config: SolverConfig,
    scores: Vec<i64>,
    /// Optimistic value of `n` codes with `kinds` digits when the next guess
    /// has number `g`: `optimistic[(k * MAX_GUESSES + g - 1) * stride + n]`.
    optimistic: Vec<i64>,
    stride: usize,
    min_kinds: usize,
    max_kinds: usize,
    /// `capacity[k]`: most codes finishable within two guesses.
    two_guess_capacity: Vec<u32>,
    history: History,
    stats: SearchStats,
    deadline: Option<Instant>,
    timed_out: bool,
}

/// A solved node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solved {
    pub value: i64,
    pub tree: StrategyTree,
}

impl<'a> Search<'a> {
    pub fn new(game: &'a Game, bounds: &Bounds, objective: &Objective, config: SolverConfig) -> Self {
        let scores: Vec<i64> = (1..=MAX_GUESSES + 1).map(|n| objective.score(n)).collect();
        let table = bounds.table();
        let (min_kinds, max_kinds) = (table.min_kinds(), table.max_kinds());
        let stride = game.len() + 1;
        let mut optimistic = vec![0i64; (max_kinds - min_kinds + 1) * MAX_GUESSES * stride];
        let mut two_guess_capacity = Vec::new();
        for k in min_kinds..=max_kinds {
            let segs = bounds.segments(k);
            two_guess_capacity.push(table.get(k, 1).unwrap_or(1));
            for g in 1..=MAX_GUESSES {
                let base = ((k - min_kinds) * MAX_GUESSES + g - 1) * stride;
                for n in 0..stride {
                    optimistic[base + n] = segs
                        .finish_profile(n as u32)
                        .map(|(off, cnt)| {
                            let at = (g + off as usize - 2).min(MAX_GUESSES);
                            cnt as i64 * scores[at]
                        })
                        .sum();
                }
            }
        }
        Search {
            game,
            config,
            scores,
            optimistic,
            stride,
            min_kinds,
            max_kinds,
            two_guess_capacity,
            history: History::new(),
            stats: SearchStats::default(),
            deadline: None,
            timed_out: false,
        }
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    /// Abandon searches still running at `deadline`; results are then
    /// reported as not found.
    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
        self.timed_out = false;
    }

    pub fn timed_out(&self) -> bool {
        self.timed_out
    }

    /// Score of a secret found with guess number `n`.
    pub fn score_of(&self, n: usize) -> i64 {
        self.score(n)
    }

    #[inline]
    fn score(&self, n: usize) -> i64 {
        self.scores[(n - 1).min(MAX_GUESSES)]
    }

    #[inline]
    fn kinds_index(&self, mask: u16) -> usize {
        (mask.count_ones() as usize).clamp(self.min_kinds, self.max_kinds) - self.min_kinds
    }

    /// Optimistic value of a set whose next guess has number `guess_no`.
    #[inline]
    fn optimistic(&self, n: u32, mask: u16, guess_no: usize) -> i64 {
        let g = guess_no.min(MAX_GUESSES);
        self.optimistic[(self.kinds_index(mask) * MAX_GUESSES + g - 1) * self.stride + n as usize]
    }

    /// Exact optimum for `set` after `history`, if it is at least `limit`.
    pub fn solve(&mut self, set: &CandidateSet, history: &History, limit: i64) -> Option<Solved> {
        self.history = history.clone();
        let r = self.node(set.members(), set.digit_mask(), limit);
        r.map(|(value, tree)| Solved { value, tree })
    }

    fn node(&mut self, members: &[u16], mask: u16, limit: i64) -> Option<(i64, StrategyTree)> {
        self.stats.nodes += 1;
        let n = members.len();
        let d = self.history.len();
        debug_assert!(n > 0);

        if self.config.small_sets && n <= 3 {
            let (v, t) = self.small_set(members, d);
            return (v >= limit).then_some((v, t));
        }
        if self.config.pruning && self.optimistic(n as u32, mask, d + 1) < limit {
            return None;
        }
        if let Some(deadline) = self.deadline {
            if self.stats.nodes % 1024 == 0 && Instant::now() > deadline {
                self.timed_out = true;
            }
            if self.timed_out {
                return None;
            }
        }
        if self.config.pruning {
            if let Some(found) = self.perfect_member(members, mask, d) {
                return (found.0 >= limit).then_some(found);
            }
        }
        self.stats.expanded += 1;

        let candidates: Vec<u16> = if self.config.symmetry
            && d <= self.config.symmetry_depth
            && n >= self.config.symmetry_min_size
        {
            let set = CandidateSet::from_indices(self.game, members.to_vec());
            Symmetry::new(self.game, &self.history, &set).canonical_indices(self.game)
        } else {
            (0..self.game.len() as u16).collect()
        };

        let hit_score = self.score(d + 1);
        let mut counts = [0u32; MAX_CLASSES];
        let mut masks = [0u16; MAX_CLASSES];
        let classes = self.game.num_classes();
        let mut heap: BinaryHeap<(i64, std::cmp::Reverse<u16>)> = BinaryHeap::new();
        let prune = self.config.pruning;
        let full_table = self.game.has_full_table();
        let packed: Vec<u32> = members.iter().map(|&m| self.game.packed(m)).collect();
        for g in candidates {
            if full_table {
                self.game.profile(members, g, &mut counts, &mut masks);
            } else {
                self.game
                    .profile_packed(&packed, self.game.packed(g), &mut counts, &mut masks);
            }
            if counts[1..classes].iter().any(|&c| c as usize == n) {
                continue;
            }
            let mut key = if counts[0] > 0 { hit_score } else { 0 };
            for c in 1..classes {
                if counts[c] > 0 {
                    key += self.optimistic(counts[c], masks[c], d + 2);
                }
            }
            if prune && key < limit {
                continue;
            }
            heap.push((key, std::cmp::Reverse(g)));
        }

        let mut best: Option<(i64, u16, StrategyTree)> = None;
        while let Some((key, std::cmp::Reverse(g))) = heap.pop() {
            let need = match &best {
                None => limit,
                Some((v, bg, _)) => match self.config.tie_break {
                    TieBreak::SmallestCode if g < *bg => *v,
                    _ => v.saturating_add(1),
                },
            };
            if prune && key < need {
                match &best {
                    Some((v, _, _)) if key >= *v => continue,
                    _ => break,
                }
            }
            if self.timed_out {
                return None;
            }
            self.stats.evaluated += 1;
            if let Some((value, tree)) = self.expand(members, g, key, need, hit_score) {
                let better = match &best {
                    None => value >= limit || !prune,
                    Some((v, bg, _)) => value > *v || (value == *v && self.prefer(g, *bg)),
                };
                if better {
                    best = Some((value, g, tree));
                }
            }
        }
        best.filter(|b| b.0 >= limit).map(|(v, _, t)| (v, t))
    }

    fn prefer(&self, g: u16, incumbent: u16) -> bool {
        match self.config.tie_break {
            TieBreak::SmallestCode => g < incumbent,
            TieBreak::FirstFound => false,
        }
    }

    /// Searches the subtrees under guess `g`; `None` if they cannot reach
    /// `need`.
    fn expand(
        &mut self,
        members: &[u16],
        g: u16,
        key: i64,
        need: i64,
        hit_score: i64,
    ) -> Option<(i64, StrategyTree)> {
        let d = self.history.len();
        let mut buckets = self.game.partition_indices(members, g);
        let mut order: Vec<usize> = (1..buckets.len()).filter(|&c| !buckets[c].is_empty()).collect();
        order.sort_by_key(|&c| std::cmp::Reverse(buckets[c].len()));

        let guess = self.game.code(g);
        let mut acc = if buckets[0].is_empty() { 0 } else { hit_score };
        let mut rest = key - acc;
        let mut tree = StrategyTree::leaf(guess);
        for c in order {
            let child = std::mem::take(&mut buckets[c]);
            let cmask = child.iter().fold(0u16, |m, &i| m | self.game.mask(i));
            rest -= self.optimistic(child.len() as u32, cmask, d + 2);
            let child_limit = if self.config.pruning {
                need.saturating_sub(acc).saturating_sub(rest)
            } else {
                i64::MIN
            };
            let response = self.game.classes()[c];
            self.history.push(guess, response);
            let r = self.node(&child, cmask, child_limit);
            self.history.pop();
            let (v, sub) = r?;
            acc += v;
            tree.children.insert(response, sub);
        }
        Some((acc, tree))
    }

    /// A member splitting the rest into singletons attains the optimistic
    /// value when the hit is worth strictly more than a second-guess finish.
    fn perfect_member(&mut self, members: &[u16], mask: u16, d: usize) -> Option<(i64, StrategyTree)> {
        let n = members.len() as u32;
        if n > self.two_guess_capacity[self.kinds_index(mask)] || self.score(d + 1) <= self.score(d + 2) {
            return None;
        }
        let mut counts = [0u32; MAX_CLASSES];
        for &g in members {
            self.game.counts(members, g, &mut counts);
            if counts.iter().all(|&c| c <= 1) {
                let mut tree = StrategyTree::leaf(self.game.code(g));
                for &m in members.iter().filter(|&&m| m != g) {
                    let c = self.game.class(g, m) as usize;
                    tree.children
                        .insert(self.game.classes()[c], StrategyTree::leaf(self.game.code(m)));
                }
                let value = self.score(d + 1) + (n as i64 - 1) * self.score(d + 2);
                return Some((value, tree));
            }
        }
        None
    }

    /// Closed forms for one to three codes.
    fn small_set(&self, members: &[u16], d: usize) -> (i64, StrategyTree) {
        let game = self.game;
        let (s1, s2, s3) = (self.score(d + 1), self.score(d + 2), self.score(d + 3));
        let leaf = |i: u16| StrategyTree::leaf(game.code(i));
        let with_children = |g: u16, kids: &[u16]| {
            let mut t = leaf(g);
            for &k in kids {
                t.children.insert(game.classes()[game.class(g, k) as usize], leaf(k));
            }
            t
        };
        match members {
            [a] => (s1, leaf(*a)),
            [a, b] => (s1 + s2, with_children(*a, &[*b])),
            [a, b, c] => {
                let all = [*a, *b, *c];
                for (i, &g) in all.iter().enumerate() {
                    let others: Vec<u16> = (0..3).filter(|&j| j != i).map(|j| all[j]).collect();
                    if game.class(g, others[0]) != game.class(g, others[1]) {
                        return (s1 + 2 * s2, with_children(g, &others));
                    }
                }
                let in_set = s1 + s2 + s3;
                if 3 * s2 > in_set {
                    let classes = game.num_classes();
                    let splitter = (0..game.len() as u16).find(|&g| {
                        let cs = all.map(|m| game.class(g, m) as usize);
                        cs.iter().all(|&c| c != 0 && c < classes)
                            && cs[0] != cs[1]
                            && cs[0] != cs[2]
                            && cs[1] != cs[2]
                    });
                    if let Some(g) = splitter {
                        return (3 * s2, with_children(g, &all));
                    }
                }
                let mut t = leaf(*a);
                t.children.insert(
                    game.classes()[game.class(*a, *b) as usize],
                    with_children(*b, &[*c]),
                );
                (in_set, t)
            }
            _ => unreachable!("small sets have one to three members"),
        }
    }
}

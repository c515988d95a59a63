//! Independent replay of strategies. Responses come from the naive digit
//! comparison and candidate sets are rebuilt from scratch along every path,
//! so nothing here relies on the solver's tables.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::code::{naive_product, Code, GameParams, Response};
use crate::game::enumerate_codes;
use crate::strategy::{GuessDistribution, StrategyTree};

/// Guesses allowed on any path before verification gives up.
pub const DEPTH_CAP: usize = 9;

/// Guesses and responses of one game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub secret: Code,
    pub turns: Vec<(Code, Response)>,
}

impl Transcript {
    pub fn guesses(&self) -> usize {
        self.turns.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("no continuation after {guess} answered {response} (turn {turn})")]
    MissingChild {
        turn: usize,
        guess: Code,
        response: Response,
    },
    #[error("secret not found within {0} guesses")]
    TooDeep(usize),
}

/// Plays `tree` against `secret`.
pub fn replay(tree: &StrategyTree, secret: Code, params: GameParams) -> Result<Transcript, ReplayError> {
    let solved = Response::solved(params.positions());
    let mut turns = Vec::new();
    let mut node = tree;
    loop {
        let r = naive_product(node.guess, secret);
        turns.push((node.guess, r));
        if r == solved {
            return Ok(Transcript { secret, turns });
        }
        if turns.len() >= DEPTH_CAP {
            return Err(ReplayError::TooDeep(DEPTH_CAP));
        }
        node = node.child(r).ok_or(ReplayError::MissingChild {
            turn: turns.len(),
            guess: node.guess,
            response: r,
        })?;
    }
}

/// Histogram of replay lengths over every secret of the game.
pub fn distribution(tree: &StrategyTree, params: GameParams) -> Result<GuessDistribution, ReplayError> {
    let mut d = GuessDistribution::new(Vec::new());
    for s in enumerate_codes(params) {
        d.record(replay(tree, s, params)?.guesses());
    }
    Ok(d)
}

/// A defect found while verifying. Paths are the `(guess, response)` pairs
/// leading to the offending node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The guess is not a code of this game.
    InvalidGuess { path: Vec<(Code, Response)>, guess: Code },
    /// A reachable response has no continuation.
    MissingChild {
        path: Vec<(Code, Response)>,
        response: Response,
        secrets: Vec<Code>,
    },
    /// A leaf was reached by secrets it does not name.
    WrongGuess {
        path: Vec<(Code, Response)>,
        guess: Code,
        secrets: Vec<Code>,
    },
    /// The guess leaves every remaining secret in one response class.
    NonShrinking {
        path: Vec<(Code, Response)>,
        guess: Code,
        secrets: Vec<Code>,
    },
    /// A continuation no secret can reach.
    EmptyChild { path: Vec<(Code, Response)>, response: Response },
    /// Secrets still unresolved at the depth cap.
    DepthExceeded { secrets: Vec<Code> },
}

impl Violation {
    /// Secrets affected by the defect.
    pub fn secrets(&self) -> &[Code] {
        match self {
            Violation::MissingChild { secrets, .. }
            | Violation::WrongGuess { secrets, .. }
            | Violation::NonShrinking { secrets, .. }
            | Violation::DepthExceeded { secrets } => secrets,
            Violation::InvalidGuess { .. } | Violation::EmptyChild { .. } => &[],
        }
    }
}

fn fmt_path(path: &[(Code, Response)]) -> String {
    if path.is_empty() {
        return "root".into();
    }
    path.iter()
        .map(|(g, r)| format!("{g}:{r}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn fmt_codes(codes: &[Code]) -> String {
    const SHOWN: usize = 8;
    let mut s: Vec<String> = codes.iter().take(SHOWN).map(|c| c.to_string()).collect();
    if codes.len() > SHOWN {
        s.push(format!("... ({} total)", codes.len()));
    }
    s.join(" ")
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidGuess { path, guess } => {
                write!(f, "invalid guess {guess} at {}", fmt_path(path))
            }
            Violation::MissingChild { path, response, secrets } => write!(
                f,
                "missing child {response} at {}; orphaned secrets: {}",
                fmt_path(path),
                fmt_codes(secrets)
            ),
            Violation::WrongGuess { path, guess, secrets } => write!(
                f,
                "leaf guess {guess} at {} does not match secrets: {}",
                fmt_path(path),
                fmt_codes(secrets)
            ),
            Violation::NonShrinking { path, guess, secrets } => write!(
                f,
                "guess {guess} at {} does not split its candidates: {}",
                fmt_path(path),
                fmt_codes(secrets)
            ),
            Violation::EmptyChild { path, response } => {
                write!(f, "unreachable child {response} at {}", fmt_path(path))
            }
            Violation::DepthExceeded { secrets } => write!(
                f,
                "secrets unresolved after {DEPTH_CAP} guesses: {}",
                fmt_codes(secrets)
            ),
        }
    }
}

/// Outcome of verifying a strategy over every secret.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub secrets: usize,
    /// Guess counts of the secrets that were resolved.
    pub distribution: GuessDistribution,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty() && self.distribution.space() as usize == self.secrets
    }

    pub fn total(&self) -> u64 {
        self.distribution.total_guesses()
    }

    pub fn average(&self) -> f64 {
        self.distribution.average()
    }

    pub fn max_depth(&self) -> usize {
        self.distribution.max_guesses()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status: {}", if self.is_valid() { "ok" } else { "FAILED" })?;
        writeln!(f, "secrets: {}", self.secrets)?;
        writeln!(f, "total: {}", self.total())?;
        writeln!(f, "average: {:.3}", self.average())?;
        writeln!(f, "max depth: {}", self.max_depth())?;
        writeln!(f, "distribution: {}", self.distribution)?;
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        Ok(())
    }
}

struct Verifier {
    params: GameParams,
    path: Vec<(Code, Response)>,
    report: VerifyReport,
}

impl Verifier {
    fn valid_code(&self, c: Code) -> bool {
        c.len() == self.params.positions() && c.digits().all(|d| (d as usize) < self.params.symbols())
    }

    fn visit(&mut self, node: &StrategyTree, secrets: Vec<Code>) {
        let depth = self.path.len() + 1;
        if depth > DEPTH_CAP {
            self.report.violations.push(Violation::DepthExceeded { secrets });
            return;
        }
        if !self.valid_code(node.guess) {
            self.report.violations.push(Violation::InvalidGuess {
                path: self.path.clone(),
                guess: node.guess,
            });
        }
        let solved = Response::solved(self.params.positions());
        let mut buckets: BTreeMap<Response, Vec<Code>> = BTreeMap::new();
        for s in &secrets {
            let r = naive_product(node.guess, *s);
            if r == solved {
                self.report.distribution.record(depth);
            } else {
                buckets.entry(r).or_default().push(*s);
            }
        }
        for (&r, _) in node.children.iter().filter(|(r, _)| !buckets.contains_key(r)) {
            self.report.violations.push(Violation::EmptyChild {
                path: self.path.clone(),
                response: r,
            });
        }
        for (r, group) in buckets {
            if group.len() == secrets.len() {
                self.report.violations.push(Violation::NonShrinking {
                    path: self.path.clone(),
                    guess: node.guess,
                    secrets: group.clone(),
                });
            }
            match node.child(r) {
                Some(child) => {
                    self.path.push((node.guess, r));
                    self.visit(child, group);
                    self.path.pop();
                }
                None if node.is_leaf() => self.report.violations.push(Violation::WrongGuess {
                    path: self.path.clone(),
                    guess: node.guess,
                    secrets: group,
                }),
                None => self.report.violations.push(Violation::MissingChild {
                    path: self.path.clone(),
                    response: r,
                    secrets: group,
                }),
            }
        }
    }
}

/// Checks `tree` against every secret of the game and collects all defects.
pub fn verify(tree: &StrategyTree, params: GameParams) -> VerifyReport {
    let secrets = enumerate_codes(params);
    let mut v = Verifier {
        params,
        path: Vec::new(),
        report: VerifyReport {
            secrets: secrets.len(),
            distribution: GuessDistribution::new(Vec::new()),
            violations: Vec::new(),
        },
    };
    v.visit(tree, secrets);
    v.report
}

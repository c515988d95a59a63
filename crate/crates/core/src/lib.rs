//! Exact strategies for MOO, the four-digit bulls and cows game.
//!
//! The [`solver`] finds the fixed strategy with the fewest total guesses and
//! the best response to any opponent's guess-count distribution; the
//! [`strategy`] module replays, verifies and serializes the resulting trees.
//! Integer arithmetic is used for every search value. Real-valued quantities
//! (heuristic scores, win rates, `x^x = n` roots) are generic over
//! [`num_traits::Float`]; [`Score`] and [`WinRate`] name the precision used
//! by default.

pub mod bounds;
pub mod code;
pub mod game;
pub mod heuristics;
pub mod oracle;
pub mod solver;
pub mod strategy;
pub mod symmetry;

pub use code::{Code, GameParams, Response};
pub use game::{CandidateSet, Game};
pub use strategy::{GuessDistribution, StrategyTree};
pub use symmetry::History;

/// Default precision of heuristic scores.
pub type Score = f64;
/// Default precision of win rates.
pub type WinRate = f64;

/// Win rate of `a` against `b` at the default precision.
pub fn win_rate(
    a: &GuessDistribution,
    b: &GuessDistribution,
) -> Result<WinRate, strategy::DistributionError> {
    strategy::match_winrate(a, b)
}

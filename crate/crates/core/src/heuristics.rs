//! One-step lookahead scores and the greedy strategies they induce. Lower
//! scores are better everywhere.

use std::fmt;
use std::str::FromStr;

use num_traits::Float;
use thiserror::Error;

use crate::game::{Game, MAX_CLASSES};
use crate::strategy::StrategyTree;

/// Bucket sizes of a candidate set under one guess.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionProfile {
    /// Non-empty bucket sizes, ascending.
    sizes: Vec<u32>,
    guess_in_set: bool,
}

impl PartitionProfile {
    pub fn new(sizes: impl IntoIterator<Item = u32>, guess_in_set: bool) -> Self {
        let mut sizes: Vec<u32> = sizes.into_iter().filter(|&s| s > 0).collect();
        sizes.sort_unstable();
        PartitionProfile { sizes, guess_in_set }
    }

    /// Profile of `members` under guess index `guess`.
    pub fn of(game: &Game, members: &[u16], guess: u16) -> Self {
        let mut counts = [0u32; MAX_CLASSES];
        game.counts(members, guess, &mut counts);
        PartitionProfile::new(counts, counts[0] > 0)
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn guess_in_set(&self) -> bool {
        self.guess_in_set
    }

    pub fn total(&self) -> u32 {
        self.sizes.iter().sum()
    }
}

fn real<F: Float>(n: u32) -> F {
    F::from(n).expect("counts fit any float")
}

/// Sum of `t ln t` over buckets, less `2 ln 2` when the guess may win now.
pub fn score_larmouth<F: Float>(p: &PartitionProfile) -> F {
    let two = real::<F>(2);
    let s = p
        .sizes
        .iter()
        .fold(F::zero(), |acc, &t| acc + real::<F>(t) * real::<F>(t).ln());
    if p.guess_in_set {
        s - two * two.ln()
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LandyVariant {
    /// Largest bucket.
    Max,
    /// Sum of `t ln(1 + t)`.
    Log1p,
    /// Sum of `t F(t)` with `F(t)^F(t) = t`.
    Xx,
}

pub fn score_landy<F: Float>(p: &PartitionProfile, variant: LandyVariant) -> F {
    match variant {
        LandyVariant::Max => real(p.sizes.last().copied().unwrap_or(0)),
        LandyVariant::Log1p => p
            .sizes
            .iter()
            .fold(F::zero(), |acc, &t| acc + real::<F>(t) * real::<F>(t).ln_1p()),
        LandyVariant::Xx => p.sizes.iter().fold(F::zero(), |acc, &t| {
            acc + real::<F>(t) * solve_xx(real::<F>(t)).expect("sizes are at least one")
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("x^x = {0} has no solution with x >= 1")]
pub struct DomainError(pub f64);

/// The `x >= 1` with `x^x = n`, found by bisection on `x ln x = ln n`.
pub fn solve_xx<F: Float>(n: F) -> Result<F, DomainError> {
    if !(n >= F::one()) || n.is_infinite() {
        return Err(DomainError(n.to_f64().unwrap_or(f64::NAN)));
    }
    let target = n.ln();
    let two = real::<F>(2);
    let mut lo = F::one();
    let mut hi = two.max(target + F::one());
    let tol = real::<F>(1) / real::<F>(1_000_000_000) / real::<F>(1000);
    while hi - lo > tol.max(hi * F::epsilon() * two) {
        let mid = (lo + hi) / two;
        if mid * mid.ln() < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / two)
}

/// Named scoring function for greedy play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scorer {
    Larmouth,
    Landy(LandyVariant),
}

impl Scorer {
    pub const ALL: [Scorer; 4] = [
        Scorer::Larmouth,
        Scorer::Landy(LandyVariant::Max),
        Scorer::Landy(LandyVariant::Log1p),
        Scorer::Landy(LandyVariant::Xx),
    ];

    pub fn score<F: Float>(&self, p: &PartitionProfile) -> F {
        match self {
            Scorer::Larmouth => score_larmouth(p),
            Scorer::Landy(v) => score_landy(p, *v),
        }
    }
}

impl fmt::Display for Scorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scorer::Larmouth => "larmouth",
            Scorer::Landy(LandyVariant::Max) => "landy-max",
            Scorer::Landy(LandyVariant::Log1p) => "landy-log1p",
            Scorer::Landy(LandyVariant::Xx) => "landy-xx",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown scorer '{0}' (expected larmouth, landy-max, landy-log1p or landy-xx)")]
pub struct UnknownScorer(pub String);

impl FromStr for Scorer {
    type Err = UnknownScorer;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scorer::ALL
            .into_iter()
            .find(|sc| sc.to_string() == s)
            .ok_or_else(|| UnknownScorer(s.to_string()))
    }
}

/// Plays the lowest-scoring guess at every node. Equal scores prefer a guess
/// that may still be the secret, then the smallest code. Guesses that leave
/// every candidate in one unsolved bucket are never chosen.
pub fn greedy_strategy(game: &Game, scorer: Scorer) -> StrategyTree {
    let xx: Vec<f64> = match scorer {
        Scorer::Landy(LandyVariant::Xx) => (0..=game.len())
            .map(|t| t as f64 * solve_xx((t as f64).max(1.0)).unwrap())
            .collect(),
        _ => Vec::new(),
    };
    greedy_node(game, scorer, &xx, game.full_set().members())
}

fn greedy_node(game: &Game, scorer: Scorer, xx: &[f64], members: &[u16]) -> StrategyTree {
    if let [only] = members {
        return StrategyTree::leaf(game.code(*only));
    }
    let n = members.len() as u32;
    let mut counts = [0u32; MAX_CLASSES];
    let mut best: Option<(f64, bool, u16)> = None;
    for g in 0..game.len() as u16 {
        game.counts(members, g, &mut counts);
        if counts[1..].contains(&n) {
            continue;
        }
        let miss = counts[0] == 0;
        let profile = PartitionProfile::new(counts, !miss);
        let s: f64 = if xx.is_empty() {
            scorer.score(&profile)
        } else {
            profile.sizes.iter().map(|&t| xx[t as usize]).sum()
        };
        if best.map_or(true, |(b, bm, _)| s < b || (s == b && !miss && bm)) {
            best = Some((s, miss, g));
        }
    }
    let (_, _, g) = best.expect("some guess always splits two or more codes");
    let mut tree = StrategyTree::leaf(game.code(g));
    for (c, child) in game.partition_indices(members, g).iter().enumerate().skip(1) {
        if !child.is_empty() {
            tree.children
                .insert(game.classes()[c], greedy_node(game, scorer, xx, child));
        }
    }
    tree
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn larmouth_examples() {
        let ln2 = 2f64.ln();
        assert_eq!(score_larmouth::<f64>(&PartitionProfile::new([1, 1, 1], false)), 0.0);
        assert!(close(score_larmouth(&PartitionProfile::new([2, 2], false)), 4.0 * ln2));
        assert!(close(score_larmouth(&PartitionProfile::new([2, 2], true)), 2.0 * ln2));
    }

    #[test]
    fn landy_examples() {
        let p = PartitionProfile::new([5, 3, 1], false);
        assert_eq!(score_landy::<f64>(&p, LandyVariant::Max), 5.0);
        let ones = PartitionProfile::new([1, 1, 1], false);
        assert!(close(score_landy(&ones, LandyVariant::Log1p), 3.0 * 2f64.ln()));
        let four = PartitionProfile::new([4], false);
        assert!(close(score_landy(&four, LandyVariant::Xx), 8.0));
    }

    #[test]
    fn xx_roots() {
        assert!(close(solve_xx(1.0).unwrap(), 1.0));
        assert!(close(solve_xx(4.0).unwrap(), 2.0));
        assert!(close(solve_xx(27.0).unwrap(), 3.0));
        assert!((solve_xx(4.0f32).unwrap() - 2.0).abs() < 1e-5);
        assert!(solve_xx(0.5).is_err());
        assert!(solve_xx(f64::NAN).is_err());
    }

    #[test]
    fn scorer_names_round_trip() {
        for s in Scorer::ALL {
            assert_eq!(s.to_string().parse::<Scorer>().unwrap(), s);
        }
        assert!("landy".parse::<Scorer>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn xx_satisfies_equation(n in 1.0f64..1e6) {
                let x = solve_xx(n).unwrap();
                prop_assert!((x.powf(x) - n).abs() <= 1e-9 * n);
            }

            #[test]
            fn scores_ignore_bucket_order(mut sizes in prop::collection::vec(0u32..50, 1..14), hit: bool) {
                let a = PartitionProfile::new(sizes.clone(), hit);
                sizes.reverse();
                let b = PartitionProfile::new(sizes, hit);
                for s in Scorer::ALL {
                    prop_assert_eq!(s.score::<f64>(&a), s.score::<f64>(&b));
                }
            }
        }
    }
}

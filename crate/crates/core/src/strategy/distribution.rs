use std::fmt;
use std::str::FromStr;

use num_traits::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistributionError {
    #[error("distributions cover {0} and {1} secrets")]
    MismatchedSpace(u64, u64),
    #[error("malformed distribution: {0}")]
    Parse(String),
}

/// How many secrets a strategy finishes in exactly `n` guesses; `counts[0]`
/// is for one guess.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GuessDistribution {
    counts: Vec<u64>,
}

impl GuessDistribution {
    pub fn new(mut counts: Vec<u64>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        GuessDistribution { counts }
    }

    /// Counts indexed from one guess.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Secrets finished in exactly `n` guesses.
    pub fn at(&self, n: usize) -> u64 {
        n.checked_sub(1)
            .and_then(|i| self.counts.get(i))
            .copied()
            .unwrap_or(0)
    }

    /// Number of secrets covered.
    pub fn space(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn total_guesses(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u64 + 1) * c)
            .sum()
    }

    pub fn average(&self) -> f64 {
        self.total_guesses() as f64 / self.space() as f64
    }

    pub fn max_guesses(&self) -> usize {
        self.counts.len()
    }

    /// Adds one secret finished after `n` guesses.
    pub fn record(&mut self, n: usize) {
        if self.counts.len() < n {
            self.counts.resize(n, 0);
        }
        self.counts[n - 1] += 1;
    }
}

impl fmt::Display for GuessDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(&self.counts).map_err(|_| fmt::Error)?)
    }
}

impl FromStr for GuessDistribution {
    type Err = DistributionError;

    /// Accepts a JSON array or whitespace/comma separated counts.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        let counts: Vec<u64> = if trimmed.starts_with('[') {
            serde_json::from_str(trimmed).map_err(|e| DistributionError::Parse(e.to_string()))?
        } else {
            trimmed
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse()
                        .map_err(|_| DistributionError::Parse(format!("'{t}' is not a count")))
                })
                .collect::<Result<_, _>>()?
        };
        if counts.iter().sum::<u64>() == 0 {
            return Err(DistributionError::Parse("no secrets".into()));
        }
        Ok(GuessDistribution::new(counts))
    }
}

/// Probability that a player with distribution `a` beats one with `b` on
/// independent uniformly drawn secrets, ties counting half.
pub fn match_winrate<F: Float>(
    a: &GuessDistribution,
    b: &GuessDistribution,
) -> Result<F, DistributionError> {
    let (sa, sb) = (a.space(), b.space());
    if sa != sb {
        return Err(DistributionError::MismatchedSpace(sa, sb));
    }
    // numerator counts half-wins so it stays integral
    let len = a.max_guesses().max(b.max_guesses());
    let mut slower = sb as u128; // secrets b finishes after n guesses
    let mut twice_wins: u128 = 0;
    for n in 1..=len {
        let bn = b.at(n) as u128;
        slower -= bn;
        twice_wins += a.at(n) as u128 * (2 * slower + bn);
    }
    let denom = 2 * (sa as u128) * (sa as u128);
    Ok(F::from(twice_wins).unwrap() / F::from(denom).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn min() -> GuessDistribution {
        GuessDistribution::new(vec![1, 7, 63, 697, 2424, 1774, 74])
    }

    fn strongest() -> GuessDistribution {
        GuessDistribution::new(vec![1, 4, 47, 688, 2531, 1628, 141])
    }

    #[test]
    fn totals() {
        assert_eq!(min().space(), 5040);
        assert_eq!(min().total_guesses(), 26274);
        assert_eq!(strongest().total_guesses(), 26312);
        assert!((min().average() - 5.213).abs() < 5e-4);
        assert!((strongest().average() - 5.221).abs() < 5e-4);
    }

    #[test]
    fn published_match() {
        let r: f64 = match_winrate(&strongest(), &min()).unwrap();
        assert!((r - 0.5020823).abs() < 1e-7, "{r}");
        let r32: f32 = match_winrate(&strongest(), &min()).unwrap();
        assert!((r32 - 0.502_082_3).abs() < 1e-5);
    }

    /// Direct double loop over outcome pairs.
    fn brute(a: &GuessDistribution, b: &GuessDistribution) -> f64 {
        let mut score = 0.0;
        for i in 1..=a.max_guesses() {
            for j in 1..=b.max_guesses() {
                let w = (a.at(i) * b.at(j)) as f64;
                score += match i.cmp(&j) {
                    std::cmp::Ordering::Less => w,
                    std::cmp::Ordering::Equal => 0.5 * w,
                    std::cmp::Ordering::Greater => 0.0,
                };
            }
        }
        score / (a.space() as f64 * b.space() as f64)
    }

    #[test]
    fn shifted_distribution_against_brute_force() {
        let b = min();
        let mut shifted = vec![0];
        shifted.extend_from_slice(b.counts());
        let a = GuessDistribution::new(shifted);
        let r: f64 = match_winrate(&a, &b).unwrap();
        assert!((r - brute(&a, &b)).abs() < 1e-12);
        assert!(r < 0.5);
    }

    #[test]
    fn mismatched_space() {
        let a = GuessDistribution::new(vec![1, 2]);
        assert_eq!(
            match_winrate::<f64>(&a, &min()),
            Err(DistributionError::MismatchedSpace(3, 5040))
        );
    }

    #[test]
    fn parse_forms() {
        let d: GuessDistribution = "[1,7,63,697,2424,1774,74]".parse().unwrap();
        assert_eq!(d, min());
        let d: GuessDistribution = "1 7 63 697\n2424 1774 74\n".parse().unwrap();
        assert_eq!(d, min());
        assert!("1 x".parse::<GuessDistribution>().is_err());
        assert!("[]".parse::<GuessDistribution>().is_err());
        assert_eq!(min().to_string(), "[1,7,63,697,2424,1774,74]");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn dist_pair() -> impl Strategy<Value = (GuessDistribution, GuessDistribution)> {
            (1usize..9).prop_flat_map(|len| {
                prop::collection::vec(0u64..500, len).prop_flat_map(move |a| {
                    let total: u64 = a.iter().sum::<u64>().max(1);
                    let a = if a.iter().sum::<u64>() == 0 {
                        let mut a = a;
                        a[0] = 1;
                        a
                    } else {
                        a
                    };
                    let len = a.len();
                    (Just(a), prop::collection::vec(0u64..100, len + 2)).prop_map(
                        move |(a, weights)| {
                            // rescale weights to the same number of secrets
                            let wsum: u64 = weights.iter().sum::<u64>().max(1);
                            let mut b: Vec<u64> =
                                weights.iter().map(|w| w * total / wsum).collect();
                            let short = total - b.iter().sum::<u64>();
                            b[0] += short;
                            (GuessDistribution::new(a), GuessDistribution::new(b))
                        },
                    )
                })
            })
        }

        proptest! {
            #[test]
            fn complementary((a, b) in dist_pair()) {
                let ab: f64 = match_winrate(&a, &b).unwrap();
                let ba: f64 = match_winrate(&b, &a).unwrap();
                prop_assert!((ab + ba - 1.0).abs() < 1e-12);
                prop_assert!((ab - brute(&a, &b)).abs() < 1e-9);
            }

            #[test]
            fn self_play_is_even((a, _b) in dist_pair()) {
                let r: f64 = match_winrate(&a, &a).unwrap();
                prop_assert_eq!(r, 0.5);
            }
        }
    }
}

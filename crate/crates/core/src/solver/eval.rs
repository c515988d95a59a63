use crate::strategy::GuessDistribution;

/// Integer value of finishing a secret in `n` guesses against an opponent:
/// twice the expected wins plus draws, minus the number of secrets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalTable {
    space: i64,
    win: Vec<i64>,
    lose: Vec<i64>,
    draw: Vec<i64>,
    gamma: Vec<i64>,
}

impl EvalTable {
    /// Secrets in the code space.
    pub fn space(&self) -> i64 {
        self.space
    }

    /// Columns held explicitly; beyond them every value is `-space`.
    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    fn column(row: &[i64], n: usize, past: i64) -> i64 {
        match n.checked_sub(1) {
            Some(i) => row.get(i).copied().unwrap_or(past),
            None => panic!("guess counts start at 1"),
        }
    }

    pub fn win(&self, n: usize) -> i64 {
        Self::column(&self.win, n, 0)
    }

    pub fn lose(&self, n: usize) -> i64 {
        Self::column(&self.lose, n, self.space)
    }

    pub fn draw(&self, n: usize) -> i64 {
        Self::column(&self.draw, n, 0)
    }

    /// Value of finishing in `n` guesses.
    pub fn gamma(&self, n: usize) -> i64 {
        Self::column(&self.gamma, n, -self.space)
    }

    pub fn gamma_row(&self) -> &[i64] {
        &self.gamma
    }

    pub fn win_row(&self) -> &[i64] {
        &self.win
    }

    pub fn lose_row(&self) -> &[i64] {
        &self.lose
    }

    pub fn draw_row(&self) -> &[i64] {
        &self.draw
    }

    /// Sum of gamma over a distribution of finishing counts.
    pub fn value_of(&self, dist: &GuessDistribution) -> i64 {
        (1..=dist.max_guesses())
            .map(|n| dist.at(n) as i64 * self.gamma(n))
            .sum()
    }

    /// Expected win rate (draws half) of a strategy whose gamma sum is
    /// `value`.
    pub fn win_rate(&self, value: i64) -> f64 {
        let s = self.space as f64;
        (value as f64 / s + s) / (2.0 * s)
    }
}

/// Builds the evaluation table for an opponent's distribution. One column
/// past the opponent's longest game is kept so the table shows where the
/// values bottom out.
pub fn eval_table(opponent: &GuessDistribution) -> EvalTable {
    let space = opponent.space() as i64;
    let cols = opponent.max_guesses() + 1;
    let mut t = EvalTable {
        space,
        win: Vec::with_capacity(cols),
        lose: Vec::with_capacity(cols),
        draw: Vec::with_capacity(cols),
        gamma: Vec::with_capacity(cols),
    };
    let mut faster = 0i64;
    for n in 1..=cols {
        let d = opponent.at(n) as i64;
        let slower = space - faster - d;
        t.win.push(slower);
        t.lose.push(faster);
        t.draw.push(d);
        t.gamma.push(2 * slower + d - space);
        faster += d;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn min() -> GuessDistribution {
        GuessDistribution::new(vec![1, 7, 63, 697, 2424, 1774, 74])
    }

    #[test]
    fn rows_from_minimum_distribution() {
        let t = eval_table(&min());
        assert_eq!(t.win_row(), [5039, 5032, 4969, 4272, 1848, 74, 0, 0]);
        assert_eq!(t.lose_row(), [0, 1, 8, 71, 768, 3192, 4966, 5040]);
        assert_eq!(t.draw_row(), [1, 7, 63, 697, 2424, 1774, 74, 0]);
        // the second column is 2*5032 + 7 - 5040
        assert_eq!(
            t.gamma_row(),
            [5039, 5031, 4961, 4201, 1080, -3118, -4966, -5040]
        );
        assert_eq!(t.gamma(20), -5040);
    }

    #[test]
    fn degenerate_opponent() {
        let t = eval_table(&GuessDistribution::new(vec![10]));
        assert_eq!(t.gamma(1), 0);
        for n in 2..6 {
            assert_eq!(t.gamma(n), -10);
        }
    }

    #[test]
    fn published_gamma_sum() {
        let strongest = GuessDistribution::new(vec![1, 4, 47, 688, 2531, 1628, 141]);
        let t = eval_table(&min());
        assert_eq!(t.value_of(&strongest), 105788);
        assert!((t.win_rate(105788) - 0.5020823).abs() < 1e-7);
        assert_eq!(t.value_of(&min()), 0);
        assert_eq!(t.win_rate(0), 0.5);
    }

    #[test]
    fn rows_are_consistent() {
        for counts in [vec![3, 0, 5, 1], vec![1], vec![0, 0, 9, 9, 9]] {
            let d = GuessDistribution::new(counts);
            let t = eval_table(&d);
            for n in 1..12 {
                assert_eq!(t.win(n) + t.lose(n) + t.draw(n), t.space());
                assert!(t.gamma(n + 1) <= t.gamma(n));
            }
        }
    }
}

//! Lower bounds on the total number of guesses.
//!
//! `N[k][d]` is the largest number of non-empty leaves any `d`-guess strategy
//! can produce on the set of all codes drawn from `k` digits (a solved leaf
//! is terminal). At most one secret is found with the first guess, at most
//! `N[k][1]` within two, `N[k][2]` within three and so on, which gives a
//! piecewise-linear lower bound on the total for a set of `n` codes.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::code::Code;
use crate::game::{CandidateSet, Game, MAX_CLASSES};
use crate::symmetry::{History, Symmetry};

/// Deepest lookahead the node tables cover.
pub const MAX_TABLE_DEPTH: usize = 3;

/// Node counts for the standard game, kinds 4 through 10, depths 1 to 3.
pub const STANDARD_MAX_NODES: [[u32; MAX_TABLE_DEPTH]; 7] = [
    [4, 12, 24],
    [8, 45, 109],
    [11, 78, 276],
    [13, 101, 494],
    [14, 114, 674],
    [14, 122, 783],
    [14, 127, 864],
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("depth {0} is outside 1..=3")]
    UnsupportedDepth(usize),
    #[error("kinds {kinds} is outside {min}..={max}")]
    UnsupportedKinds { kinds: usize, min: usize, max: usize },
    #[error("malformed node table at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Maximum non-empty node counts indexed by kinds and depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxNodesTable {
    min_kinds: usize,
    rows: Vec<[u32; MAX_TABLE_DEPTH]>,
}

impl MaxNodesTable {
    /// Shipped constants for the standard game.
    pub fn standard() -> Self {
        MaxNodesTable {
            min_kinds: 4,
            rows: STANDARD_MAX_NODES.to_vec(),
        }
    }

    /// Searches every row of `game` from scratch.
    pub fn compute(game: &Game) -> Self {
        let p = game.params();
        let rows = (p.positions()..=p.symbols())
            .map(|k| {
                let mut row = [0; MAX_TABLE_DEPTH];
                for (d, slot) in row.iter_mut().enumerate() {
                    *slot = max_nonempty_nodes(game, k, d + 1).expect("in range");
                }
                row
            })
            .collect();
        MaxNodesTable {
            min_kinds: p.positions(),
            rows,
        }
    }

    pub fn min_kinds(&self) -> usize {
        self.min_kinds
    }

    pub fn max_kinds(&self) -> usize {
        self.min_kinds + self.rows.len() - 1
    }

    pub fn get(&self, kinds: usize, depth: usize) -> Option<u32> {
        if !(1..=MAX_TABLE_DEPTH).contains(&depth) || kinds < self.min_kinds {
            return None;
        }
        self.rows.get(kinds - self.min_kinds).map(|r| r[depth - 1])
    }

    pub fn row(&self, kinds: usize) -> Option<&[u32; MAX_TABLE_DEPTH]> {
        kinds
            .checked_sub(self.min_kinds)
            .and_then(|i| self.rows.get(i))
    }
}

impl fmt::Display for MaxNodesTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kinds | depth 1 | depth 2 | depth 3")?;
        for (i, row) in self.rows.iter().enumerate() {
            writeln!(
                f,
                "{:>5} | {:>7} | {:>7} | {:>7}",
                self.min_kinds + i,
                row[0],
                row[1],
                row[2]
            )?;
        }
        Ok(())
    }
}

impl FromStr for MaxNodesTable {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut min_kinds = None;
        let mut rows = Vec::new();
        for (no, line) in s.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let err = |reason: &str| BoundsError::Parse {
                line: no + 1,
                reason: reason.to_string(),
            };
            let fields: Vec<u32> = line
                .split('|')
                .map(|f| f.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|_| err("expected four integers"))?;
            if fields.len() != MAX_TABLE_DEPTH + 1 {
                return Err(err("expected four columns"));
            }
            let kinds = fields[0] as usize;
            match min_kinds {
                None => min_kinds = Some(kinds),
                Some(m) if m + rows.len() == kinds => {}
                Some(_) => return Err(err("kinds must be consecutive")),
            }
            rows.push([fields[1], fields[2], fields[3]]);
        }
        Ok(MaxNodesTable {
            min_kinds: min_kinds.ok_or(BoundsError::Parse {
                line: 1,
                reason: "no rows".into(),
            })?,
            rows,
        })
    }
}

/// Exact maximum number of non-empty leaves reachable with `depth` guesses on
/// all codes over the digits `0..kinds`, guessing from the whole game.
pub fn max_nonempty_nodes(game: &Game, kinds: usize, depth: usize) -> Result<u32, BoundsError> {
    let p = game.params();
    if !(1..=MAX_TABLE_DEPTH).contains(&depth) {
        return Err(BoundsError::UnsupportedDepth(depth));
    }
    if kinds < p.positions() || kinds > p.symbols() {
        return Err(BoundsError::UnsupportedKinds {
            kinds,
            min: p.positions(),
            max: p.symbols(),
        });
    }
    let allowed = ((1u32 << kinds) - 1) as u16;
    let members: Vec<u16> = (0..game.len() as u16)
        .filter(|&i| game.mask(i) & !allowed == 0)
        .collect();
    let mut search = NodeSearch {
        game,
        history: History::new(),
    };
    Ok(search.best(&members, depth))
}

struct NodeSearch<'g> {
    game: &'g Game,
    history: History,
}

impl NodeSearch<'_> {
    fn best(&mut self, members: &[u16], depth: usize) -> u32 {
        let n = members.len() as u32;
        if n <= 1 || depth == 0 {
            return n.min(1);
        }
        let classes = self.game.num_classes() as u32;
        let mut counts = [0u32; MAX_CLASSES];
        if depth == 1 {
            let cap = n.min(classes);
            let mut best = 0;
            for g in 0..self.game.len() as u16 {
                self.game.counts(members, g, &mut counts);
                let k = counts.iter().filter(|&&c| c > 0).count() as u32;
                if k > best {
                    best = k;
                    if best == cap {
                        break;
                    }
                }
            }
            return best;
        }

        let set = CandidateSet::from_indices(self.game, members.to_vec());
        let candidates = Symmetry::new(self.game, &self.history, &set).canonical_indices(self.game);
        // optimistic value of a child: every member its own leaf, and no more
        // than classes^(depth-1) leaves
        let reach = classes.pow(depth as u32 - 1);
        let mut scored: Vec<(u32, u16)> = candidates
            .into_iter()
            .filter_map(|g| {
                self.game.counts(members, g, &mut counts);
                if counts[1..].iter().any(|&c| c == n) {
                    return None;
                }
                let ub = counts[0] + counts[1..].iter().map(|&c| c.min(reach)).sum::<u32>();
                Some((ub, g))
            })
            .collect();
        scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

        let mut best = 0;
        for (ub, g) in scored {
            if ub <= best {
                break;
            }
            let buckets = self.game.partition_indices(members, g);
            let mut remaining = ub;
            let mut acc = buckets[0].len() as u32;
            remaining -= acc;
            let guess = self.game.code(g);
            let mut pruned = false;
            for (c, child) in buckets.iter().enumerate().skip(1) {
                if child.is_empty() {
                    continue;
                }
                remaining -= (child.len() as u32).min(reach);
                self.history.push(guess, self.game.classes()[c]);
                acc += self.best(child, depth - 1);
                self.history.pop();
                if acc + remaining <= best {
                    pruned = true;
                    break;
                }
            }
            if !pruned && acc > best {
                best = acc;
                if best == n {
                    break;
                }
            }
        }
        best
    }
}

/// Piecewise-linear lower bound for one value of kinds.
///
/// `capacity[j]` is the most secrets that can be finished within `j + 1`
/// guesses; past the last capacity every secret costs one more guess than the
/// last segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundSegments {
    capacity: Vec<u32>,
}

/// One linear piece `slope * n + intercept` valid for `first..=last`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub first: u32,
    pub last: Option<u32>,
    pub slope: i64,
    pub intercept: i64,
}

impl BoundSegments {
    pub fn from_row(row: &[u32]) -> Self {
        let mut capacity = vec![1];
        for &c in row {
            capacity.push(c.max(*capacity.last().unwrap()));
        }
        BoundSegments { capacity }
    }

    /// Total guesses needed at least for `n` secrets.
    pub fn lower_bound(&self, n: u32) -> u32 {
        self.finish_profile(n)
            .map(|(offset, count)| offset * count)
            .sum()
    }

    /// The most favourable spread of finishing guesses for `n` secrets as
    /// `(guess number, secrets)` pairs, guess numbers counted from 1.
    pub fn finish_profile(&self, n: u32) -> impl Iterator<Item = (u32, u32)> + '_ {
        let mut prev = 0u32;
        let last = self.capacity.len() as u32 + 1;
        self.capacity
            .iter()
            .map(Some)
            .chain(std::iter::once(None))
            .enumerate()
            .filter_map(move |(j, cap)| {
                let upto = cap.map_or(n, |&c| c.min(n));
                let count = upto.saturating_sub(prev);
                prev = prev.max(upto);
                let offset = if cap.is_some() { j as u32 + 1 } else { last };
                (count > 0).then_some((offset, count))
            })
    }

    /// Linear pieces with non-empty ranges.
    pub fn segments(&self) -> Vec<Segment> {
        let mut out = Vec::new();
        let mut first = 1u32;
        let mut base = 0i64; // bound at first - 1
        for (j, &cap) in self.capacity.iter().enumerate() {
            let slope = j as i64 + 1;
            if cap >= first {
                out.push(Segment {
                    first,
                    last: Some(cap),
                    slope,
                    intercept: base - slope * (first as i64 - 1),
                });
                base += slope * (cap as i64 - first as i64 + 1);
                first = cap + 1;
            }
        }
        let slope = self.capacity.len() as i64 + 1;
        out.push(Segment {
            first,
            last: None,
            slope,
            intercept: base - slope * (first as i64 - 1),
        });
        // a single point lying on the next line joins it
        let mut merged: Vec<Segment> = Vec::new();
        for seg in out.into_iter().rev() {
            match merged.last_mut() {
                Some(next)
                    if seg.last == Some(seg.first)
                        && next.slope * seg.first as i64 + next.intercept
                            == seg.slope * seg.first as i64 + seg.intercept =>
                {
                    next.first = seg.first;
                }
                _ => merged.push(seg),
            }
        }
        merged.reverse();
        merged
    }
}

pub fn bound_segments(kinds: usize, table: &MaxNodesTable) -> Option<BoundSegments> {
    table.row(kinds).map(|r| BoundSegments::from_row(r))
}

/// Lower bounds for every kinds value of one game.
#[derive(Debug, Clone)]
pub struct Bounds {
    table: MaxNodesTable,
    segments: Vec<BoundSegments>,
}

impl Bounds {
    pub fn new(table: MaxNodesTable) -> Self {
        let segments = (table.min_kinds()..=table.max_kinds())
            .map(|k| bound_segments(k, &table).expect("row exists"))
            .collect();
        Bounds { table, segments }
    }

    /// Shipped table for the standard game, computed tables otherwise.
    pub fn for_game(game: &Game) -> Self {
        if game.params() == crate::code::GameParams::standard() {
            Bounds::new(MaxNodesTable::standard())
        } else {
            Bounds::new(MaxNodesTable::compute(game))
        }
    }

    pub fn table(&self) -> &MaxNodesTable {
        &self.table
    }

    /// Segments for `kinds`, clamped into the table's range.
    pub fn segments(&self, kinds: usize) -> &BoundSegments {
        let i = kinds
            .max(self.table.min_kinds())
            .min(self.table.max_kinds())
            - self.table.min_kinds();
        &self.segments[i]
    }

    pub fn lower_bound(&self, n: usize, kinds: usize) -> u32 {
        if n == 0 {
            return 0;
        }
        self.segments(kinds).lower_bound(n as u32)
    }
}

/// Lower bound on the total guesses for `n` secrets spread over `kinds`
/// digits in the standard game.
pub fn lower_bound(n: usize, kinds: usize) -> u32 {
    if n == 0 {
        return 0;
    }
    let table = MaxNodesTable::standard();
    bound_segments(kinds.clamp(4, 10), &table)
        .expect("standard kinds")
        .lower_bound(n as u32)
}

/// Best total and guess for sets of one to three codes, always guessing a
/// member of the set.
pub fn small_set_total(game: &Game, set: &CandidateSet) -> (u32, Code) {
    let m = set.members();
    match m.len() {
        1 => (1, game.code(m[0])),
        2 => (3, game.code(m[0])),
        3 => {
            for (i, &g) in m.iter().enumerate() {
                let others: Vec<u16> = m.iter().copied().filter(|&x| x != m[i]).collect();
                if game.class(g, others[0]) != game.class(g, others[1]) {
                    return (5, game.code(g));
                }
            }
            (6, game.code(m[0]))
        }
        n => panic!("small_set_total takes 1..=3 codes, got {n}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::GameParams;

    #[test]
    fn standard_table_shape() {
        let t = MaxNodesTable::standard();
        assert_eq!(t.get(4, 1), Some(4));
        assert_eq!(t.get(10, 1), Some(14));
        assert_eq!(t.get(10, 2), Some(127));
        assert_eq!(t.get(10, 3), Some(864));
        assert_eq!(t.get(9, 3), Some(783));
        assert_eq!(t.get(10, 4), None);
        for k in 4..=10 {
            for d in 1..=3 {
                let v = t.get(k, d).unwrap();
                if k > 4 {
                    assert!(v >= t.get(k - 1, d).unwrap());
                }
                if d > 1 {
                    assert!(v >= t.get(k, d - 1).unwrap());
                }
            }
            assert!(t.get(k, 1).unwrap() <= 14);
        }
    }

    #[test]
    fn table_text_round_trip() {
        let t = MaxNodesTable::standard();
        let text = t.to_string();
        assert!(text.lines().nth(7).unwrap().contains("864"));
        assert_eq!(text.parse::<MaxNodesTable>().unwrap(), t);
        assert!("kinds\n4 | 1 | 2\n".parse::<MaxNodesTable>().is_err());
    }

    #[test]
    fn segments_for_ten_kinds() {
        let segs = bound_segments(10, &MaxNodesTable::standard()).unwrap();
        let pieces: Vec<(u32, Option<u32>, i64, i64)> = segs
            .segments()
            .iter()
            .map(|s| (s.first, s.last, s.slope, s.intercept))
            .collect();
        assert_eq!(
            pieces,
            [
                (1, Some(14), 2, -1),
                (15, Some(127), 3, -15),
                (128, Some(864), 4, -142),
                (865, None, 5, -1006)
            ]
        );
        for n in 1..3000u32 {
            let seg = segs
                .segments()
                .into_iter()
                .find(|s| s.first <= n && s.last.map_or(true, |l| n <= l))
                .unwrap();
            assert_eq!(seg.slope * n as i64 + seg.intercept, segs.lower_bound(n) as i64, "n = {n}");
        }
    }

    #[test]
    fn segments_for_four_kinds() {
        let segs = bound_segments(4, &MaxNodesTable::standard()).unwrap();
        for n in 1..=4 {
            assert_eq!(segs.lower_bound(n), 2 * n - 1);
        }
        for n in 5..=12 {
            assert_eq!(segs.lower_bound(n), 3 * n - 5);
        }
        for n in 13..=24 {
            assert_eq!(segs.lower_bound(n), 4 * n - 17);
        }
        for n in 25..=40 {
            assert_eq!(segs.lower_bound(n), 5 * n - 41);
        }
        assert_eq!(segs.lower_bound(24), 79);
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound(14, 10), 27);
        assert_eq!(lower_bound(200, 10), 658);
        assert_eq!(lower_bound(865, 10), 3319);
        assert_eq!(lower_bound(0, 10), 0);
        for k in 4..=10 {
            assert_eq!(lower_bound(1, k), 1);
        }
    }

    #[test]
    fn bound_monotone_in_kinds() {
        for n in 0..=5040 {
            for k in 5..=10 {
                assert!(lower_bound(n, k) <= lower_bound(n, k - 1));
            }
        }
    }

    #[test]
    fn depth_one_column() {
        let game = Game::standard();
        for (i, k) in (4..=10).enumerate() {
            assert_eq!(
                max_nonempty_nodes(&game, k, 1).unwrap(),
                STANDARD_MAX_NODES[i][0]
            );
        }
        assert_eq!(
            max_nonempty_nodes(&game, 10, 4),
            Err(BoundsError::UnsupportedDepth(4))
        );
    }

    #[test]
    fn four_kinds_row() {
        let game = Game::standard();
        assert_eq!(max_nonempty_nodes(&game, 4, 2).unwrap(), 12);
        assert_eq!(max_nonempty_nodes(&game, 4, 3).unwrap(), 24);
    }

    #[test]
    fn small_sets() {
        let game = Game::standard();
        let code = |s: &str| s.parse::<Code>().unwrap();
        let single = CandidateSet::from_codes(&game, [code("3951")]);
        assert_eq!(small_set_total(&game, &single), (1, code("3951")));
        let pair = CandidateSet::from_codes(&game, [code("5678"), code("1234")]);
        assert_eq!(small_set_total(&game, &pair), (3, code("1234")));
        // 0123 answers 1023 with 2B2C and 0124 with 3B
        let split = CandidateSet::from_codes(&game, ["0123", "1023", "0124"].map(code));
        assert_eq!(small_set_total(&game, &split), (5, code("0123")));
        // each member sees the other two identically
        let game5 = Game::new(GameParams::new(5, 2).unwrap());
        let c5 = |s: &str| game5.parse(s).unwrap();
        let stuck = CandidateSet::from_codes(&game5, ["01", "02", "03"].map(c5));
        assert_eq!(small_set_total(&game5, &stuck).0, 6);
    }
}

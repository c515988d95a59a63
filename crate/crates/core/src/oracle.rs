//! Brute-force reference solver for small games.
//!
//! Every code is tried as a guess at every node, responses come from the
//! naive digit comparison, and results are memoized per candidate set. Only
//! guesses that leave the whole set in one unsolved response are skipped,
//! since they can never help and would otherwise recurse forever.

use rustc_hash::FxHashMap;

use crate::code::{naive_product, Code, GameParams, Response};
use crate::game::enumerate_codes;
use crate::solver::EvalTable;
use crate::strategy::StrategyTree;

/// Largest game the oracle accepts, in codes.
pub const MAX_ORACLE_CODES: usize = 64 * KEY_WORDS;
const KEY_WORDS: usize = 6;
type Key = [u64; KEY_WORDS];

pub struct Oracle {
    params: GameParams,
    codes: Vec<Code>,
    /// Distinct responses in class order; slot 0 is the solved one.
    kinds: Vec<Response>,
    /// `responses[g * n + s]` indexes `kinds`.
    responses: Vec<u8>,
    min_memo: FxHashMap<Key, u64>,
    eval_memo: FxHashMap<(Key, usize), i64>,
}

impl Oracle {
    /// # Panics
    /// If the game has more than [`MAX_ORACLE_CODES`] codes.
    pub fn new(params: GameParams) -> Self {
        let codes = enumerate_codes(params);
        assert!(
            codes.len() <= MAX_ORACLE_CODES,
            "the oracle handles at most {MAX_ORACLE_CODES} codes"
        );
        let mut all = Vec::with_capacity(codes.len() * codes.len());
        for &g in &codes {
            for &s in &codes {
                all.push(naive_product(g, s));
            }
        }
        let mut kinds = all.clone();
        kinds.sort();
        kinds.dedup();
        let responses = all
            .iter()
            .map(|r| kinds.binary_search(r).unwrap() as u8)
            .collect();
        Oracle {
            params,
            codes,
            kinds,
            responses,
            min_memo: FxHashMap::default(),
            eval_memo: FxHashMap::default(),
        }
    }

    pub fn params(&self) -> GameParams {
        self.params
    }

    pub fn codes(&self) -> &[Code] {
        &self.codes
    }

    /// Indices of `codes` in this game.
    pub fn indices(&self, codes: &[Code]) -> Vec<u16> {
        let mut v: Vec<u16> = codes
            .iter()
            .map(|c| self.codes.binary_search(c).expect("code of this game") as u16)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn full_set(&self) -> Vec<u16> {
        (0..self.codes.len() as u16).collect()
    }

    /// Splits `set` under guess `g`, unsolved responses only in class
    /// order, plus whether the guess is a member.
    fn split(&self, set: &[u16], g: usize) -> Option<(bool, Vec<Vec<u16>>)> {
        let n = self.codes.len();
        let row = &self.responses[g * n..(g + 1) * n];
        let mut groups: Vec<Vec<u16>> = vec![Vec::new(); self.kinds.len()];
        for &s in set {
            groups[row[s as usize] as usize].push(s);
        }
        let hit = !groups[0].is_empty();
        groups.retain(|v| !v.is_empty());
        if hit {
            groups.remove(0);
        } else if groups.len() == 1 {
            return None;
        }
        Some((hit, groups))
    }

    /// Like [`Oracle::split`] but writes the unsolved groups contiguously
    /// into `buf`, with their ranges in `ranges`.
    fn split_into(
        &self,
        set: &[u16],
        g: usize,
        buf: &mut Vec<u16>,
        ranges: &mut Vec<(usize, usize)>,
    ) -> Option<bool> {
        let n = self.codes.len();
        let row = &self.responses[g * n..(g + 1) * n];
        let mut counts = [0usize; 32];
        for &s in set {
            counts[row[s as usize] as usize] += 1;
        }
        let hit = counts[0] > 0;
        let nonempty = counts[1..].iter().filter(|&&c| c > 0).count();
        if !hit && nonempty == 1 {
            return None;
        }
        let mut start = [0usize; 32];
        let mut at = 0;
        ranges.clear();
        for c in 1..self.kinds.len() {
            start[c] = at;
            if counts[c] > 0 {
                ranges.push((at, at + counts[c]));
            }
            at += counts[c];
        }
        buf.clear();
        buf.resize(at, 0);
        for &s in set {
            let c = row[s as usize] as usize;
            if c > 0 {
                buf[start[c]] = s;
                start[c] += 1;
            }
        }
        Some(hit)
    }

    fn response(&self, g: usize, s: u16) -> Response {
        self.kinds[self.responses[g * self.codes.len() + s as usize] as usize]
    }

    fn key(&self, set: &[u16]) -> Key {
        let mut bits = [0u64; KEY_WORDS];
        for &s in set {
            bits[s as usize / 64] |= 1 << (s % 64);
        }
        bits
    }

    /// Fewest total guesses to find every member of `set` (sorted indices).
    pub fn min_total(&mut self, set: &[u16]) -> u64 {
        if set.len() <= 1 {
            return set.len() as u64;
        }
        let key = self.key(set);
        if let Some(&v) = self.min_memo.get(&key) {
            return v;
        }
        let mut best = u64::MAX;
        let (mut buf, mut ranges) = (Vec::new(), Vec::new());
        for g in 0..self.codes.len() {
            if self.split_into(set, g, &mut buf, &mut ranges).is_none() {
                continue;
            }
            let mut v = set.len() as u64;
            for &(a, b) in &ranges {
                v += self.min_total(&buf[a..b]);
            }
            best = best.min(v);
        }
        self.min_memo.insert(key, best);
        best
    }

    /// Largest gamma sum for `set` when the next guess has number `guess_no`.
    pub fn max_eval(&mut self, set: &[u16], guess_no: usize, eval: &EvalTable) -> i64 {
        match set.len() {
            0 => return 0,
            1 => return eval.gamma(guess_no),
            _ => {}
        }
        let key = (self.key(set), guess_no);
        if let Some(&v) = self.eval_memo.get(&key) {
            return v;
        }
        let mut best = i64::MIN;
        let (mut buf, mut ranges) = (Vec::new(), Vec::new());
        for g in 0..self.codes.len() {
            let Some(hit) = self.split_into(set, g, &mut buf, &mut ranges) else { continue };
            let mut v = if hit { eval.gamma(guess_no) } else { 0 };
            for &(a, b) in &ranges {
                v += self.max_eval(&buf[a..b], guess_no + 1, eval);
            }
            best = best.max(v);
        }
        self.eval_memo.insert(key, best);
        best
    }

    /// Forgets memoized gamma values (they depend on the table used).
    pub fn clear_eval(&mut self) {
        self.eval_memo.clear();
    }

    /// A minimum-total strategy for `set`, smallest optimal guess at each
    /// node.
    pub fn min_tree(&mut self, set: &[u16]) -> StrategyTree {
        let target = self.min_total(set);
        let n = self.codes.len();
        for g in 0..n {
            let Some((_, groups)) = self.split(set, g) else { continue };
            let v = set.len() as u64 + groups.iter().map(|c| self.min_total(c)).sum::<u64>();
            if v == target {
                let mut t = StrategyTree::leaf(self.codes[g]);
                for c in groups {
                    let r = self.response(g, c[0]);
                    t.children.insert(r, self.min_tree(&c));
                }
                return t;
            }
        }
        unreachable!("the optimum is attained by some guess")
    }

    /// A maximum-gamma strategy for `set`, smallest optimal guess at each
    /// node.
    pub fn eval_tree(&mut self, set: &[u16], guess_no: usize, eval: &EvalTable) -> StrategyTree {
        let target = self.max_eval(set, guess_no, eval);
        let n = self.codes.len();
        for g in 0..n {
            let Some((hit, groups)) = self.split(set, g) else { continue };
            let mut v = if hit { eval.gamma(guess_no) } else { 0 };
            for c in &groups {
                v += self.max_eval(c, guess_no + 1, eval);
            }
            if v == target {
                let mut t = StrategyTree::leaf(self.codes[g]);
                for c in groups {
                    let r = self.response(g, c[0]);
                    t.children.insert(r, self.eval_tree(&c, guess_no + 1, eval));
                }
                return t;
            }
        }
        unreachable!("the optimum is attained by some guess")
    }
}

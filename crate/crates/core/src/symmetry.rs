//! Elimination of equivalent guesses.
//!
//! Two guesses are equivalent at a node when one maps to the other under a
//! value-preserving substitution:
//!
//! * digits that do not occur in the candidate set may replace one another
//!   (the partition of the set is unchanged);
//! * digits of the set that no earlier guess used may be permuted whenever the
//!   permutation maps the set onto itself;
//! * a combined digit-and-position substitution that maps every earlier guess
//!   onto itself (at most `positions!` of them) maps the set onto itself.
//!
//! Only the numerically smallest member of each class is kept.

use crate::code::{Code, Response, MAX_POSITIONS, MAX_SYMBOLS};
use crate::game::{CandidateSet, Game};

/// Guesses asked so far with the responses they received.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct History {
    entries: Vec<(Code, Response)>,
}

impl History {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, guess: Code, response: Response) {
        self.entries.push((guess, response));
    }

    pub fn pop(&mut self) -> Option<(Code, Response)> {
        self.entries.pop()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Code, Response)] {
        &self.entries
    }

    pub fn guesses(&self) -> impl Iterator<Item = Code> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    /// Digits used by any earlier guess.
    pub fn digit_mask(&self) -> u16 {
        self.guesses().fold(0, |m, g| m | g.mask())
    }

    /// Codes of `game` consistent with every entry.
    pub fn consistent_set(&self, game: &Game) -> CandidateSet {
        let members = (0..game.len() as u16)
            .filter(|&i| {
                let s = game.code(i);
                self.entries.iter().all(|&(g, r)| game.product(g, s) == r)
            })
            .collect();
        CandidateSet::from_indices(game, members)
    }
}

impl FromIterator<(Code, Response)> for History {
    fn from_iter<T: IntoIterator<Item = (Code, Response)>>(iter: T) -> Self {
        History {
            entries: iter.into_iter().collect(),
        }
    }
}

/// Partition of the alphabet into groups of mutually substitutable digits.
/// Each group is ascending; singleton groups hold digits fixed in place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitGroups {
    group_of: [u8; MAX_SYMBOLS],
    /// Position of each digit inside its group.
    rank: [u8; MAX_SYMBOLS],
    groups: Vec<Vec<u8>>,
}

impl DigitGroups {
    pub fn groups(&self) -> &[Vec<u8>] {
        &self.groups
    }

    pub fn group_of(&self, digit: u8) -> &[u8] {
        &self.groups[self.group_of[digit as usize] as usize]
    }

    /// Groups with more than one member.
    pub fn substitutable(&self) -> impl Iterator<Item = &[u8]> {
        self.groups.iter().filter(|g| g.len() > 1).map(|g| g.as_slice())
    }
}

/// Membership bitmap over the codes of a game.
struct Membership {
    bits: Vec<u64>,
}

impl Membership {
    fn new(game: &Game, set: &CandidateSet) -> Self {
        let mut bits = vec![0u64; game.len().div_ceil(64)];
        for &m in set.members() {
            bits[m as usize / 64] |= 1 << (m % 64);
        }
        Membership { bits }
    }

    fn contains(&self, game: &Game, code: Code) -> bool {
        match game.index(code) {
            Some(i) => self.bits[i as usize / 64] & (1 << (i % 64)) != 0,
            None => false,
        }
    }
}

fn relabel(code: Code, map: &[u8; MAX_SYMBOLS]) -> Code {
    let k = code.len();
    let mut out = [0u8; MAX_POSITIONS];
    for (p, slot) in out.iter_mut().enumerate().take(k) {
        *slot = map[code.digit(p) as usize];
    }
    Code::from_digits(&out[..k]).expect("relabelling is a bijection")
}

/// Groups the alphabet for `set` reached through `history`.
pub fn digit_groups(game: &Game, history: &History, set: &CandidateSet) -> DigitGroups {
    let membership = Membership::new(game, set);
    groups_with(game, history, set, &membership)
}

fn groups_with(
    game: &Game,
    history: &History,
    set: &CandidateSet,
    membership: &Membership,
) -> DigitGroups {
    let symbols = game.params().symbols() as u8;
    let set_mask = set.digit_mask();
    let hist_mask = history.digit_mask();

    let mut groups: Vec<Vec<u8>> = Vec::new();
    let absent: Vec<u8> = (0..symbols).filter(|d| set_mask & (1 << d) == 0).collect();
    if !absent.is_empty() {
        groups.push(absent);
    }
    // Set digits no guess has touched: group those whose transposition maps
    // the set onto itself. Transposition validity is transitive, so checking
    // against each group's first member suffices.
    let mut free: Vec<Vec<u8>> = Vec::new();
    for d in (0..symbols).filter(|d| set_mask & (1 << d) != 0 && hist_mask & (1 << d) == 0) {
        let slot = free.iter().position(|g| {
            let mut swap = identity_map();
            swap[g[0] as usize] = d;
            swap[d as usize] = g[0];
            set.codes(game)
                .all(|c| membership.contains(game, relabel(c, &swap)))
        });
        match slot {
            Some(i) => free[i].push(d),
            None => free.push(vec![d]),
        }
    }
    groups.extend(free);
    for d in (0..symbols).filter(|d| set_mask & (1 << d) != 0 && hist_mask & (1 << d) != 0) {
        groups.push(vec![d]);
    }
    groups.sort();
    let mut group_of = [u8::MAX; MAX_SYMBOLS];
    let mut rank = [0u8; MAX_SYMBOLS];
    for (i, g) in groups.iter().enumerate() {
        for (r, &d) in g.iter().enumerate() {
            group_of[d as usize] = i as u8;
            rank[d as usize] = r as u8;
        }
    }
    DigitGroups {
        group_of,
        rank,
        groups,
    }
}

fn identity_map() -> [u8; MAX_SYMBOLS] {
    std::array::from_fn(|i| i as u8)
}

/// A digit-and-position substitution: digit `d` at position `p` moves to
/// position `pos[p]` and becomes `digit[d]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Substitution {
    digit: [u8; MAX_SYMBOLS],
    pos: [u8; MAX_POSITIONS],
}

impl Substitution {
    fn apply(&self, code: Code) -> Code {
        let k = code.len();
        let mut out = [0u8; MAX_POSITIONS];
        for p in 0..k {
            out[self.pos[p] as usize] = self.digit[code.digit(p) as usize];
        }
        Code::from_digits(&out[..k]).expect("substitution is a bijection")
    }
}

fn permutations(k: usize) -> Vec<[u8; MAX_POSITIONS]> {
    fn rec(k: usize, cur: &mut Vec<u8>, out: &mut Vec<[u8; MAX_POSITIONS]>) {
        if cur.len() == k {
            let mut p = [0u8; MAX_POSITIONS];
            p[..k].copy_from_slice(cur);
            out.push(p);
            return;
        }
        for i in 0..k as u8 {
            if !cur.contains(&i) {
                cur.push(i);
                rec(k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(k, &mut Vec::new(), &mut out);
    out
}

/// Substitutions fixing every guess of `history` that also map `set` onto
/// itself, identity excluded.
fn history_substitutions(
    game: &Game,
    history: &History,
    set: &CandidateSet,
    membership: &Membership,
) -> Vec<Substitution> {
    let k = game.params().positions();
    let mut out = Vec::new();
    'perm: for pos in permutations(k).into_iter().skip(1) {
        let mut digit = [u8::MAX; MAX_SYMBOLS];
        let mut used = 0u16;
        for g in history.guesses() {
            for p in 0..k {
                let from = g.digit(p) as usize;
                let to = g.digit(pos[p] as usize);
                if digit[from] == u8::MAX {
                    if used & (1 << to) != 0 {
                        continue 'perm;
                    }
                    used |= 1 << to;
                    digit[from] = to;
                } else if digit[from] != to {
                    continue 'perm;
                }
            }
        }
        for (d, slot) in digit.iter_mut().enumerate() {
            if *slot == u8::MAX {
                *slot = d as u8;
            }
        }
        let sub = Substitution { digit, pos };
        if set.codes(game).all(|c| membership.contains(game, sub.apply(c))) {
            out.push(sub);
        }
    }
    out
}

/// Equivalence structure at one node of the search.
#[derive(Debug, Clone)]
pub struct Symmetry {
    groups: DigitGroups,
    substitutions: Vec<Substitution>,
}

impl Symmetry {
    pub fn new(game: &Game, history: &History, set: &CandidateSet) -> Self {
        let membership = Membership::new(game, set);
        Symmetry {
            groups: groups_with(game, history, set, &membership),
            substitutions: history_substitutions(game, history, set, &membership),
        }
    }

    pub fn groups(&self) -> &DigitGroups {
        &self.groups
    }

    /// Number of non-trivial history-preserving substitutions.
    pub fn substitution_count(&self) -> usize {
        self.substitutions.len()
    }

    /// Smallest code reachable from `code` by substitutions within groups:
    /// members of each group are reassigned in ascending order of first use.
    pub fn normalize(&self, code: Code) -> Code {
        let k = code.len();
        let mut next = [0u8; MAX_SYMBOLS];
        let mut out = [0u8; MAX_POSITIONS];
        for (p, slot) in out.iter_mut().enumerate().take(k) {
            let d = code.digit(p);
            let gi = self.groups.group_of[d as usize] as usize;
            let group = &self.groups.groups[gi];
            *slot = if group.len() > 1 {
                let r = group[next[gi] as usize];
                next[gi] += 1;
                r
            } else {
                d
            };
        }
        Code::from_digits(&out[..k]).expect("normalization is injective")
    }

    /// Same as `normalize(code) == code`: group members appear in
    /// ascending order.
    fn is_normalized(&self, code: Code) -> bool {
        let mut next = [0u8; MAX_SYMBOLS];
        for p in 0..code.len() {
            let d = code.digit(p) as usize;
            let gi = self.groups.group_of[d] as usize;
            if self.groups.rank[d] != next[gi] {
                return false;
            }
            next[gi] += 1;
        }
        true
    }

    /// True iff `guess` is the smallest member of its equivalence class.
    pub fn is_canonical(&self, guess: Code) -> bool {
        if !self.is_normalized(guess) {
            return false;
        }
        self.substitutions
            .iter()
            .all(|s| self.normalize(s.apply(guess)) >= guess)
    }

    /// Canonical guesses as game indices, ascending.
    pub fn canonical_indices(&self, game: &Game) -> Vec<u16> {
        let mut out = Vec::new();
        let mut digits = [0u8; MAX_POSITIONS];
        let mut next = [0u8; MAX_SYMBOLS];
        self.extend_normalized(game, 0, &mut digits, &mut next, &mut out);
        out
    }

    /// Enumerates normalized codes in ascending order, keeping the canonical
    /// ones.
    fn extend_normalized(
        &self,
        game: &Game,
        pos: usize,
        digits: &mut [u8; MAX_POSITIONS],
        next: &mut [u8; MAX_SYMBOLS],
        out: &mut Vec<u16>,
    ) {
        let params = game.params();
        let k = params.positions();
        if pos == k {
            let code = Code::from_digits(&digits[..k]).expect("digits are distinct");
            let canonical = self
                .substitutions
                .iter()
                .all(|s| self.normalize(s.apply(code)) >= code);
            if canonical {
                out.extend(game.index(code));
            }
            return;
        }
        for d in 0..params.symbols() {
            let gi = self.groups.group_of[d] as usize;
            if self.groups.rank[d] != next[gi] {
                continue;
            }
            digits[pos] = d as u8;
            next[gi] += 1;
            self.extend_normalized(game, pos + 1, digits, next, out);
            next[gi] -= 1;
        }
    }
}

/// Whether `guess` survives equivalence elimination at the node reached by
/// `history` with candidates `set`.
pub fn is_canonical(game: &Game, guess: Code, history: &History, set: &CandidateSet) -> bool {
    Symmetry::new(game, history, set).is_canonical(guess)
}

/// All canonical guesses at a node, ascending.
pub fn canonical_guesses(game: &Game, history: &History, set: &CandidateSet) -> Vec<Code> {
    Symmetry::new(game, history, set)
        .canonical_indices(game)
        .into_iter()
        .map(|i| game.code(i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::GameParams;

    fn code(s: &str) -> Code {
        s.parse().unwrap()
    }

    fn after_0123(game: &Game, class: usize) -> (History, CandidateSet) {
        let history: History = [(code("0123"), game.classes()[class])].into_iter().collect();
        let set = history.consistent_set(game);
        (history, set)
    }

    #[test]
    fn absent_digits_form_a_group() {
        let game = Game::standard();
        let set = CandidateSet::from_codes(&game, ["1234", "3456", "1256"].map(code));
        let groups = digit_groups(&game, &History::new(), &set);
        assert_eq!(groups.group_of(0), &[0, 7, 8, 9]);
        // 1..6 play different roles in this set
        for d in 1..=6 {
            assert_eq!(groups.group_of(d), &[d]);
        }
    }

    #[test]
    fn untouched_digits_after_first_guess() {
        let game = Game::standard();
        for class in 1..game.num_classes() {
            let (history, set) = after_0123(&game, class);
            let groups = digit_groups(&game, &history, &set);
            assert_eq!(groups.group_of(4), &[4, 5, 6, 7, 8, 9], "class {class}");
        }
    }

    #[test]
    fn empty_history_single_group() {
        let game = Game::standard();
        let groups = digit_groups(&game, &History::new(), &game.full_set());
        assert_eq!(groups.groups(), &[(0..10).collect::<Vec<u8>>()]);
    }

    #[test]
    fn first_guess_is_unique() {
        let game = Game::standard();
        let sym = Symmetry::new(&game, &History::new(), &game.full_set());
        assert!(sym.is_canonical(code("0123")));
        assert!(!sym.is_canonical(code("0124")));
        assert_eq!(
            canonical_guesses(&game, &History::new(), &game.full_set()),
            vec![code("0123")]
        );
    }

    #[test]
    fn second_guesses() {
        let game = Game::standard();
        let expected: Vec<Code> = [
            "0123", "0124", "0132", "0134", "0145", "0214", "0231", "0234", "0245", "0456",
            "1032", "1034", "1045", "1204", "1230", "1234", "1245", "1435", "1456", "4567",
        ]
        .map(code)
        .to_vec();
        for class in 1..game.num_classes() - 1 {
            let (history, set) = after_0123(&game, class);
            let canon = canonical_guesses(&game, &history, &set);
            assert_eq!(canon, expected, "class {class}");
            assert!(!canon.contains(&code("4568")));
        }
        // after 0C the digits 0-3 leave the set and become interchangeable
        let (history, set) = after_0123(&game, 13);
        assert_eq!(
            canonical_guesses(&game, &history, &set),
            ["0123", "0124", "0145", "0456", "4567"].map(code)
        );
        // every second guess chosen by the published strategies is canonical
        for s in [
            "0132", "0134", "1230", "0245", "0145", "1435", "4567", "0456", "1245", "1456",
            "0214", "1034",
        ] {
            assert!(expected.contains(&code(s)), "{s}");
        }
    }

    #[test]
    fn reduced_game_groups() {
        let game = Game::new(GameParams::new(5, 2).unwrap());
        let sym = Symmetry::new(&game, &History::new(), &game.full_set());
        assert_eq!(sym.canonical_indices(&game).len(), 1);
    }
}

//! Lookup tables, the code space and candidate-set partitioning.

use std::fmt;

use crate::code::{Code, GameParams, Response, MAX_POSITIONS, MAX_SYMBOLS};

/// Sentinel in `class_of` for (bulls, cows) pairs that cannot occur.
pub const INVALID_CLASS: u8 = u8::MAX;

/// Upper bound on the number of response classes (14 for four positions).
pub const MAX_CLASSES: usize = 16;

/// Tables behind the fast MOO product.
///
/// `bulltable` is indexed by the XOR of two digit fields and counts zero
/// nibbles; `cowtable` is indexed by the AND of two masks and counts set bits
/// (shared digits, bulls included).
#[derive(Clone)]
pub struct LookupTables {
    pub bulltable: Box<[u8; 1 << 16]>,
    pub cowtable: Box<[u8; 1 << MAX_SYMBOLS]>,
    /// `class_of[bulls][cows]`, or [`INVALID_CLASS`].
    pub class_of: [[u8; 5]; 5],
    classes: Vec<Response>,
    /// `by_common[bulls * 16 + shared]`, the same map keyed by shared digits.
    by_common: [u8; 256],
}

impl LookupTables {
    pub fn new(params: GameParams) -> Self {
        let k = params.positions();
        let bulltable = Box::new(std::array::from_fn(|x| {
            (0..k).filter(|i| (x >> (4 * i)) & 0xf == 0).count() as u8
        }));
        let cowtable = Box::new(std::array::from_fn(|x| x.count_ones() as u8));
        let classes = response_classes(k);
        let mut class_of = [[INVALID_CLASS; 5]; 5];
        let mut by_common = [INVALID_CLASS; 256];
        for (i, r) in classes.iter().enumerate() {
            class_of[r.bulls as usize][r.cows as usize] = i as u8;
            by_common[r.bulls as usize * 16 + (r.bulls + r.cows) as usize] = i as u8;
        }
        LookupTables {
            bulltable,
            cowtable,
            class_of,
            classes,
            by_common,
        }
    }

    /// Response classes in canonical order; index 0 is the solved class.
    pub fn classes(&self) -> &[Response] {
        &self.classes
    }

    #[inline(always)]
    pub fn class_packed(&self, a: u32, b: u32) -> u8 {
        let bulls = self.bulltable[((a ^ b) & 0xffff) as usize] & 0xf;
        let shared = self.cowtable[((a & b) >> 16) as usize & 0x3ff] & 0xf;
        self.by_common[(bulls << 4 | shared) as usize]
    }

    #[inline]
    pub fn product(&self, a: Code, b: Code) -> Response {
        let bulls = self.bulltable[((a.packed() ^ b.packed()) & 0xffff) as usize];
        let shared = self.cowtable[((a.packed() & b.packed()) >> 16) as usize & 0x3ff];
        Response::new(bulls, shared - bulls)
    }
}

/// All reachable (bulls, cows) pairs for codes of length `positions`, in
/// canonical order.
pub fn response_classes(positions: usize) -> Vec<Response> {
    let mut out = Vec::new();
    for b in 0..=positions as u8 {
        for c in 0..=(positions as u8 - b) {
            let r = Response::new(b, c);
            if r.is_possible(positions) {
                out.push(r);
            }
        }
    }
    out.sort();
    out
}

/// Every code of a game in ascending numeric order.
pub fn enumerate_codes(params: GameParams) -> Vec<Code> {
    fn rec(params: GameParams, prefix: &mut Vec<u8>, out: &mut Vec<Code>) {
        if prefix.len() == params.positions() {
            out.push(Code::from_digits(prefix).expect("distinct digits"));
            return;
        }
        for d in 0..params.symbols() as u8 {
            if !prefix.contains(&d) {
                prefix.push(d);
                rec(params, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::with_capacity(params.code_count());
    rec(params, &mut Vec::with_capacity(MAX_POSITIONS), &mut out);
    out
}

/// A code space with its product tables. Codes are addressed by their index
/// in ascending numeric order, so index order and numeric order agree.
pub struct Game {
    params: GameParams,
    tables: LookupTables,
    codes: Vec<Code>,
    packed: Vec<u32>,
    masks: Vec<u16>,
    index_of: Vec<u16>,
    full: Option<Vec<u8>>,
}

impl Game {
    pub fn new(params: GameParams) -> Self {
        let tables = LookupTables::new(params);
        let codes = enumerate_codes(params);
        let mut index_of = vec![u16::MAX; 1 << 16];
        for (i, c) in codes.iter().enumerate() {
            index_of[c.digit_field() as usize] = i as u16;
        }
        Game {
            params,
            tables,
            packed: codes.iter().map(|c| c.packed()).collect(),
            masks: codes.iter().map(|c| c.mask()).collect(),
            codes,
            index_of,
            full: None,
        }
    }

    pub fn standard() -> Self {
        Game::new(GameParams::standard())
    }

    /// Adds the full guess-by-secret class table (25 MB for the standard
    /// game) so partitioning needs one lookup per pair.
    pub fn with_full_table(mut self) -> Self {
        let n = self.codes.len();
        let mut full = vec![0u8; n * n];
        for g in 0..n {
            let row = &mut full[g * n..(g + 1) * n];
            for (s, slot) in row.iter_mut().enumerate() {
                *slot = self.tables.class_packed(self.packed[g], self.packed[s]);
            }
        }
        self.full = Some(full);
        self
    }

    pub fn has_full_table(&self) -> bool {
        self.full.is_some()
    }

    pub fn params(&self) -> GameParams {
        self.params
    }

    pub fn tables(&self) -> &LookupTables {
        &self.tables
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[Code] {
        &self.codes
    }

    #[inline]
    pub fn code(&self, index: u16) -> Code {
        self.codes[index as usize]
    }

    #[inline]
    pub fn mask(&self, index: u16) -> u16 {
        self.masks[index as usize]
    }

    pub fn index(&self, code: Code) -> Option<u16> {
        let i = self.index_of[code.digit_field() as usize];
        (i != u16::MAX && self.codes[i as usize] == code).then_some(i)
    }

    pub fn parse(&self, text: &str) -> Result<Code, crate::code::ParseCodeError> {
        Code::parse(text, self.params)
    }

    pub fn classes(&self) -> &[Response] {
        self.tables.classes()
    }

    pub fn num_classes(&self) -> usize {
        self.tables.classes().len()
    }

    pub fn class_index(&self, r: Response) -> Option<usize> {
        let (b, c) = (r.bulls as usize, r.cows as usize);
        if b > 4 || c > 4 {
            return None;
        }
        match self.tables.class_of[b][c] {
            INVALID_CLASS => None,
            i => Some(i as usize),
        }
    }

    /// Table-driven MOO product.
    #[inline]
    pub fn product(&self, guess: Code, secret: Code) -> Response {
        self.tables.product(guess, secret)
    }

    /// Response class of `secret` under `guess`, both given by index.
    #[inline(always)]
    pub fn class(&self, guess: u16, secret: u16) -> u8 {
        match &self.full {
            Some(full) => full[guess as usize * self.codes.len() + secret as usize],
            None => self
                .tables
                .class_packed(self.packed[guess as usize], self.packed[secret as usize]),
        }
    }

    /// Packed form of the code at `index`.
    #[inline]
    pub fn packed(&self, index: u16) -> u32 {
        self.packed[index as usize]
    }

    /// Bucket sizes and digit masks of packed `members` under a packed
    /// guess.
    #[inline]
    pub fn profile_packed(
        &self,
        members: &[u32],
        guess: u32,
        counts: &mut [u32; MAX_CLASSES],
        masks: &mut [u16; MAX_CLASSES],
    ) {
        *counts = [0; MAX_CLASSES];
        *masks = [0; MAX_CLASSES];
        for &p in members {
            let c = self.tables.class_packed(guess, p) as usize & 0xf;
            counts[c] += 1;
            masks[c] |= (p >> 16) as u16;
        }
    }

    /// Bucket sizes and digit masks of `members` under `guess`.
    ///
    /// This is the innermost loop of every search, so the table choice is
    /// hoisted out of the member loop.
    #[inline]
    pub fn profile(
        &self,
        members: &[u16],
        guess: u16,
        counts: &mut [u32; MAX_CLASSES],
        masks: &mut [u16; MAX_CLASSES],
    ) {
        *counts = [0; MAX_CLASSES];
        *masks = [0; MAX_CLASSES];
        match &self.full {
            Some(full) => {
                let n = self.codes.len();
                let row = &full[guess as usize * n..(guess as usize + 1) * n];
                for &m in members {
                    let c = row[m as usize] as usize;
                    counts[c] += 1;
                    masks[c] |= self.masks[m as usize];
                }
            }
            None => {
                let g = self.packed[guess as usize];
                for &m in members {
                    let p = self.packed[m as usize];
                    let c = self.tables.class_packed(g, p) as usize;
                    counts[c] += 1;
                    masks[c] |= (p >> 16) as u16;
                }
            }
        }
    }

    /// Bucket sizes only.
    #[inline]
    pub fn counts(&self, members: &[u16], guess: u16, counts: &mut [u32; MAX_CLASSES]) {
        *counts = [0; MAX_CLASSES];
        match &self.full {
            Some(full) => {
                let n = self.codes.len();
                let row = &full[guess as usize * n..(guess as usize + 1) * n];
                for &m in members {
                    counts[row[m as usize] as usize] += 1;
                }
            }
            None => {
                let g = self.packed[guess as usize];
                for &m in members {
                    counts[self.tables.class_packed(g, self.packed[m as usize]) as usize] += 1;
                }
            }
        }
    }

    pub fn full_set(&self) -> CandidateSet {
        CandidateSet::from_sorted(self, (0..self.codes.len() as u16).collect())
    }

    /// Splits `set` by the response to `guess`; bucket `i` holds the members
    /// answering with class `i`.
    pub fn partition(&self, set: &CandidateSet, guess: Code) -> Vec<CandidateSet> {
        let g = self.index(guess).expect("guess belongs to this game");
        self.partition_indices(&set.members, g)
            .into_iter()
            .map(|members| CandidateSet::from_sorted(self, members))
            .collect()
    }

    /// Bucket `i` holds the members of `members` answering `guess` with class `i`.
    pub fn partition_indices(&self, members: &[u16], guess: u16) -> Vec<Vec<u16>> {
        let mut buckets = vec![Vec::new(); self.num_classes()];
        for &m in members {
            buckets[self.class(guess, m) as usize].push(m);
        }
        buckets
    }
}

impl fmt::Debug for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Game")
            .field("params", &self.params)
            .field("codes", &self.codes.len())
            .field("full_table", &self.full.is_some())
            .finish()
    }
}

/// Codes still consistent with a history, held as ascending indices into a
/// [`Game`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CandidateSet {
    members: Vec<u16>,
    mask: u16,
}

impl CandidateSet {
    pub(crate) fn from_sorted(game: &Game, members: Vec<u16>) -> Self {
        let mask = members.iter().fold(0, |m, &i| m | game.mask(i));
        CandidateSet { members, mask }
    }

    pub fn from_indices(game: &Game, mut members: Vec<u16>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self::from_sorted(game, members)
    }

    /// Builds a set from codes of `game`; codes outside the game are ignored.
    pub fn from_codes(game: &Game, codes: impl IntoIterator<Item = Code>) -> Self {
        let members = codes.into_iter().filter_map(|c| game.index(c)).collect();
        Self::from_indices(game, members)
    }

    pub fn members(&self) -> &[u16] {
        &self.members
    }

    pub fn codes<'a>(&'a self, game: &'a Game) -> impl Iterator<Item = Code> + 'a {
        self.members.iter().map(move |&i| game.code(i))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Union of the member digit masks.
    pub fn digit_mask(&self) -> u16 {
        self.mask
    }

    /// Number of distinct digits appearing in the set.
    pub fn kinds(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(&self, index: u16) -> bool {
        self.members.binary_search(&index).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::naive_product;

    #[test]
    fn table_invariants() {
        let t = LookupTables::new(GameParams::standard());
        assert_eq!(t.bulltable.len(), 65536);
        assert_eq!(t.cowtable.len(), 1024);
        assert_eq!(t.bulltable[0], 4);
        assert_eq!(t.cowtable[0], 0);
        assert_eq!(t.class_of[3][1], INVALID_CLASS);
        assert_eq!(t.class_of[4][1], INVALID_CLASS);
        assert_eq!(t.class_of[2][3], INVALID_CLASS);
        assert_eq!(t.class_of[4][0], 0);
        assert_eq!(t.class_of[0][0], 13);
        assert_eq!(t.classes().len(), 14);
    }

    #[test]
    fn reduced_class_lists() {
        assert_eq!(response_classes(4).len(), 14);
        let names: Vec<String> = response_classes(2).iter().map(|r| r.to_string()).collect();
        assert_eq!(names, ["2B", "1B", "2C", "1C", "0C"]);
        assert_eq!(response_classes(3).len(), 9);
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_codes(GameParams::standard()).len(), 5040);
        assert_eq!(enumerate_codes(GameParams::new(4, 4).unwrap()).len(), 24);
        assert_eq!(enumerate_codes(GameParams::new(5, 2).unwrap()).len(), 20);
        let codes = enumerate_codes(GameParams::standard());
        assert!(codes.windows(2).all(|w| w[0].value() < w[1].value()));
        assert_eq!(codes[0].to_string(), "0123");
        assert_eq!(codes[5039].to_string(), "9876");
    }

    #[test]
    fn product_examples() {
        let g = Game::standard();
        let p = |a: &str, b: &str| g.product(a.parse().unwrap(), b.parse().unwrap());
        assert_eq!(p("0123", "3951"), Response::new(0, 2));
        assert_eq!(p("9351", "3951"), Response::new(2, 2));
        assert_eq!(p("2671", "3951"), Response::new(1, 0));
        assert_eq!(p("4567", "4567"), Response::new(4, 0));
    }

    #[test]
    fn reduced_product_matches_naive() {
        for (s, k) in [(5, 2), (6, 3), (4, 3), (4, 4), (7, 2)] {
            let game = Game::new(GameParams::new(s, k).unwrap());
            for &a in game.codes() {
                for &b in game.codes() {
                    assert_eq!(game.product(a, b), naive_product(a, b), "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn full_table_agrees() {
        let game = Game::new(GameParams::new(6, 3).unwrap());
        let full = Game::new(GameParams::new(6, 3).unwrap()).with_full_table();
        for i in 0..game.len() as u16 {
            for j in 0..game.len() as u16 {
                assert_eq!(game.class(i, j), full.class(i, j));
            }
        }
    }

    #[test]
    fn partition_of_full_game_by_0123() {
        let game = Game::standard();
        let parts = game.partition(&game.full_set(), "0123".parse().unwrap());
        let sizes: Vec<usize> = parts.iter().map(|p| p.len()).collect();
        assert_eq!(
            sizes,
            [1, 24, 6, 72, 180, 8, 216, 720, 480, 9, 264, 1260, 1440, 360]
        );
        assert_eq!(sizes.iter().sum::<usize>(), 5040);
    }

    #[test]
    fn partition_singleton_hit() {
        let game = Game::standard();
        let x: Code = "3951".parse().unwrap();
        let set = CandidateSet::from_codes(&game, [x]);
        let parts = game.partition(&set, x);
        assert_eq!(parts[0].len(), 1);
        assert!(parts[1..].iter().all(|p| p.is_empty()));
    }

    #[test]
    fn partition_reduced_game_brute_force() {
        let game = Game::new(GameParams::new(5, 2).unwrap());
        let guess = game.parse("01").unwrap();
        let parts = game.partition(&game.full_set(), guess);
        // brute force by naive product over all 20 codes
        let mut expected = vec![0usize; game.num_classes()];
        for &s in game.codes() {
            let r = naive_product(guess, s);
            expected[game.class_index(r).unwrap()] += 1;
        }
        let sizes: Vec<usize> = parts.iter().map(|p| p.len()).collect();
        assert_eq!(sizes, expected);
        // 2B: 01; 2C: 10; 1B: 0x/x1 with x in {2,3,4}; 1C: 1x/x0 and the rest.
        assert_eq!(sizes, [1, 6, 1, 6, 6]);
        assert_eq!(sizes.iter().sum::<usize>(), 20);
    }

    #[test]
    fn kinds_of_sets() {
        let game = Game::standard();
        let set = CandidateSet::from_codes(
            &game,
            ["1234", "3456", "1256"].iter().map(|s| s.parse().unwrap()),
        );
        assert_eq!(set.kinds(), 6);
        assert_eq!(game.full_set().kinds(), 10);
    }
}

//! Codes, responses and game parameters.
//!
//! A code is packed into a 26-bit integer. The low 16 bits hold one digit per
//! nibble with the most significant digit in the highest used nibble, and the
//! upper 10 bits hold a presence mask (bit `d` set iff digit `d` occurs).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest supported code length; the digit field is four nibbles wide.
pub const MAX_POSITIONS: usize = 4;
/// Largest supported alphabet (decimal digits).
pub const MAX_SYMBOLS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("position count {0} outside 2..=4")]
    Positions(usize),
    #[error("symbol count {symbols} must be in {positions}..=10")]
    Symbols { symbols: usize, positions: usize },
}

/// Size of the game: how many symbols there are and how long a code is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameParams {
    symbols: u8,
    positions: u8,
}

impl GameParams {
    pub fn new(symbols: usize, positions: usize) -> Result<Self, ParamsError> {
        if !(2..=MAX_POSITIONS).contains(&positions) {
            return Err(ParamsError::Positions(positions));
        }
        if symbols < positions || symbols > MAX_SYMBOLS {
            return Err(ParamsError::Symbols { symbols, positions });
        }
        Ok(GameParams {
            symbols: symbols as u8,
            positions: positions as u8,
        })
    }

    /// The standard game: four distinct decimal digits.
    pub const fn standard() -> Self {
        GameParams {
            symbols: 10,
            positions: 4,
        }
    }

    pub fn symbols(&self) -> usize {
        self.symbols as usize
    }

    pub fn positions(&self) -> usize {
        self.positions as usize
    }

    /// Number of codes, `symbols! / (symbols - positions)!`.
    pub fn code_count(&self) -> usize {
        let s = self.symbols();
        (0..self.positions()).map(|i| s - i).product()
    }

    pub fn symbol_mask(&self) -> u16 {
        ((1u32 << self.symbols) - 1) as u16
    }
}

impl Default for GameParams {
    fn default() -> Self {
        Self::standard()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseCodeError {
    #[error("expected {expected} digits, found {found}")]
    Length { expected: usize, found: usize },
    #[error("'{0}' is not a decimal digit")]
    NonDigit(char),
    #[error("digit {0} occurs more than once")]
    DuplicateDigit(u8),
    #[error("digit {digit} is outside the {symbols}-symbol alphabet")]
    SymbolOutOfRange { digit: u8, symbols: usize },
}

/// A packed code of pairwise distinct digits. Codes of equal length order
/// numerically.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Code(u32);

impl Ord for Code {
    fn cmp(&self, other: &Self) -> Ordering {
        self.digit_field()
            .cmp(&other.digit_field())
            .then(self.mask().cmp(&other.mask()))
    }
}

impl PartialOrd for Code {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Code {
    /// Packs digits given most significant first.
    pub fn from_digits(digits: &[u8]) -> Result<Code, ParseCodeError> {
        if digits.is_empty() || digits.len() > MAX_POSITIONS {
            return Err(ParseCodeError::Length {
                expected: MAX_POSITIONS,
                found: digits.len(),
            });
        }
        let mut low = 0u32;
        let mut mask = 0u32;
        for &d in digits {
            if d as usize >= MAX_SYMBOLS {
                return Err(ParseCodeError::NonDigit(char::from(b'0' + d.min(9))));
            }
            if mask & (1 << d) != 0 {
                return Err(ParseCodeError::DuplicateDigit(d));
            }
            mask |= 1 << d;
            low = (low << 4) | d as u32;
        }
        Ok(Code(low | (mask << 16)))
    }

    /// Parses a digit string of exactly `params.positions()` characters.
    pub fn parse(text: &str, params: GameParams) -> Result<Code, ParseCodeError> {
        let chars: Vec<char> = text.chars().collect();
        if chars.len() != params.positions() {
            return Err(ParseCodeError::Length {
                expected: params.positions(),
                found: chars.len(),
            });
        }
        let mut digits = Vec::with_capacity(chars.len());
        for c in chars {
            let d = c.to_digit(10).ok_or(ParseCodeError::NonDigit(c))? as u8;
            if d as usize >= params.symbols() {
                return Err(ParseCodeError::SymbolOutOfRange {
                    digit: d,
                    symbols: params.symbols(),
                });
            }
            digits.push(d);
        }
        Code::from_digits(&digits)
    }

    pub fn packed(self) -> u32 {
        self.0
    }

    /// Digit presence mask (10 bits).
    pub fn mask(self) -> u16 {
        (self.0 >> 16) as u16
    }

    /// The 16-bit digit field.
    pub fn digit_field(self) -> u16 {
        self.0 as u16
    }

    /// Code length, recovered from the mask.
    pub fn len(self) -> usize {
        self.mask().count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask() == 0
    }

    /// Digit at `pos`, counting from the most significant position.
    pub fn digit(self, pos: usize) -> u8 {
        let len = self.len();
        ((self.0 >> (4 * (len - 1 - pos))) & 0xf) as u8
    }

    pub fn digits(self) -> impl Iterator<Item = u8> {
        (0..self.len()).map(move |p| self.digit(p))
    }

    pub fn contains(self, digit: u8) -> bool {
        self.mask() & (1 << digit) != 0
    }

    /// Numeric value of the digit string ("0123" is 123).
    pub fn value(self) -> u32 {
        self.digits().fold(0, |acc, d| acc * 10 + d as u32)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.digits() {
            write!(f, "{}", d)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code({})", self)
    }
}

impl FromStr for Code {
    type Err = ParseCodeError;

    /// Parses a code of the standard game.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Code::parse(s, GameParams::standard())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseResponseError {
    #[error("malformed response '{0}'")]
    Malformed(String),
    #[error("response '{0}' cannot occur")]
    Impossible(String),
}

/// Bulls and cows returned for a guess.
///
/// Ordering follows the conventional listing: more bulls first, then more
/// cows, so `4B < 3B < 2B2C < ... < 1C < 0C`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Response {
    pub bulls: u8,
    pub cows: u8,
}

impl Response {
    pub const fn new(bulls: u8, cows: u8) -> Self {
        Response { bulls, cows }
    }

    /// All bulls: the guess is the secret.
    pub const fn solved(positions: usize) -> Self {
        Response {
            bulls: positions as u8,
            cows: 0,
        }
    }

    pub fn is_solved(&self, positions: usize) -> bool {
        self.bulls as usize == positions
    }

    /// Whether two distinct-digit codes of length `positions` can produce
    /// this response.
    pub fn is_possible(&self, positions: usize) -> bool {
        let (b, c) = (self.bulls as usize, self.cows as usize);
        b + c <= positions && !(b + 1 == positions && c == 1)
    }
}

impl Ord for Response {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bulls
            .cmp(&self.bulls)
            .then(other.cows.cmp(&self.cows))
    }
}

impl PartialOrd for Response {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Response {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.bulls, self.cows) {
            (0, c) => write!(f, "{}C", c),
            (b, 0) => write!(f, "{}B", b),
            (b, c) => write!(f, "{}B{}C", b, c),
        }
    }
}

impl fmt::Debug for Response {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Response {
    type Err = ParseResponseError;

    /// Accepts the "2B1C" / "1B" / "3C" / "0C" notation. Impossibility is
    /// checked against four positions; use [`Response::is_possible`] for
    /// smaller games.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || ParseResponseError::Malformed(s.to_string());
        let bytes = s.trim().as_bytes();
        let (mut bulls, mut cows) = (None, None);
        let mut i = 0;
        while i < bytes.len() {
            if i + 1 >= bytes.len() || !bytes[i].is_ascii_digit() {
                return Err(malformed());
            }
            let n = bytes[i] - b'0';
            match bytes[i + 1].to_ascii_uppercase() {
                b'B' if bulls.is_none() && cows.is_none() => bulls = Some(n),
                b'C' if cows.is_none() => cows = Some(n),
                _ => return Err(malformed()),
            }
            i += 2;
        }
        if bulls.is_none() && cows.is_none() {
            return Err(malformed());
        }
        let r = Response::new(bulls.unwrap_or(0), cows.unwrap_or(0));
        if !r.is_possible(MAX_POSITIONS) {
            return Err(ParseResponseError::Impossible(s.to_string()));
        }
        Ok(r)
    }
}

/// Reference MOO product by direct digit comparison. Deliberately shares no
/// code with the table-driven product.
pub fn naive_product(guess: Code, secret: Code) -> Response {
    let g: Vec<u8> = guess.digits().collect();
    let s: Vec<u8> = secret.digits().collect();
    let mut bulls = 0;
    let mut cows = 0;
    for (i, gd) in g.iter().enumerate() {
        for (j, sd) in s.iter().enumerate() {
            if gd == sd {
                if i == j {
                    bulls += 1;
                } else {
                    cows += 1;
                }
            }
        }
    }
    Response::new(bulls, cows)
}

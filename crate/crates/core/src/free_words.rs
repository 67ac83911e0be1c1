//! Words in a free group `F(n)` with generators `x1, x2, …`.
//!
//! Words are stored exactly as given and are *not* reduced implicitly: the
//! trivializing number `Z(w)` is defined on the raw letter sequence, so
//! every reduction step must be explicit ([`Word::free_reduced`]).
//!
//! The ambient rank is not part of a [`Word`]; operations that need one
//! (Magnus expansion, decomposition) take it as a parameter, because the
//! same word is read in `RF(k)` for varying `k` during combing.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// 1-based index of a free-group generator: `i` denotes `x_i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GeneratorIndex(u32);

impl GeneratorIndex {
    /// Returns `None` unless `value >= 1`.
    pub fn new(value: u32) -> Option<Self> {
        (value >= 1).then_some(Self(value))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for GeneratorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A single letter `x_i^{±1}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    pub index: GeneratorIndex,
    pub sign: Sign,
}

impl Letter {
    pub fn new(index: GeneratorIndex, sign: Sign) -> Self {
        Self { index, sign }
    }

    pub fn inverse(self) -> Self {
        Self {
            index: self.index,
            sign: self.sign.flip(),
        }
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.index == other.index && self.sign != other.sign
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Plus => write!(f, "{}", self.index),
            Sign::Minus => write!(f, "{}^-1", self.index),
        }
    }
}

/// A finite, possibly unreduced sequence of letters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    /// The one-letter word `x_i`.
    pub fn generator(index: GeneratorIndex) -> Self {
        Self {
            letters: alloc::vec![Letter::new(index, Sign::Plus)],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index appearing in the word, or 0 if empty.
    pub fn max_index(&self) -> u32 {
        self.letters
            .iter()
            .map(|l| l.index.get())
            .max()
            .unwrap_or(0)
    }

    /// `u · v`: the letters of `self` followed by those of `other`.
    /// No reduction is performed.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// The reversed sequence with all signs flipped.
    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// The unique freely reduced word equal to `self` in the free group.
    pub fn free_reduced(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.len());
        for &letter in &self.letters {
            match stack.last() {
                Some(&top) if top.is_inverse_of(letter) => {
                    stack.pop();
                }
                _ => stack.push(letter),
            }
        }
        Word { letters: stack }
    }

    pub fn is_free_trivial(&self) -> bool {
        self.free_reduced().is_empty()
    }

    /// `a`-fold concatenation of `self` (of the inverse when `a < 0`).
    pub fn power(&self, a: i64) -> Word {
        let base = if a >= 0 { self.clone() } else { self.inverse() };
        let reps = a.unsigned_abs() as usize;
        let mut letters = Vec::with_capacity(self.len() * reps);
        for _ in 0..reps {
            letters.extend_from_slice(&base.letters);
        }
        Word { letters }
    }

    /// Sum of signs of the letters with index `i`; invariant under free
    /// reduction.
    pub fn exponent_sum(&self, index: GeneratorIndex) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.index == index)
            .map(|l| l.sign.as_i64())
            .sum()
    }
}

/// `u · v · u⁻¹ · v⁻¹` as an unreduced concatenation.
pub fn commutator(u: &Word, v: &Word) -> Word {
    u.concat(v).concat(&u.inverse()).concat(&v.inverse())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "e");
        }
        for (pos, letter) in self.letters.iter().enumerate() {
            if pos > 0 {
                write!(f, " ")?;
            }
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

/// Failure to parse the word grammar `word := "e" | token+`,
/// `token := "x" INT | "x" INT "^-1"` with `INT >= 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WordParseError {
    /// Byte offset of the offending token in the input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for WordParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.offset, self.message)
    }
}

impl core::error::Error for WordParseError {}

/// Whitespace-separated tokens of `s` together with their byte offsets.
pub(crate) fn tokens(s: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = s;
    let mut base = 0usize;
    core::iter::from_fn(move || {
        let trimmed = rest.trim_start();
        base += rest.len() - trimmed.len();
        if trimmed.is_empty() {
            return None;
        }
        let end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let tok = &trimmed[..end];
        let off = base;
        rest = &trimmed[end..];
        base += end;
        Some((off, tok))
    })
}

pub(crate) fn parse_letter_token(offset: usize, tok: &str) -> Result<Letter, WordParseError> {
    let err = |message: String| WordParseError { offset, message };
    let body = tok
        .strip_prefix('x')
        .ok_or_else(|| err(alloc::format!("expected generator token, got `{tok}`")))?;
    let (digits, sign) = match body.strip_suffix("^-1") {
        Some(digits) => (digits, Sign::Minus),
        None => (body, Sign::Plus),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(alloc::format!("bad generator index in `{tok}`")));
    }
    let value: u32 = digits
        .parse()
        .map_err(|_| err(alloc::format!("generator index out of range in `{tok}`")))?;
    let index = GeneratorIndex::new(value)
        .ok_or_else(|| err(alloc::format!("generator index must be >= 1 in `{tok}`")))?;
    Ok(Letter::new(index, sign))
}

impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks: Vec<(usize, &str)> = tokens(s).collect();
        if toks.is_empty() {
            return Err(WordParseError {
                offset: 0,
                message: String::from("empty input; the empty word is written `e`"),
            });
        }
        if toks.len() == 1 && toks[0].1 == "e" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::with_capacity(toks.len());
        for (offset, tok) in toks {
            if tok == "e" {
                return Err(WordParseError {
                    offset,
                    message: String::from("`e` only denotes the empty word on its own"),
                });
            }
            letters.push(parse_letter_token(offset, tok)?);
        }
        Ok(Word { letters })
    }
}

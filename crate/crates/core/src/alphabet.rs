//! Alphabets, words and length-lexicographic enumeration.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::InputError;

/// Rank of a symbol inside its alphabet.
pub type Symbol = u8;

/// Largest supported alphabet.
pub const MAX_ALPHABET: usize = 256;

/// An ordered set of distinct single-character tokens.
///
/// The order fixed at construction is the rank order used everywhere else:
/// enumeration, rows, and the encoding of words as symbol ranks.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
    index: HashMap<char, Symbol>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(symbols: I) -> Result<Self, InputError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(InputError::EmptyAlphabet);
        }
        if symbols.len() > MAX_ALPHABET {
            return Err(InputError::AlphabetTooLarge(symbols.len()));
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (rank, &c) in symbols.iter().enumerate() {
            if index.insert(c, rank as Symbol).is_some() {
                return Err(InputError::DuplicateSymbol(c));
            }
        }
        Ok(Self { symbols, index })
    }

    /// Builds an alphabet from string tokens, each of which must be exactly one
    /// Unicode scalar value.
    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<Self, InputError> {
        let mut chars = Vec::with_capacity(tokens.len());
        for t in tokens {
            let t = t.as_ref();
            let mut it = t.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => chars.push(c),
                _ => return Err(InputError::BadToken(t.to_string())),
            }
        }
        Self::new(chars)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn char_of(&self, s: Symbol) -> char {
        self.symbols[s as usize]
    }

    pub fn rank(&self, c: char) -> Option<Symbol> {
        self.index.get(&c).copied()
    }

    /// Parses a string into a word, rejecting characters outside the alphabet.
    pub fn parse(&self, text: &str) -> Result<Word, InputError> {
        text.chars()
            .map(|c| self.rank(c).ok_or(InputError::UnknownSymbol(c)))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn render(&self, w: &Word) -> String {
        w.0.iter().map(|&s| self.char_of(s)).collect()
    }

    /// Number of words of length at most `n`.
    pub fn count_up_to(&self, n: usize) -> u128 {
        count_words(self.len(), n, EnumMode::UpTo)
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Alphabet").field(&self.symbols).finish()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.symbols {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A finite word, stored as symbol ranks. The empty word is ε.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pushed(&self, s: Symbol) -> Word {
        let mut v = self.0.clone();
        v.push(s);
        Word(v)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Self(v)
    }
}

/// Which finite suffix family a horizon `n` denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnumMode {
    /// All words of length at most `n`.
    UpTo,
    /// All words of length exactly `n`.
    Exact,
}

impl EnumMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EnumMode::UpTo => "upto",
            EnumMode::Exact => "exact",
        }
    }
}

impl fmt::Display for EnumMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EnumMode {
    type Err = InputError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "upto" | "up-to" => Ok(EnumMode::UpTo),
            "exact" => Ok(EnumMode::Exact),
            other => Err(InputError::BadMode(other.to_string())),
        }
    }
}

/// Number of words over `k` symbols selected by (`n`, `mode`).
pub fn count_words(k: usize, n: usize, mode: EnumMode) -> u128 {
    let k = k as u128;
    match mode {
        EnumMode::Exact => k.pow(n as u32),
        EnumMode::UpTo => (0..=n as u32).map(|i| k.pow(i)).sum(),
    }
}

/// Lists words in length-lexicographic order: shorter words first, ties broken
/// lexicographically by rank.
pub fn enumerate_words(alphabet: &Alphabet, n: usize, mode: EnumMode) -> Vec<Word> {
    let k = alphabet.len();
    let lo = match mode {
        EnumMode::UpTo => 0,
        EnumMode::Exact => n,
    };
    let mut out = Vec::with_capacity(count_words(k, n, mode) as usize);
    for len in lo..=n {
        words_of_length(k, len, &mut out);
    }
    out
}

fn words_of_length(k: usize, len: usize, out: &mut Vec<Word>) {
    let mut cur = vec![0 as Symbol; len];
    loop {
        out.push(Word(cur.clone()));
        // odometer increment, least significant symbol last
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if (cur[i] as usize) + 1 < k {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = 0;
                }
                break;
            }
        }
    }
}

//! Finite words, alphabets and ultimately periodic words.
//!
//! Symbols are interned: an [`Alphabet`] owns the symbol names in declaration
//! order and a [`Letter`] is an ordinal into that list. Words are plain letter
//! sequences and only become text again through the alphabet that produced
//! them.
//!
//! Textual syntax: when every symbol of the alphabet is a single character,
//! words are written by juxtaposition (`0110`); otherwise symbols are
//! separated by dots (`a1.a2.a1`). The empty word is the empty string (`λ`
//! is also accepted when it is not itself a symbol). An ultimately periodic
//! word `u·v^ω` is written `u:v`, so `:01` is `(01)^ω`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use thiserror::Error;

/// Printable name of the empty word.
pub const EMPTY_WORD: &str = "λ";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("duplicate symbol `{0}` in alphabet")]
    DuplicateSymbol(String),
    #[error("invalid symbol name `{0}`")]
    InvalidSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("the period of an ultimately periodic word must be non-empty")]
    EmptyPeriod,
    #[error("ultimately periodic word must be written `u:v`, got `{0}`")]
    MissingPeriodSeparator(String),
}

/// Ordinal of a symbol inside its alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u32);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite ordered set of symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for s in symbols {
            let s = s.into();
            if s.is_empty() || s.contains(char::is_whitespace) || s.contains(['.', ':', '#']) {
                return Err(WordError::InvalidSymbol(s));
            }
            if out.contains(&s) {
                return Err(WordError::DuplicateSymbol(s));
            }
            out.push(s);
        }
        if out.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        Ok(Self { symbols: out })
    }

    /// The alphabet `{0, 1, …, p−1}`.
    pub fn numeric(p: usize) -> Self {
        assert!(p >= 1, "numeric alphabet needs at least one symbol");
        Self {
            symbols: (0..p).map(|i| i.to_string()).collect(),
        }
    }

    pub fn binary() -> Self {
        Self::numeric(2)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + Clone {
        (0..self.symbols.len() as u32).map(Letter)
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.index() < self.symbols.len()
    }

    pub fn symbol(&self, letter: Letter) -> &str {
        &self.symbols[letter.index()]
    }

    pub fn letter(&self, symbol: &str) -> Option<Letter> {
        self.symbols
            .iter()
            .position(|s| s == symbol)
            .map(|i| Letter(i as u32))
    }

    /// True when every symbol is one character, so words need no separator.
    pub fn is_compact(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        let text = text.trim();
        if text.is_empty() || (text == EMPTY_WORD && self.letter(EMPTY_WORD).is_none()) {
            return Ok(Word::empty());
        }
        let lookup = |s: &str| {
            self.letter(s)
                .ok_or_else(|| WordError::UnknownSymbol(s.to_string()))
        };
        if self.is_compact() && !text.contains('.') {
            let mut buf = [0u8; 4];
            text.chars()
                .map(|c| lookup(c.encode_utf8(&mut buf)))
                .collect()
        } else {
            text.split('.').map(lookup).collect()
        }
    }

    pub fn format_word(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return EMPTY_WORD.to_string();
        }
        let sep = if self.is_compact() { "" } else { "." };
        word.iter()
            .map(|&l| self.symbol(l))
            .collect::<Vec<_>>()
            .join(sep)
    }

    pub fn parse_periodic(&self, text: &str) -> Result<UltimatelyPeriodicWord, WordError> {
        let (u, v) = text
            .trim()
            .split_once(':')
            .ok_or_else(|| WordError::MissingPeriodSeparator(text.to_string()))?;
        UltimatelyPeriodicWord::new(self.parse_word(u)?, self.parse_word(v)?)
    }

    pub fn format_periodic(&self, x: &UltimatelyPeriodicWord) -> String {
        let u = if x.anti_period().is_empty() {
            String::new()
        } else {
            self.format_word(x.anti_period())
        };
        format!("{}:{}", u, self.format_word(x.period()))
    }

    /// All words of length exactly `n`, in lexicographic order.
    pub fn words_of_length(&self, n: usize) -> WordsOfLength {
        WordsOfLength::new(self.len(), n)
    }

    /// All words of length at most `max_len`, in length-then-lexicographic order.
    pub fn words_up_to(&self, max_len: usize) -> impl Iterator<Item = Word> {
        let p = self.len();
        (0..=max_len).flat_map(move |n| WordsOfLength::new(p, n))
    }
}

/// Odometer over `{0..p−1}^n`, yielding words in lexicographic order.
#[derive(Debug, Clone)]
pub struct WordsOfLength {
    arity: u32,
    current: Option<Vec<Letter>>,
}

impl WordsOfLength {
    fn new(arity: usize, n: usize) -> Self {
        Self {
            arity: arity as u32,
            current: (arity > 0 || n == 0).then(|| vec![Letter(0); n]),
        }
    }
}

impl Iterator for WordsOfLength {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.current.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i].0 + 1 < self.arity {
                succ[i].0 += 1;
                self.current = Some(succ);
                break;
            }
            succ[i] = Letter(0);
        }
        Some(Word(cur))
    }
}

/// A finite word over some alphabet.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn from_indices<I: IntoIterator<Item = u32>>(indices: I) -> Self {
        Self(indices.into_iter().map(Letter).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn concat(&self, other: &[Letter]) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        Word(v)
    }

    pub fn appended(&self, letter: Letter) -> Word {
        self.concat(&[letter])
    }

    /// Symbols `m..n` (half-open).
    pub fn slice(&self, m: usize, n: usize) -> Word {
        Word(self.0[m..n].to_vec())
    }

    pub fn is_prefix_of(&self, other: &[Letter]) -> bool {
        is_prefix(self, other)
    }

    /// Length-then-lexicographic comparison.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    /// Letter ordinals separated by dots; use [`Alphabet::format_word`] for symbol names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(EMPTY_WORD);
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{}", l.0)?;
        }
        Ok(())
    }
}

/// True iff `u·w′ = w` for some `w′`.
pub fn is_prefix(u: &[Letter], w: &[Letter]) -> bool {
    w.starts_with(u)
}

/// The infinite word `u·v^ω` with `|v| ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UltimatelyPeriodicWord {
    anti_period: Word,
    period: Word,
}

impl UltimatelyPeriodicWord {
    pub fn new(anti_period: Word, period: Word) -> Result<Self, WordError> {
        if period.is_empty() {
            return Err(WordError::EmptyPeriod);
        }
        Ok(Self {
            anti_period,
            period,
        })
    }

    pub fn anti_period(&self) -> &Word {
        &self.anti_period
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    pub fn letter_at(&self, i: usize) -> Letter {
        let u = self.anti_period.len();
        if i < u {
            self.anti_period[i]
        } else {
            self.period[(i - u) % self.period.len()]
        }
    }

    /// The first `n` symbols.
    pub fn prefix(&self, n: usize) -> Word {
        (0..n).map(|i| self.letter_at(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bin(s: &str) -> Word {
        Alphabet::binary().parse_word(s).unwrap()
    }

    #[test]
    fn prefix_examples() {
        let a = Alphabet::binary();
        let x = a.parse_periodic(":01").unwrap();
        assert_eq!(x.prefix(0), Word::empty());
        assert_eq!(x.prefix(5), bin("01010"));
        let y = a.parse_periodic("11:10").unwrap();
        assert_eq!(y.prefix(6), bin("111010"));
    }

    #[test]
    fn is_prefix_examples() {
        assert!(is_prefix(&bin(""), &bin("0110")));
        assert!(is_prefix(&bin("01"), &bin("0110")));
        assert!(!is_prefix(&bin("10"), &bin("0110")));
    }

    #[test]
    fn empty_period_rejected() {
        assert_eq!(
            UltimatelyPeriodicWord::new(bin("1"), Word::empty()),
            Err(WordError::EmptyPeriod)
        );
        assert!(matches!(
            Alphabet::binary().parse_periodic("0101"),
            Err(WordError::MissingPeriodSeparator(_))
        ));
    }

    #[test]
    fn multi_character_symbols_use_dots() {
        let a = Alphabet::new(["a1", "a2", "b"]).unwrap();
        let w = a.parse_word("a1.b.a2").unwrap();
        assert_eq!(w, Word::from_indices([0, 2, 1]));
        assert_eq!(a.format_word(&w), "a1.b.a2");
        assert_eq!(a.parse_word("λ").unwrap(), Word::empty());
        assert!(matches!(a.parse_word("a1.c"), Err(WordError::UnknownSymbol(s)) if s == "c"));
    }

    #[test]
    fn alphabet_validation() {
        assert_eq!(
            Alphabet::new(Vec::<String>::new()),
            Err(WordError::EmptyAlphabet)
        );
        assert_eq!(
            Alphabet::new(["0", "0"]),
            Err(WordError::DuplicateSymbol("0".into()))
        );
        assert!(Alphabet::new(["a b"]).is_err());
    }

    #[test]
    fn enumeration_is_shortlex() {
        let a = Alphabet::numeric(3);
        let words: Vec<Word> = a.words_up_to(2).collect();
        assert_eq!(words.len(), 1 + 3 + 9);
        assert!(words
            .windows(2)
            .all(|w| w[0].shortlex_cmp(&w[1]) == Ordering::Less));
        assert_eq!(a.words_of_length(0).count(), 1);
    }

    /// Left cancellation of prefixes, exhaustively over binary words up to length 6.
    #[test]
    fn prefix_left_cancellation_exhaustive() {
        let a = Alphabet::binary();
        let words: Vec<Word> = a.words_up_to(6).collect();
        for u in &words {
            for v in &words {
                for w in &words {
                    let uw = u.concat(w);
                    let uv = u.concat(v);
                    assert_eq!(is_prefix(&uw, &uv), is_prefix(w, v), "u={u} v={v} w={w}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn prefixes_are_nested(u in proptest::collection::vec(0u32..3, 0..4),
                               v in proptest::collection::vec(0u32..3, 1..4),
                               n in 0usize..20, m in 0usize..20) {
            let x = UltimatelyPeriodicWord::new(Word::from_indices(u), Word::from_indices(v)).unwrap();
            let (n, m) = (n.min(m), n.max(m));
            let long = x.prefix(m);
            prop_assert_eq!(long.len(), m);
            prop_assert_eq!(x.prefix(n), long.slice(0, n));
        }

        #[test]
        fn word_text_round_trip(w in proptest::collection::vec(0u32..3, 0..8)) {
            let a = Alphabet::new(["x", "yy", "z"]).unwrap();
            let w = Word::from_indices(w);
            prop_assert_eq!(a.parse_word(&a.format_word(&w)).unwrap(), w);
        }
    }
}

//! Reduced-word arithmetic in a finitely generated free group.
//!
//! Generators are single lowercase ASCII letters. In the compact text form a
//! lowercase letter is a generator and the corresponding uppercase letter is
//! its inverse, so `xxYY` reads as x·x·y⁻¹·y⁻¹; a trailing `^-1` is also
//! accepted on parse. Every [`Word`] is kept freely reduced, so structural
//! equality is equality in the group.

use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Largest supported rank; letter sets are stored as `u64` bitmasks.
pub const MAX_RANK: usize = 26;

/// Ordered set of distinct generator symbols.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: &str) -> Result<Alphabet> {
        let symbols: Vec<char> = symbols.chars().collect();
        if symbols.len() > MAX_RANK {
            return Err(Error::InvalidAlphabet(format!(
                "at most {MAX_RANK} generators supported, got {}",
                symbols.len()
            )));
        }
        for (i, &c) in symbols.iter().enumerate() {
            if !c.is_ascii_lowercase() {
                return Err(Error::InvalidAlphabet(format!(
                    "generator {c:?} is not a lowercase ASCII letter"
                )));
            }
            if symbols[..i].contains(&c) {
                return Err(Error::InvalidAlphabet(format!("duplicate generator {c:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn rank(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol(&self, gen: usize) -> char {
        self.symbols[gen]
    }

    pub fn symbols(&self) -> String {
        self.symbols.iter().collect()
    }

    pub fn gen_of(&self, c: char) -> Option<usize> {
        self.symbols.iter().position(|&s| s == c)
    }

    /// All signed letters in index order: x, x⁻¹, y, y⁻¹, …
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..2 * self.rank()).map(Letter::from_code)
    }

    pub fn letter_set(&self) -> LetterSet {
        LetterSet::full(self.rank())
    }
}

/// A signed generator, packed as `2·generator + sign`.
///
/// The packing makes the derived order the scan order used everywhere:
/// x < x⁻¹ < y < y⁻¹ < …
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub fn new(gen: usize, negative: bool) -> Letter {
        debug_assert!(gen < MAX_RANK);
        Letter((2 * gen + negative as usize) as u8)
    }

    pub fn positive(gen: usize) -> Letter {
        Letter::new(gen, false)
    }

    pub fn from_code(code: usize) -> Letter {
        debug_assert!(code < 2 * MAX_RANK);
        Letter(code as u8)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_negative(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    pub fn display(self, alphabet: &Alphabet) -> char {
        let c = alphabet.symbol(self.generator());
        if self.is_negative() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = (b'a' + (self.0 >> 1)) as char;
        if self.is_negative() {
            write!(f, "{}", c.to_ascii_uppercase())
        } else {
            write!(f, "{c}")
        }
    }
}

/// Subset of the signed letters E±1, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LetterSet(u64);

impl LetterSet {
    pub const EMPTY: LetterSet = LetterSet(0);

    pub fn full(rank: usize) -> LetterSet {
        if rank == 0 {
            LetterSet(0)
        } else {
            LetterSet((1u64 << (2 * rank)) - 1)
        }
    }

    pub fn single(l: Letter) -> LetterSet {
        LetterSet(1u64 << l.code())
    }

    pub fn contains(self, l: Letter) -> bool {
        self.0 >> l.code() & 1 == 1
    }

    pub fn insert(&mut self, l: Letter) {
        self.0 |= 1u64 << l.code();
    }

    pub fn union(self, other: LetterSet) -> LetterSet {
        LetterSet(self.0 | other.0)
    }

    pub fn intersection(self, other: LetterSet) -> LetterSet {
        LetterSet(self.0 & other.0)
    }

    pub fn difference(self, other: LetterSet) -> LetterSet {
        LetterSet(self.0 & !other.0)
    }

    /// The set of inverses {ē : e ∈ S}: swaps each sign-pair of bits.
    pub fn inverses(self) -> LetterSet {
        const EVEN: u64 = 0x5555_5555_5555_5555;
        LetterSet((self.0 & EVEN) << 1 | (self.0 >> 1) & EVEN)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Letter> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let code = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(Letter::from_code(code))
            }
        })
    }
}

impl fmt::Debug for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub(crate) fn push_reduced(buf: &mut Vec<Letter>, l: Letter) {
    if buf.last() == Some(&l.inverse()) {
        buf.pop();
    } else {
        buf.push(l);
    }
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Word {
        Word {
            letters: Vec::new(),
        }
    }

    pub fn single(l: Letter) -> Word {
        Word { letters: vec![l] }
    }

    /// Free reduction of an arbitrary letter sequence; idempotent.
    pub fn reduce(raw: impl IntoIterator<Item = Letter>) -> Word {
        let mut buf = Vec::new();
        for l in raw {
            push_reduced(&mut buf, l);
        }
        Word { letters: buf }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Reduced product self·other.
    pub fn concat(&self, other: &Word) -> Word {
        let mut buf = self.letters.clone();
        buf.reserve(other.len());
        for &l in &other.letters {
            push_reduced(&mut buf, l);
        }
        Word { letters: buf }
    }

    pub fn invert(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Length-then-lexicographic order; total and deterministic.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }

    pub fn parse(s: &str, alphabet: &Alphabet) -> Result<Word> {
        let err = |reason: &str| Error::ParseWord {
            word: s.to_string(),
            reason: reason.to_string(),
        };
        if s.trim() == "1" {
            return Ok(Word::empty());
        }
        let mut buf: Vec<Letter> = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                ' ' | '\t' => {}
                '^' => {
                    if chars.next() != Some('-') || chars.next() != Some('1') {
                        return Err(err("expected `^-1`"));
                    }
                    let last = buf
                        .pop()
                        .ok_or_else(|| err("`^-1` with nothing before it"))?;
                    buf.push(last.inverse());
                }
                _ if c.is_ascii_lowercase() => {
                    let gen = alphabet
                        .gen_of(c)
                        .ok_or_else(|| err(&format!("unknown generator {c:?}")))?;
                    buf.push(Letter::positive(gen));
                }
                _ if c.is_ascii_uppercase() => {
                    let lower = c.to_ascii_lowercase();
                    let gen = alphabet
                        .gen_of(lower)
                        .ok_or_else(|| err(&format!("unknown generator {lower:?}")))?;
                    buf.push(Letter::new(gen, true));
                }
                _ => return Err(err(&format!("unexpected character {c:?}"))),
            }
        }
        Ok(Word::reduce(buf))
    }

    /// Compact text form; the identity prints as `1`.
    pub fn display(&self, alphabet: &Alphabet) -> String {
        if self.is_empty() {
            "1".to_string()
        } else {
            self.letters.iter().map(|l| l.display(alphabet)).collect()
        }
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        self.shortlex_cmp(other)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

/// A finite set of distinct nonempty words, kept in shortlex order.
///
/// Identity words offered to the constructor are dropped; the count of
/// dropped identities is retained for diagnostics.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WordSet {
    words: Vec<Word>,
    dropped_identities: usize,
}

impl WordSet {
    pub fn new(words: impl IntoIterator<Item = Word>) -> WordSet {
        let mut dropped = 0;
        let mut kept: Vec<Word> = Vec::new();
        for w in words {
            if w.is_empty() {
                dropped += 1;
            } else {
                kept.push(w);
            }
        }
        kept.sort();
        kept.dedup();
        WordSet {
            words: kept,
            dropped_identities: dropped,
        }
    }

    pub fn empty() -> WordSet {
        WordSet {
            words: Vec::new(),
            dropped_identities: 0,
        }
    }

    pub fn parse(words: &[&str], alphabet: &Alphabet) -> Result<WordSet> {
        let parsed: Result<Vec<Word>> = words.iter().map(|s| Word::parse(s, alphabet)).collect();
        Ok(WordSet::new(parsed?))
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn dropped_identities(&self) -> usize {
        self.dropped_identities
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    /// ‖Z‖: the sum of the word lengths.
    pub fn total_length(&self) -> usize {
        self.words.iter().map(Word::len).sum()
    }

    /// Generators that occur in some word, as sorted indices.
    pub fn support(&self, alphabet: &Alphabet) -> Vec<usize> {
        let letters = self.support_letters();
        (0..alphabet.rank())
            .filter(|&g| letters.contains(Letter::positive(g)))
            .collect()
    }

    /// Both signs of every supported generator.
    pub fn support_letters(&self) -> LetterSet {
        let mut set = LetterSet::EMPTY;
        for w in &self.words {
            for &l in w.letters() {
                set.insert(l);
                set.insert(l.inverse());
            }
        }
        set
    }

    /// Does Z contain both a word and its inverse?
    pub fn inverses_intersect(&self) -> bool {
        self.words.iter().any(|w| self.contains(&w.invert()))
    }

    /// Image set under a generator map (deduplicated, identities dropped).
    pub fn map(&self, m: &GeneratorMap) -> WordSet {
        WordSet::new(self.words.iter().map(|w| m.apply(w)))
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        json!({
            "generators": alphabet.symbols(),
            "words": self.words.iter().map(|w| w.display(alphabet)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<(Alphabet, WordSet)> {
        let gens = v
            .get("generators")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidInput("missing \"generators\"".into()))?;
        let alphabet = Alphabet::new(gens)?;
        let words = v
            .get("words")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("missing \"words\"".into()))?;
        let mut parsed = Vec::new();
        for w in words {
            let s = w
                .as_str()
                .ok_or_else(|| Error::InvalidInput("words must be strings".into()))?;
            parsed.push(Word::parse(s, &alphabet)?);
        }
        Ok((alphabet, WordSet::new(parsed)))
    }
}

/// A generator-indexed family of image words: an endomorphism of the free
/// group, written as a right action.
///
/// `compose(f, s)` is the product f·s in exponent notation, so
/// `compose(f, s).apply(w) == s.apply(f.apply(w))`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorMap {
    images: Vec<Word>,
}

impl GeneratorMap {
    pub fn identity(rank: usize) -> GeneratorMap {
        GeneratorMap {
            images: (0..rank)
                .map(|g| Word::single(Letter::positive(g)))
                .collect(),
        }
    }

    pub fn new(images: Vec<Word>) -> GeneratorMap {
        GeneratorMap { images }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, gen: usize) -> &Word {
        &self.images[gen]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(g, w)| w.letters() == [Letter::positive(g)])
    }

    /// Substitute every letter by its image (inverted for negative letters)
    /// and reduce.
    pub fn apply(&self, w: &Word) -> Word {
        let mut buf: Vec<Letter> = Vec::with_capacity(w.len() * 2);
        for &l in w.letters() {
            let img = &self.images[l.generator()];
            if l.is_negative() {
                for &m in img.letters().iter().rev() {
                    push_reduced(&mut buf, m.inverse());
                }
            } else {
                for &m in img.letters() {
                    push_reduced(&mut buf, m);
                }
            }
        }
        Word::reduce(buf)
    }

    /// Right-action composition: `self` acts first, `after` second.
    pub fn compose(&self, after: &GeneratorMap) -> GeneratorMap {
        GeneratorMap {
            images: self.images.iter().map(|w| after.apply(w)).collect(),
        }
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        let mut map = serde_json::Map::new();
        for (g, w) in self.images.iter().enumerate() {
            map.insert(alphabet.symbol(g).to_string(), json!(w.display(alphabet)));
        }
        Value::Object(map)
    }
}

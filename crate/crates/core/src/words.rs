//! Finite words, morphisms, codings and lazily generated infinite words.
//!
//! Letters are single printable ASCII bytes. Digit words use `'0'..='9'`, so
//! the digit value of a letter `c` is `c - b'0'`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;
use std::sync::Mutex;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arithmetic::{check_base, digit};
use crate::error::{Error, Result};

/// A letter is one printable, non-whitespace ASCII byte.
pub type Letter = u8;

const NO_SLOT: u8 = u8::MAX;

fn is_letter_byte(c: u8) -> bool {
    (0x21..=0x7e).contains(&c)
}

/// A finite word, possibly empty.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from raw bytes, rejecting anything that is not a letter.
    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = bytes.iter().find(|&&c| !is_letter_byte(c)) {
            return Err(Error::Alphabet(format!(
                "byte 0x{bad:02x} is not a printable ASCII letter"
            )));
        }
        Ok(Word(bytes))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn as_str(&self) -> &str {
        // letters are ASCII by construction
        std::str::from_utf8(&self.0).expect("words hold ASCII letters")
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn extend_from_slice(&mut self, letters: &[Letter]) {
        self.0.extend_from_slice(letters);
    }

    pub fn truncate(&mut self, len: usize) {
        self.0.truncate(len);
    }

    /// `self` repeated `times` times.
    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    /// Subword `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl AsRef<[u8]> for Word {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

/// Unchecked conversion used for literals; panics on non-letter bytes.
impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word::from_bytes(s.as_bytes().to_vec()).expect("word literal must be printable ASCII")
    }
}

impl From<&[u8]> for Word {
    fn from(s: &[u8]) -> Self {
        Word::from_bytes(s.to_vec()).expect("word must be printable ASCII")
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_str())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Word::from_bytes(s.into_bytes()).map_err(serde::de::Error::custom)
    }
}

/// A non-empty, duplicate-free set of letters in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet(Vec<Letter>);

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for c in letters {
            if !is_letter_byte(c) {
                return Err(Error::Alphabet(format!("byte 0x{c:02x} is not a printable letter")));
            }
            if !seen.insert(c) {
                return Err(Error::Alphabet(format!("duplicate letter '{}'", c as char)));
            }
            out.push(c);
        }
        if out.is_empty() {
            return Err(Error::Alphabet("alphabet is empty".into()));
        }
        Ok(Alphabet(out))
    }

    /// The digit alphabet `{0, .., p-1}`.
    pub fn digits(p: u32) -> Result<Self> {
        check_base(p)?;
        Alphabet::new((0..p as u8).map(|d| b'0' + d))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: Letter) -> bool {
        self.0.contains(&c)
    }
}

/// Letterwise complement `b -> p-1-b` of a digit word.
pub fn complement(w: &[u8], p: u32) -> Result<Word> {
    check_base(p)?;
    w.iter()
        .map(|&c| digit(c, p).map(|d| b'0' + (p - 1 - d) as u8))
        .collect()
}

/// Structural data derived from the image lengths and incidence graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismProperties {
    pub k_uniform: Option<usize>,
    pub expanding: bool,
    pub primitive: bool,
}

/// A morphism `A -> A*` given by one image per letter.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    alphabet: Alphabet,
    images: Vec<Word>,
    slot: [u8; 128],
}

impl Morphism {
    /// Builds a morphism from `(letter, image)` rules. The alphabet is the set
    /// of rule heads, in order.
    pub fn new(rules: impl IntoIterator<Item = (Letter, Word)>) -> Result<Self> {
        let mut heads = Vec::new();
        let mut images = Vec::new();
        let mut slot = [NO_SLOT; 128];
        for (head, image) in rules {
            if !is_letter_byte(head) {
                return Err(Error::Alphabet(format!("0x{head:02x} is not a printable letter")));
            }
            if slot[head as usize] != NO_SLOT {
                return Err(Error::DuplicateRule(head as char));
            }
            if heads.len() >= NO_SLOT as usize {
                return Err(Error::Alphabet("too many letters".into()));
            }
            slot[head as usize] = heads.len() as u8;
            heads.push(head);
            images.push(image);
        }
        for image in &images {
            if let Some(&c) = image.iter().find(|&&c| slot[c as usize] == NO_SLOT) {
                return Err(Error::UndeclaredLetter(c as char));
            }
        }
        Ok(Morphism {
            alphabet: Alphabet::new(heads)?,
            images,
            slot,
        })
    }

    /// The Thue–Morse morphism `0 -> 01, 1 -> 10`.
    pub fn thue_morse() -> Self {
        Morphism::new([(b'0', Word::from("01")), (b'1', Word::from("10"))])
            .expect("Thue-Morse rules are valid")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn index(&self, c: Letter) -> Option<usize> {
        match self.slot.get(c as usize) {
            Some(&s) if s != NO_SLOT => Some(s as usize),
            _ => None,
        }
    }

    fn index_of(&self, c: Letter) -> Result<usize> {
        self.index(c).ok_or(Error::UnknownLetter(c as char))
    }

    pub fn image(&self, c: Letter) -> Option<&Word> {
        self.index(c).map(|i| &self.images[i])
    }

    /// Rules in declaration order.
    pub fn rules(&self) -> impl Iterator<Item = (Letter, &Word)> {
        self.alphabet.letters().iter().copied().zip(self.images.iter())
    }

    /// Applies the morphism letterwise.
    pub fn apply(&self, w: &[Letter]) -> Result<Word> {
        let mut out = Vec::with_capacity(w.len() * 2);
        for &c in w {
            out.extend_from_slice(&self.images[self.index_of(c)?]);
        }
        Ok(Word(out))
    }

    /// Applies the morphism `n` times.
    pub fn iterate(&self, w: &[Letter], n: usize) -> Result<Word> {
        let mut cur = Word(w.to_vec());
        for _ in 0..n {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }

    /// `|φⁿ(w)|` without materializing the word.
    pub fn iterate_len(&self, w: &[Letter], n: usize) -> Result<u128> {
        let mut counts = vec![0u128; self.alphabet.len()];
        for &c in w {
            counts[self.index_of(c)?] += 1;
        }
        for _ in 0..n {
            let mut next = vec![0u128; counts.len()];
            for (i, &cnt) in counts.iter().enumerate() {
                if cnt == 0 {
                    continue;
                }
                for &c in self.images[i].iter() {
                    let j = self.slot[c as usize] as usize;
                    next[j] = next[j].saturating_add(cnt);
                }
            }
            counts = next;
        }
        Ok(counts.into_iter().fold(0u128, |a, b| a.saturating_add(b)))
    }

    /// Letters erased by some iterate: the least set `M` with every
    /// `a` such that `φ(a) ∈ M*` belonging to `M`.
    pub fn mortal_letters(&self) -> BTreeSet<Letter> {
        let mortal = self.mortal_mask();
        self.alphabet
            .letters()
            .iter()
            .zip(mortal)
            .filter_map(|(&c, m)| m.then_some(c))
            .collect()
    }

    pub(crate) fn mortal_mask(&self) -> Vec<bool> {
        let n = self.alphabet.len();
        let mut mortal = vec![false; n];
        // each pass adds at least one letter or stops
        for _ in 0..=n {
            let mut changed = false;
            for i in 0..n {
                if !mortal[i]
                    && self.images[i]
                        .iter()
                        .all(|&c| mortal[self.slot[c as usize] as usize])
                {
                    mortal[i] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        mortal
    }

    /// `φ(a) = a·x` with `x` containing at least one non-mortal letter.
    pub fn is_prolongable(&self, a: Letter) -> bool {
        let Some(i) = self.index(a) else {
            return false;
        };
        let image = &self.images[i];
        if image.first() != Some(&a) {
            return false;
        }
        let mortal = self.mortal_mask();
        image[1..]
            .iter()
            .any(|&c| !mortal[self.slot[c as usize] as usize])
    }

    /// First `n` letters of the fixed point `φ^ω(a) = a x φ(x) φ²(x) …`.
    pub fn fixed_point_prefix(&self, a: Letter, n: usize) -> Result<Word> {
        if !self.is_prolongable(a) {
            return Err(Error::NotProlongable(a as char));
        }
        let image = self.image(a).expect("prolongable letters have images");
        let mut out = image.clone();
        let mut block = Word(image[1..].to_vec());
        while out.len() < n {
            block = self.apply(&block)?;
            if block.is_empty() {
                return Err(Error::Internal(format!(
                    "fixed point of '{}' stopped growing at length {}",
                    a as char,
                    out.len()
                )));
            }
            out.extend_from_slice(&block);
        }
        out.truncate(n);
        Ok(out)
    }

    /// Uniformity, expansion and primitivity.
    pub fn properties(&self) -> MorphismProperties {
        let lens: Vec<usize> = self.images.iter().map(|w| w.len()).collect();
        let k_uniform = if lens.iter().all(|&l| l == lens[0]) {
            Some(lens[0])
        } else {
            None
        };
        MorphismProperties {
            k_uniform,
            expanding: lens.iter().all(|&l| l >= 2),
            primitive: self.is_primitive(),
        }
    }

    /// Boolean incidence powers up to `|A|²`.
    fn is_primitive(&self) -> bool {
        let n = self.alphabet.len();
        let mut incidence = vec![vec![false; n]; n];
        for (i, image) in self.images.iter().enumerate() {
            for &c in image.iter() {
                incidence[i][self.slot[c as usize] as usize] = true;
            }
        }
        let mut power = incidence.clone();
        for _ in 0..n * n {
            if power.iter().all(|row| row.iter().all(|&b| b)) {
                return true;
            }
            let mut next = vec![vec![false; n]; n];
            for i in 0..n {
                for k in 0..n {
                    if power[i][k] {
                        for j in 0..n {
                            next[i][j] |= incidence[k][j];
                        }
                    }
                }
            }
            power = next;
        }
        false
    }

    /// Every image is a single letter.
    pub fn is_coding(&self) -> bool {
        self.images.iter().all(|w| w.len() == 1)
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, image)) in self.rules().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{}->{}", c as char, image)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({self})")
    }
}

fn parse_rules(text: &str) -> Result<Vec<(Letter, Word)>> {
    let mut rules = Vec::new();
    for (n, chunk) in text.split([';', '\n']).enumerate() {
        let rule: String = chunk.chars().filter(|c| !c.is_whitespace()).collect();
        if rule.is_empty() {
            continue;
        }
        let syntax = |reason: &str| Error::Syntax {
            rule: n + 1,
            reason: reason.to_string(),
        };
        let (head, rhs) = rule.split_once("->").ok_or_else(|| syntax("missing '->'"))?;
        let mut head_chars = head.bytes();
        let letter = match (head_chars.next(), head_chars.next()) {
            (Some(c), None) => c,
            (None, _) => return Err(syntax("missing letter before '->'")),
            _ => return Err(syntax("rule head must be a single letter")),
        };
        if !is_letter_byte(letter) || matches!(letter, b'-' | b'>') {
            return Err(syntax("rule head is not a valid letter"));
        }
        if rhs.contains("->") || rhs.bytes().any(|c| !is_letter_byte(c) || c == b'>') {
            return Err(syntax("right-hand side contains invalid characters"));
        }
        rules.push((letter, Word(rhs.as_bytes().to_vec())));
    }
    Ok(rules)
}

/// Parses rules `<letter>-><word>` separated by `;` or newlines. Whitespace
/// is ignored and an empty right-hand side denotes the empty word.
pub fn parse_morphism(text: &str) -> Result<Morphism> {
    Morphism::new(parse_rules(text)?)
}

impl FromStr for Morphism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_morphism(s)
    }
}

/// A letter-to-letter map `A -> B`, possibly into a different alphabet.
#[derive(Clone, PartialEq, Eq)]
pub struct Coding {
    map: [u8; 128],
}

impl Coding {
    pub fn new(pairs: impl IntoIterator<Item = (Letter, Letter)>) -> Result<Self> {
        let mut map = [0u8; 128];
        for (from, to) in pairs {
            if !is_letter_byte(from) || !is_letter_byte(to) {
                return Err(Error::Alphabet("coding letters must be printable".into()));
            }
            if map[from as usize] != 0 {
                return Err(Error::DuplicateRule(from as char));
            }
            map[from as usize] = to;
        }
        Ok(Coding { map })
    }

    /// Same grammar as morphisms; every image must be exactly one letter.
    pub fn parse(text: &str) -> Result<Self> {
        let rules = parse_rules(text)?;
        let mut pairs = Vec::with_capacity(rules.len());
        for (i, (from, image)) in rules.into_iter().enumerate() {
            if image.len() != 1 {
                return Err(Error::Syntax {
                    rule: i + 1,
                    reason: "coding images must be single letters".into(),
                });
            }
            pairs.push((from, image[0]));
        }
        Coding::new(pairs)
    }

    pub fn apply(&self, w: &[Letter]) -> Result<Word> {
        w.iter()
            .map(|&c| match self.map.get(c as usize) {
                Some(&t) if t != 0 => Ok(t),
                _ => Err(Error::UnknownLetter(c as char)),
            })
            .collect()
    }
}

impl fmt::Debug for Coding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = (0..128u8)
            .filter(|&c| self.map[c as usize] != 0)
            .map(|c| format!("{}->{}", c as char, self.map[c as usize] as char))
            .collect();
        write!(f, "Coding({})", pairs.join(";"))
    }
}

#[derive(Clone, Debug)]
enum Source {
    FixedPoint { morphism: Morphism, start: Letter },
    EventuallyPeriodic { head: Word, period: Word },
    Coded { inner: Box<WordStream>, coding: Coding },
    Shifted { inner: Box<WordStream>, offset: usize },
}

/// An infinite word with random access to any finite prefix.
///
/// The longest generated prefix is cached behind a mutex, so a stream can be
/// shared between threads and every reader sees consistent prefixes.
pub struct WordStream {
    source: Source,
    cache: Mutex<Vec<Letter>>,
}

impl WordStream {
    fn from_source(source: Source) -> Self {
        WordStream {
            source,
            cache: Mutex::new(Vec::new()),
        }
    }

    /// The fixed point `φ^ω(a)`.
    pub fn fixed_point(morphism: Morphism, start: Letter) -> Result<Self> {
        if !morphism.is_prolongable(start) {
            return Err(Error::NotProlongable(start as char));
        }
        Ok(Self::from_source(Source::FixedPoint { morphism, start }))
    }

    /// The Thue–Morse word `M = μ^ω(0)`.
    pub fn thue_morse() -> Self {
        Self::fixed_point(Morphism::thue_morse(), b'0').expect("μ is prolongable on 0")
    }

    /// `period^ω`.
    pub fn periodic(period: Word) -> Result<Self> {
        Self::eventually_periodic(Word::new(), period)
    }

    /// `head · period^ω`.
    pub fn eventually_periodic(head: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Self::from_source(Source::EventuallyPeriodic { head, period }))
    }

    /// `τ(self)` for a coding `τ`.
    pub fn coded(self, coding: Coding) -> Self {
        Self::from_source(Source::Coded {
            inner: Box::new(self),
            coding,
        })
    }

    /// `T^offset(self)`, dropping the first `offset` letters.
    pub fn shifted(self, offset: usize) -> Self {
        Self::from_source(Source::Shifted {
            inner: Box::new(self),
            offset,
        })
    }

    fn generate(&self, n: usize) -> Result<Vec<Letter>> {
        match &self.source {
            Source::FixedPoint { morphism, start } => {
                Ok(morphism.fixed_point_prefix(*start, n)?.into_bytes())
            }
            Source::EventuallyPeriodic { head, period } => Ok(head
                .iter()
                .copied()
                .chain(period.iter().copied().cycle())
                .take(n)
                .collect()),
            Source::Coded { inner, coding } => {
                Ok(coding.apply(&inner.try_prefix(n)?)?.into_bytes())
            }
            Source::Shifted { inner, offset } => {
                Ok(inner.try_prefix(n + offset)?[*offset..].to_vec())
            }
        }
    }

    /// The first `n` letters, or the error raised by the generator (only an
    /// unmapped letter under a coding can fail).
    pub fn try_prefix(&self, n: usize) -> Result<Word> {
        let mut cache = self.cache.lock().unwrap_or_else(|e| e.into_inner());
        if cache.len() < n {
            let target = n.max(cache.len() * 2);
            *cache = self.generate(target)?;
        }
        Ok(Word(cache[..n].to_vec()))
    }

    /// The first `n` letters.
    ///
    /// Panics if the stream is a coding that does not cover the inner
    /// alphabet; use [`WordStream::try_prefix`] to get the error instead.
    pub fn prefix(&self, n: usize) -> Word {
        self.try_prefix(n).expect("stream generation failed")
    }
}

impl Clone for WordStream {
    fn clone(&self) -> Self {
        let cache = self.cache.lock().unwrap_or_else(|e| e.into_inner()).clone();
        WordStream {
            source: self.source.clone(),
            cache: Mutex::new(cache),
        }
    }
}

impl fmt::Debug for WordStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WordStream")
            .field("source", &self.source)
            .finish_non_exhaustive()
    }
}

//! Freely reduced words over named generators.
//!
//! Conjugation follows the right-action convention `a^b = b⁻¹ a b`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid generator name {0:?}")]
    BadName(String),
    #[error("{kind} expects {expected} arguments, got {got}")]
    Arity {
        kind: RelationKind,
        expected: usize,
        got: usize,
    },
    #[error("symbol {0} is not in the domain of the substitution")]
    UndefinedSymbol(String),
}

/// A generator symbol such as `s1`, `t2` or a quiver vertex name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenSym(Arc<str>);

impl GenSym {
    pub fn new(name: &str) -> Result<Self, WordError> {
        let bad = name.is_empty()
            || name == "1"
            || name.starts_with('-')
            || name
                .chars()
                .any(|c| c.is_whitespace() || matches!(c, '^' | '(' | ')' | '~'));
        if bad {
            return Err(WordError::BadName(name.to_string()));
        }
        Ok(GenSym(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for GenSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for GenSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for GenSym {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for GenSym {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        GenSym::new(&s).map_err(serde::de::Error::custom)
    }
}

/// A generator with an exponent sign.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    pub gen: GenSym,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: GenSym, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            gen: self.gen.clone(),
            inv: !self.inv,
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inv {
            write!(f, "-{}", self.gen)
        } else {
            write!(f, "{}", self.gen)
        }
    }
}

/// Parse one token of the text form (`x` or `-x`).
pub fn parse_letter(tok: &str) -> Result<Letter, WordError> {
    match tok.strip_prefix('-') {
        Some(rest) => Ok(Letter::new(GenSym::new(rest)?, true)),
        None => Ok(Letter::new(GenSym::new(tok)?, false)),
    }
}

/// Parse a whitespace separated token list without reducing it.
pub fn parse_raw(text: &str) -> Result<Vec<Letter>, WordError> {
    let text = text.trim();
    if text == "1" {
        return Ok(Vec::new());
    }
    text.split_whitespace().map(parse_letter).collect()
}

/// Render a raw letter sequence in the text form.
pub fn format_raw(letters: &[Letter]) -> String {
    if letters.is_empty() {
        return "1".to_string();
    }
    letters.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

/// An element of a free group, stored freely reduced.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Free reduction of a raw letter sequence.
pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last().is_some_and(|last| last.cancels(&l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word { letters: out }
}

/// `b⁻¹ a b`, reduced.
pub fn conjugate(a: &Word, b: &Word) -> Word {
    b.inverse().mul(a).mul(b)
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn gen(g: &GenSym) -> Self {
        Word {
            letters: vec![Letter::new(g.clone(), false)],
        }
    }

    pub fn parse(text: &str) -> Result<Self, WordError> {
        Ok(reduce(parse_raw(text)?))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        reduce(self.letters.iter().chain(other.letters.iter()).cloned())
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    /// `self^by`, i.e. `by⁻¹ self by`.
    pub fn conj(&self, by: &Word) -> Word {
        conjugate(self, by)
    }

    pub fn pow(&self, n: i32) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Generators occurring in the word.
    pub fn support(&self) -> BTreeSet<GenSym> {
        self.letters.iter().map(|l| l.gen.clone()).collect()
    }

    /// Exponent sum of `g`.
    pub fn exponent_sum(&self, g: &GenSym) -> i64 {
        self.letters
            .iter()
            .filter(|l| &l.gen == g)
            .map(|l| if l.inv { -1 } else { 1 })
            .sum()
    }

    /// Strip matching letters from both ends so that the result is cyclically reduced.
    pub fn cyclic_core(&self) -> Word {
        let n = self.letters.len();
        let mut i = 0;
        while i < n / 2 && self.letters[i].cancels(&self.letters[n - 1 - i]) {
            i += 1;
        }
        Word {
            letters: self.letters[i..n - i].to_vec(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_raw(&self.letters))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl std::str::FromStr for Word {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// The relation templates used throughout: commutation, braid,
/// skew commutation `xaxbx = bxa` and the triangle relation `abca = bcab = cabc`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum RelationKind {
    Co,
    Br,
    SCo,
    Tr,
}

impl RelationKind {
    pub fn arity(self) -> usize {
        match self {
            RelationKind::Co | RelationKind::Br => 2,
            RelationKind::SCo | RelationKind::Tr => 3,
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RelationKind::Co => "Co",
            RelationKind::Br => "Br",
            RelationKind::SCo => "SCo",
            RelationKind::Tr => "Tr",
        };
        f.write_str(s)
    }
}

fn product(ws: &[&Word]) -> Word {
    ws.iter().fold(Word::empty(), |acc, w| acc.mul(w))
}

/// The relation as a list of equations `lhs = rhs`.
pub fn expand_equations(kind: RelationKind, args: &[Word]) -> Result<Vec<(Word, Word)>, WordError> {
    if args.len() != kind.arity() {
        return Err(WordError::Arity {
            kind,
            expected: kind.arity(),
            got: args.len(),
        });
    }
    Ok(match kind {
        RelationKind::Co => {
            let (a, b) = (&args[0], &args[1]);
            vec![(product(&[a, b]), product(&[b, a]))]
        }
        RelationKind::Br => {
            let (a, b) = (&args[0], &args[1]);
            vec![(product(&[a, b, a]), product(&[b, a, b]))]
        }
        RelationKind::SCo => {
            let (x, a, b) = (&args[0], &args[1], &args[2]);
            vec![(product(&[x, a, x, b, x]), product(&[b, x, a]))]
        }
        RelationKind::Tr => {
            let (a, b, c) = (&args[0], &args[1], &args[2]);
            vec![
                (product(&[a, b, c, a]), product(&[b, c, a, b])),
                (product(&[b, c, a, b]), product(&[c, a, b, c])),
            ]
        }
    })
}

/// The relation as relators `lhs·rhs⁻¹`.
pub fn expand_relation(kind: RelationKind, args: &[Word]) -> Result<Vec<Word>, WordError> {
    Ok(expand_equations(kind, args)?
        .into_iter()
        .map(|(l, r)| l.mul(&r.inverse()))
        .collect())
}

/// A homomorphism between free groups, given on generators.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Substitution {
    map: BTreeMap<GenSym, Word>,
}

impl Substitution {
    pub fn new(map: BTreeMap<GenSym, Word>) -> Self {
        Substitution { map }
    }

    pub fn identity<'a, I: IntoIterator<Item = &'a GenSym>>(alphabet: I) -> Self {
        Substitution {
            map: alphabet.into_iter().map(|g| (g.clone(), Word::gen(g))).collect(),
        }
    }

    pub fn map(&self) -> &BTreeMap<GenSym, Word> {
        &self.map
    }

    pub fn get(&self, g: &GenSym) -> Option<&Word> {
        self.map.get(g)
    }

    pub fn insert(&mut self, g: GenSym, w: Word) {
        self.map.insert(g, w);
    }

    pub fn domain(&self) -> BTreeSet<GenSym> {
        self.map.keys().cloned().collect()
    }

    pub fn codomain(&self) -> BTreeSet<GenSym> {
        self.map.values().flat_map(|w| w.support()).collect()
    }

    pub fn apply(&self, w: &Word) -> Result<Word, WordError> {
        let mut out = Vec::new();
        for l in w.letters() {
            let img = self
                .map
                .get(&l.gen)
                .ok_or_else(|| WordError::UndefinedSymbol(l.gen.to_string()))?;
            if l.inv {
                out.extend(img.inverse().into_letters());
            } else {
                out.extend(img.letters().iter().cloned());
            }
        }
        Ok(reduce(out))
    }

    /// First `self`, then `next`: `x ↦ next(self(x))`.
    pub fn then(&self, next: &Substitution) -> Result<Substitution, WordError> {
        let mut map = BTreeMap::new();
        for (g, w) in &self.map {
            map.insert(g.clone(), next.apply(w)?);
        }
        Ok(Substitution { map })
    }

    /// True when every generator maps to itself.
    pub fn is_identity(&self) -> bool {
        self.map.iter().all(|(g, w)| *w == Word::gen(g))
    }
}

impl Serialize for Substitution {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Substitution {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Substitution {
            map: BTreeMap::deserialize(d)?,
        })
    }
}

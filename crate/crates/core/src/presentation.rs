//! Words in free groups and finite group presentations.
//!
//! A [`Word`] is a freely reduced sequence of [`Letter`]s. A letter packs a
//! generator index and a sign into one code, `2 * gen + inverse`, so the
//! letters of generator `g` are `2g` and `2g + 1`, and inverting a letter
//! flips its lowest bit.
//!
//! Presentations are written in a small text format:
//!
//! ```text
//! a b c | b^-1*a*c*a*b*c^-1, c^2*a*b^2*a, (c*a)^2*c*b*c*b^-1
//! ```
//!
//! Generator names are a letter followed by optional digits, so `*` may be
//! omitted between single-letter names (`bcab` is `b*c*a*b`).

use std::fmt;
use std::str::FromStr;

use crate::matrix::IntMatrix;

/// A generator or inverse generator, encoded as `2 * gen + (inverse as usize)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter(u32);

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter((2 * gen + inverse as usize) as u32)
    }

    pub fn from_code(code: usize) -> Self {
        Letter(code as u32)
    }

    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn gen(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    /// +1 or -1.
    #[inline]
    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word(Vec<Letter>);

/// Freely reduces a sequence of letters.
pub fn free_reduce(letters: &[Letter]) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        match out.last() {
            Some(&last) if last == l.inverse() => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    Word(out)
}

/// Strips cancelling first/last letter pairs from a freely reduced word.
/// The result is a conjugate of `w`.
pub fn cyclic_reduce(w: &Word) -> Word {
    let l = &w.0;
    let (mut i, mut j) = (0, l.len());
    while j - i >= 2 && l[i] == l[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    Word(l[i..j].to_vec())
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from arbitrary letters, freely reducing them.
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        free_reduce(&letters)
    }

    /// The word `g^exp` for a single generator.
    pub fn generator_power(gen: usize, exp: i64) -> Self {
        let l = Letter::new(gen, exp < 0);
        Word(vec![l; exp.unsigned_abs() as usize])
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

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        free_reduce(&v)
    }

    pub fn pow(&self, exp: i64) -> Word {
        let base = if exp < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut v = Vec::with_capacity(base.len() * exp.unsigned_abs() as usize);
        for _ in 0..exp.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        free_reduce(&v)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() < 2 || self.0[0] != self.0[self.0.len() - 1].inverse()
    }

    /// Largest generator index used, plus one.
    pub fn generator_bound(&self) -> usize {
        self.0.iter().map(|l| l.gen() + 1).max().unwrap_or(0)
    }

    pub fn exponent_sums(&self, num_gens: usize) -> Vec<i64> {
        let mut sums = vec![0; num_gens];
        for l in &self.0 {
            sums[l.gen()] += l.sign();
        }
        sums
    }

    /// Letter codes, as used by the table and rewriting engines.
    pub fn codes(&self) -> Vec<usize> {
        self.0.iter().map(|l| l.code()).collect()
    }
}

/// Error from [`Presentation::parse`] or [`Presentation::new`].
#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator {name:?} at byte {pos}")]
    UnknownGenerator { name: String, pos: usize },
    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),
    #[error("relator {index} is empty after reduction")]
    EmptyRelator { index: usize },
    #[error("zero exponent at byte {pos}")]
    ZeroExponent { pos: usize },
    #[error("relator {index} uses generator {gen} but there are only {arity} generators")]
    GeneratorOutOfRange {
        index: usize,
        gen: usize,
        arity: usize,
    },
}

/// A finite presentation `< generators | relators >`.
///
/// Relators are freely and cyclically reduced and nonempty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
    provenance: Option<String>,
}

impl Presentation {
    /// Builds a presentation, cyclically reducing every relator.
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self, ParseError> {
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(ParseError::DuplicateGenerator(n.clone()));
            }
        }
        let arity = names.len();
        let mut reduced = Vec::with_capacity(relators.len());
        for (index, r) in relators.iter().enumerate() {
            if let Some(l) = r.letters().iter().find(|l| l.gen() >= arity) {
                return Err(ParseError::GeneratorOutOfRange {
                    index,
                    gen: l.gen(),
                    arity,
                });
            }
            let c = cyclic_reduce(r);
            if c.is_empty() {
                return Err(ParseError::EmptyRelator { index });
            }
            reduced.push(c);
        }
        Ok(Presentation {
            names,
            relators: reduced,
            provenance: None,
        })
    }

    /// Presentation with generators named `a`, `b`, ... (or `x1`, `x2`, ...
    /// beyond 26 generators).
    pub fn with_default_names(num_gens: usize, relators: Vec<Word>) -> Result<Self, ParseError> {
        let names = (0..num_gens)
            .map(|i| {
                if num_gens <= 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("x{}", i + 1)
                }
            })
            .collect();
        Presentation::new(names, relators)
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Parser::new(text).presentation()
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = Some(provenance.into());
        self
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    pub fn num_generators(&self) -> usize {
        self.names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Number of generators minus number of relators.
    pub fn deficiency(&self) -> isize {
        self.names.len() as isize - self.relators.len() as isize
    }

    pub fn is_balanced(&self) -> bool {
        self.relators.len() == self.names.len()
    }

    /// Entry `(i, j)` is the exponent sum of generator `j` in relator `i`.
    pub fn exponent_sum_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self
            .relators
            .iter()
            .map(|r| r.exponent_sums(self.num_generators()))
            .collect();
        IntMatrix::from_rows_i64(self.relators.len(), self.num_generators(), &rows)
    }

    /// Parses a word over this presentation's generators.
    pub fn parse_word(&self, text: &str) -> Result<Word, ParseError> {
        let mut p = Parser::new(text);
        p.names = self.names.clone();
        p.skip_ws();
        if p.at_end() {
            return Ok(Word::empty());
        }
        let w = p.product()?;
        p.skip_ws();
        if !p.at_end() {
            return Err(p.syntax("trailing input"));
        }
        Ok(w)
    }

    /// Formats a word with this presentation's generator names, collapsing
    /// runs into powers: `a^2*b^-1*c`.
    pub fn format_word(&self, w: &Word) -> String {
        format_letters(w.letters(), |g| self.names[g].as_str())
    }
}

pub(crate) fn format_letters<'a>(letters: &[Letter], name: impl Fn(usize) -> &'a str) -> String {
    if letters.is_empty() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let l = letters[i];
        let mut j = i;
        while j < letters.len() && letters[j] == l {
            j += 1;
        }
        let run = (j - i) as i64 * l.sign();
        if run == 1 {
            parts.push(name(l.gen()).to_string());
        } else {
            parts.push(format!("{}^{}", name(l.gen()), run));
        }
        i = j;
    }
    parts.join("*")
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |", self.names.join(" "))?;
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        if !rels.is_empty() {
            write!(f, " {}", rels.join(", "))?;
        }
        Ok(())
    }
}

impl FromStr for Presentation {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Presentation::parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: Vec<String>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            names: Vec::new(),
        }
    }

    fn syntax(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn name(&mut self) -> Option<String> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => self.pos += 1,
            _ => return None,
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        Some(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn presentation(mut self) -> Result<Presentation, ParseError> {
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'|') => {
                    self.pos += 1;
                    break;
                }
                Some(b',') if !self.names.is_empty() => self.pos += 1,
                Some(c) if c.is_ascii_alphabetic() => {
                    let n = self.name().expect("checked alphabetic");
                    if self.names.contains(&n) {
                        return Err(ParseError::DuplicateGenerator(n));
                    }
                    self.names.push(n);
                }
                None => return Err(self.syntax("expected '|' after generator list")),
                Some(_) => return Err(self.syntax("expected generator name or '|'")),
            }
        }
        let mut relators = Vec::new();
        self.skip_ws();
        if !self.at_end() {
            loop {
                let w = self.product()?;
                if w.is_empty() {
                    return Err(ParseError::EmptyRelator {
                        index: relators.len(),
                    });
                }
                relators.push(w);
                self.skip_ws();
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                    }
                    None => break,
                    Some(_) => return Err(self.syntax("expected ',' or end of input")),
                }
            }
        }
        Presentation::new(self.names, relators)
    }

    /// product := factor ('*'? factor)*
    fn product(&mut self) -> Result<Word, ParseError> {
        let mut letters = Vec::new();
        let mut first = true;
        loop {
            self.skip_ws();
            let star = if self.peek() == Some(b'*') {
                if first {
                    return Err(self.syntax("unexpected '*'"));
                }
                self.pos += 1;
                self.skip_ws();
                true
            } else {
                false
            };
            match self.peek() {
                Some(c) if c.is_ascii_alphabetic() || c == b'(' => {
                    let f = self.factor()?;
                    letters.extend_from_slice(f.letters());
                }
                _ if star => return Err(self.syntax("expected factor after '*'")),
                _ if first => return Err(self.syntax("expected relator")),
                _ => break,
            }
            first = false;
        }
        Ok(free_reduce(&letters))
    }

    /// factor := atom ('^' int)?
    fn factor(&mut self) -> Result<Word, ParseError> {
        let atom = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.product()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                w
            }
            _ => {
                let pos = self.pos;
                let n = self
                    .name()
                    .ok_or_else(|| self.syntax("expected generator"))?;
                let g = self
                    .names
                    .iter()
                    .position(|x| *x == n)
                    .ok_or(ParseError::UnknownGenerator { name: n, pos })?;
                Word(vec![Letter::new(g, false)])
            }
        };
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(atom);
        }
        self.pos += 1;
        self.skip_ws();
        let pos = self.pos;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected integer exponent"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let e: i64 = digits.parse().map_err(|_| ParseError::Syntax {
            pos,
            msg: "exponent out of range".into(),
        })?;
        if e == 0 {
            return Err(ParseError::ZeroExponent { pos });
        }
        Ok(atom.pow(if neg { -e } else { e }))
    }
}

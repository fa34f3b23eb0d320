//! Group presentations `<generators | relators>` and the chain data of their
//! one-vertex presentation 2-complex.
//!
//! The complex has one 0-cell, a 1-cell per generator and a 2-cell per
//! relator. Its cellular `∂₁` vanishes and its `∂₂` abelianizes to the
//! exponent-sum matrix, so
//!
//! * `H₁ = coker ∂₂` is the abelianization of the group, and
//! * `H₂ = ker ∂₂` is free abelian. The Schur multiplier is the quotient of
//!   `H₂` by the spherical classes; when the presentation is aspherical there
//!   are none and `H₂` *is* the multiplier.
//!
//! Asphericity cannot be decided here. It is an assertion the caller makes
//! with [`Presentation::with_aspherical`], and [`multiplier_bounds`] reports
//! its result as exact only under that assertion.
//!
//! ```
//! use schur::presentation::{parse_presentation, multiplier_bounds};
//!
//! let p = parse_presentation("<a, b | a^2, b^2, [a, b]>").unwrap();
//! let b = multiplier_bounds(&p);
//! assert_eq!(b.h2_complex.to_string(), "Z");
//! assert_eq!(b.relator_bound, 3);
//! assert!(!b.exact);
//! ```

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::abelian::FgAbelianGroup;
use crate::error::{Error, Result};
use crate::smith::{cokernel_group, IntMatrix};

/// A word in the free group, as `(generator index, exponent)` syllables.
///
/// Words built by the parser are freely reduced: adjacent syllables never
/// share a generator and no exponent is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<(usize, i64)>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from syllables, merging neighbours and dropping zeros.
    pub fn from_syllables<I: IntoIterator<Item = (usize, i64)>>(syllables: I) -> Self {
        let mut w = Word::new();
        for (g, e) in syllables {
            w.push(g, e);
        }
        w
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn push(&mut self, generator: usize, exponent: i64) {
        if exponent == 0 {
            return;
        }
        match self.0.last_mut() {
            Some((g, e)) if *g == generator => {
                *e += exponent;
                if *e == 0 {
                    self.0.pop();
                }
            }
            _ => self.0.push((generator, exponent)),
        }
    }

    fn append(&mut self, other: &Word) {
        for &(g, e) in &other.0 {
            self.push(g, e);
        }
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    /// `self^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::new();
        for _ in 0..n.unsigned_abs() {
            out.append(&base);
        }
        out
    }

    /// `[x, y] = x y x⁻¹ y⁻¹`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        let mut out = x.clone();
        out.append(y);
        out.append(&x.inverse());
        out.append(&y.inverse());
        out
    }

    /// Total exponent of `generator` in the word.
    pub fn exponent_sum(&self, generator: usize) -> i64 {
        self.0
            .iter()
            .filter(|(g, _)| *g == generator)
            .map(|(_, e)| e)
            .sum()
    }

    /// Rotation by `k` syllables (a conjugate of the word).
    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return Word::new();
        }
        let k = k % self.0.len();
        Word::from_syllables(self.0[k..].iter().chain(&self.0[..k]).copied())
    }
}

/// Generators, relators, and the caller's asphericity assertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: Vec<Word>,
    aspherical: bool,
}

impl Presentation {
    /// Validates that every relator only mentions existing generators and that
    /// names are distinct.
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        for (i, name) in generator_names.iter().enumerate() {
            if generator_names[..i].contains(name) {
                return Err(Error::DuplicateGenerator {
                    name: name.clone(),
                    position: 0,
                });
            }
        }
        let n = generator_names.len();
        for (j, r) in relators.iter().enumerate() {
            if let Some(&(g, _)) = r.syllables().iter().find(|(g, _)| *g >= n) {
                return Err(Error::InvalidArgument(format!(
                    "relator {j} uses generator index {g}, but only {n} generators exist"
                )));
            }
        }
        Ok(Presentation {
            generator_names,
            relators,
            aspherical: false,
        })
    }

    /// `<x1, …, xn | [xi, xj] for i < j>`, the standard presentation of
    /// `Z^n`, flagged exact. Its complex is the 2-skeleton of the n-torus,
    /// which is only aspherical for `n ≤ 2`, but its `H₂` already equals
    /// `H₂` of the torus, so nothing is lost in the quotient.
    pub fn free_abelian(n: usize) -> Self {
        let names = (1..=n).map(|i| format!("x{i}")).collect();
        let mut relators = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                relators.push(Word::commutator(
                    &Word::from_syllables([(i, 1)]),
                    &Word::from_syllables([(j, 1)]),
                ));
            }
        }
        Presentation {
            generator_names: names,
            relators,
            aspherical: true,
        }
    }

    /// Asserts (or retracts) that the presentation complex is aspherical, so
    /// that its `H₂` is the multiplier itself. Nothing checks this; a wrong
    /// assertion gives wrong exact answers.
    pub fn with_aspherical(mut self, aspherical: bool) -> Self {
        self.aspherical = aspherical;
        self
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn aspherical(&self) -> bool {
        self.aspherical
    }

    pub fn with_relators(&self, relators: Vec<Word>) -> Self {
        Presentation {
            generator_names: self.generator_names.clone(),
            relators,
            aspherical: self.aspherical,
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} |", self.generator_names.join(", "))?;
        for (j, r) in self.relators.iter().enumerate() {
            f.write_str(if j == 0 { " " } else { ", " })?;
            if r.is_empty() {
                // empty word
                f.write_str("()")?;
                continue;
            }
            for (k, &(g, e)) in r.syllables().iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                f.write_str(&self.generator_names[g])?;
                if e != 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        f.write_str(">")
    }
}

/// Parses `'<' names '|' relators '>'`.
///
/// Relators are words built from generator names, `(w)`, commutators `[u, v]`,
/// and integer powers `t^n` (negative allowed). Whitespace is insignificant.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut p = Parser::new(text);
    p.expect('<')?;
    let mut names: Vec<String> = Vec::new();
    p.skip_ws();
    if p.peek() != Some('|') {
        loop {
            p.skip_ws();
            let pos = p.pos;
            let name = p.identifier()?;
            if names.contains(&name) {
                return Err(Error::DuplicateGenerator {
                    name,
                    position: pos,
                });
            }
            names.push(name);
            p.skip_ws();
            if p.peek() == Some(',') {
                p.bump();
            } else {
                break;
            }
        }
    }
    p.expect('|')?;
    let mut relators = Vec::new();
    p.skip_ws();
    if p.peek() != Some('>') {
        loop {
            relators.push(p.word(&names)?);
            p.skip_ws();
            if p.peek() == Some(',') {
                p.bump();
            } else {
                break;
            }
        }
    }
    p.expect('>')?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(Error::syntax(p.pos, format!("unexpected `{c}` after `>`")));
    }
    Ok(Presentation {
        generator_names: names,
        relators,
        aspherical: false,
    })
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(x) if x == c => {
                self.bump();
                Ok(())
            }
            Some(x) => Err(Error::syntax(
                self.pos,
                format!("expected `{c}`, found `{x}`"),
            )),
            None => Err(Error::syntax(
                self.pos,
                format!("expected `{c}`, found end of input"),
            )),
        }
    }

    fn identifier(&mut self) -> Result<String> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {}
            Some(c) => {
                return Err(Error::syntax(
                    self.pos,
                    format!("expected a name, found `{c}`"),
                ))
            }
            None => {
                return Err(Error::syntax(
                    self.pos,
                    "expected a name, found end of input",
                ))
            }
        }
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.bump();
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('-' | '+')) {
            self.bump();
            self.skip_ws();
        }
        let digits = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if digits == self.pos {
            return Err(Error::syntax(self.pos, "expected an integer exponent"));
        }
        let text: String = self.chars[start..self.pos]
            .iter()
            .filter(|c| !c.is_whitespace())
            .collect();
        text.parse()
            .map_err(|_| Error::syntax(start, format!("exponent `{text}` out of range")))
    }

    fn starts_atom(&self) -> bool {
        self.peek()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '(' || c == '[')
    }

    // word = term+
    fn word(&mut self, names: &[String]) -> Result<Word> {
        self.skip_ws();
        if !self.starts_atom() {
            return Err(match self.peek() {
                Some(c) => Error::syntax(self.pos, format!("expected a word, found `{c}`")),
                None => Error::syntax(self.pos, "expected a word, found end of input"),
            });
        }
        let mut w = Word::new();
        while {
            self.skip_ws();
            self.starts_atom()
        } {
            let t = self.term(names)?;
            w.append(&t);
        }
        Ok(w)
    }

    // term = atom ['^' integer]
    fn term(&mut self, names: &[String]) -> Result<Word> {
        let atom = self.atom(names)?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            let n = self.integer()?;
            Ok(atom.pow(n))
        } else {
            Ok(atom)
        }
    }

    // atom = identifier | '(' word ')' | '[' word ',' word ']'; `()` is the
    // empty word
    fn atom(&mut self, names: &[String]) -> Result<Word> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                self.skip_ws();
                if self.peek() == Some(')') {
                    self.bump();
                    return Ok(Word::new());
                }
                let w = self.word(names)?;
                self.expect(')')?;
                Ok(w)
            }
            Some('[') => {
                self.bump();
                let x = self.word(names)?;
                self.expect(',')?;
                let y = self.word(names)?;
                self.expect(']')?;
                Ok(Word::commutator(&x, &y))
            }
            _ => {
                let pos = self.pos;
                let name = self.identifier()?;
                match names.iter().position(|n| *n == name) {
                    Some(g) => Ok(Word::from_syllables([(g, 1)])),
                    None => Err(Error::UnknownGenerator {
                        name,
                        position: pos,
                    }),
                }
            }
        }
    }
}

/// Exponent-sum matrix: rows are generators, columns relators. This is the
/// abelianized `∂₂` of the presentation complex.
pub fn exponent_matrix(p: &Presentation) -> IntMatrix {
    let (rows, cols) = (p.generator_names.len(), p.relators.len());
    let mut m = IntMatrix::zeros(rows, cols);
    for (j, r) in p.relators.iter().enumerate() {
        for &(g, e) in r.syllables() {
            let v = m.get(g, j) + BigInt::from(e);
            m.set(g, j, v);
        }
    }
    m
}

/// `G_ab = H₁` of the presentation complex.
pub fn abelianization(p: &Presentation) -> FgAbelianGroup {
    cokernel_group(&exponent_matrix(p))
}

/// What the presentation complex says about the Schur multiplier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplierBounds {
    /// `H₂` of the presentation complex, `ker ∂₂`. Always free abelian. The
    /// multiplier is a quotient of it, and equal to it when `exact`.
    pub h2_complex: FgAbelianGroup,
    /// Number of relators, the cell-count bound on `d(M(G))`.
    pub relator_bound: usize,
    /// Nullity of the exponent matrix, `d(h2_complex)`; never above
    /// `relator_bound`.
    pub rank_bound: usize,
    /// Whether `h2_complex` equals `M(G)`, i.e. the presentation was asserted
    /// aspherical.
    pub exact: bool,
}

pub fn multiplier_bounds(p: &Presentation) -> MultiplierBounds {
    let m = exponent_matrix(p);
    let nullity = p.relators.len() - m.rank();
    MultiplierBounds {
        h2_complex: FgAbelianGroup::free(nullity),
        relator_bound: p.relators.len(),
        rank_bound: nullity,
        exact: p.aspherical,
    }
}

/// Standard presentations of the finite families the bar oracle builds, for
/// cross-checking `H₁`.
pub mod standard {
    use super::{parse_presentation, Presentation};

    /// `<a | a^n>`
    pub fn cyclic(n: u64) -> Presentation {
        parse_presentation(&format!("<a | a^{n}>")).expect("well-formed")
    }

    /// `<r, s | r^n, s^2, (s r)^2>`, order `2n`.
    pub fn dihedral(n: u64) -> Presentation {
        parse_presentation(&format!("<r, s | r^{n}, s^2, (s r)^2>")).expect("well-formed")
    }

    /// `<i, j | i^4, i^2 j^-2, j i j^-1 i>`
    pub fn quaternion8() -> Presentation {
        parse_presentation("<i, j | i^4, i^2 j^-2, j i j^-1 i>").expect("well-formed")
    }

    /// `<s, t | s^2, t^3, (s t)^2>`
    pub fn symmetric3() -> Presentation {
        parse_presentation("<s, t | s^2, t^3, (s t)^2>").expect("well-formed")
    }

    /// `<s, t | s^2, t^3, (s t)^3>`
    pub fn alternating4() -> Presentation {
        parse_presentation("<s, t | s^2, t^3, (s t)^3>").expect("well-formed")
    }

    /// `<a, b | a^m, b^n, [a, b]>`
    pub fn cyclic_product(m: u64, n: u64) -> Presentation {
        parse_presentation(&format!("<a, b | a^{m}, b^{n}, [a, b]>")).expect("well-formed")
    }
}

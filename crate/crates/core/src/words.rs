//! Words over the generators of a presentation, free reduction, and the
//! line-oriented presentation DSL.
//!
//! ```text
//! group VB2
//! gen s1
//! gen v1 inv        # adds the relator v1 v1
//! rel s1 v1 = v1 s1^-1
//! ```
//!
//! A `rel u = w` line is stored as the freely reduced relator `u w^-1`.
//! Exponents are expanded to ±1 letters at parse time.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A generator letter raised to the power +1 or -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(generator: usize) -> Self {
        Letter { generator, inverse: false }
    }

    pub fn neg(generator: usize) -> Self {
        Letter { generator, inverse: true }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverted(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A finite sequence of signed generator letters.
///
/// Words are not reduced automatically on construction; [`Word::free_reduce`]
/// produces the canonical freely reduced form. Involution relations such as
/// `v^2 = 1` are group relations and are never applied here.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::pos(g)])
    }

    /// Builds a word from `(generator, exponent)` pairs, expanding powers.
    pub fn from_powers(powers: &[(usize, i64)]) -> Self {
        let mut letters = Vec::new();
        for &(g, e) in powers {
            let letter = if e < 0 { Letter::neg(g) } else { Letter::pos(g) };
            letters.extend(std::iter::repeat_n(letter, e.unsigned_abs() as usize));
        }
        Word(letters)
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

    /// Generator indices occurring in the word, sorted and deduplicated.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = self.0.iter().map(|l| l.generator).collect();
        gens.sort_unstable();
        gens.dedup();
        gens
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            match out.last() {
                Some(&top) if top.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    /// `w^-1`, freely reduced.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect()).free_reduce()
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Concatenation of several words without reduction.
    pub fn product<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut letters = Vec::new();
        for p in parts {
            letters.extend_from_slice(&p.0);
        }
        Word(letters)
    }

    /// Cyclic rotation by `k` letters to the left.
    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let mut letters = self.0.clone();
        letters.rotate_left(k % self.0.len());
        Word(letters)
    }

    /// Replaces every letter `g^±1` by `images[g]^±1` and freely reduces.
    pub fn substitute(&self, images: &[Word]) -> Result<Word> {
        let mut letters = Vec::new();
        for l in &self.0 {
            let image = images.get(l.generator).ok_or(Error::MissingImage(l.generator))?;
            if l.inverse {
                letters.extend(image.0.iter().rev().map(|x| x.inverted()));
            } else {
                letters.extend_from_slice(&image.0);
            }
        }
        Ok(Word(letters).free_reduce())
    }
}

pub fn free_reduce(w: &Word) -> Word {
    w.free_reduce()
}

pub fn invert_word(w: &Word) -> Word {
    w.inverse()
}

pub fn substitute(w: &Word, images: &[Word]) -> Result<Word> {
    w.substitute(images)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub index: usize,
}

/// A finite presentation: generators, relators (each meaning `r = 1`) and the
/// set of generators flagged as involutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub generators: Vec<Generator>,
    pub relators: Vec<Word>,
    pub involutions: Vec<bool>,
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn involution_of(word: &Word) -> Option<usize> {
    match word.letters() {
        [a, b] if a == b => Some(a.generator),
        _ => None,
    }
}

impl Presentation {
    /// Validates generator names and relator indices; involution flags are
    /// derived from the relators of shape `g^2` or `g^-2`.
    pub fn new(name: &str, generator_names: &[&str], relators: Vec<Word>) -> Result<Self> {
        let mut generators = Vec::with_capacity(generator_names.len());
        for (index, &g) in generator_names.iter().enumerate() {
            if !valid_identifier(g) {
                return Err(Error::Syntax {
                    line: 0,
                    column: 0,
                    message: format!("invalid generator name `{g}`"),
                });
            }
            if generators.iter().any(|x: &Generator| x.name == g) {
                return Err(Error::DuplicateGenerator(g.to_string()));
            }
            generators.push(Generator {
                name: g.to_string(),
                index,
            });
        }
        let mut involutions = vec![false; generators.len()];
        for r in &relators {
            if let Some(l) = r.letters().iter().find(|l| l.generator >= generators.len()) {
                return Err(Error::UnknownGenerator(format!("#{}", l.generator)));
            }
            if let Some(g) = involution_of(r) {
                involutions[g] = true;
            }
        }
        Ok(Presentation {
            name: name.to_string(),
            generators,
            relators,
            involutions,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }

    pub fn is_involution(&self, g: usize) -> bool {
        self.involutions[g]
    }

    /// Word rendering used in reports: names with `^-1` suffixes, space
    /// separated, `1` for the empty word.
    pub fn render_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (i, l) in w.letters().iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&self.generators[l.generator].name);
            if l.inverse {
                out.push_str("^-1");
            }
        }
        out
    }

    /// Parses a single word (juxtaposed tokens) over this presentation's
    /// generators.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let names: HashMap<&str, usize> = self.generators.iter().map(|g| (g.name.as_str(), g.index)).collect();
        let mut letters = Vec::new();
        for (col, tok) in tokens(text) {
            parse_token(tok, &names, 1, col, &mut letters)?;
        }
        Ok(Word(letters))
    }

    /// Canonical DSL text. Relators are written verbatim, so parsing the
    /// output reproduces an identical presentation.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "group {}", self.name);
        for g in &self.generators {
            let _ = writeln!(out, "gen {}", g.name);
        }
        for r in &self.relators {
            let _ = writeln!(out, "rel {}", self.render_word(r));
        }
        out
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }
}

/// Whitespace-separated tokens with their 1-based starting column.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out.into_iter()
}

fn parse_token(tok: &str, names: &HashMap<&str, usize>, line: usize, column: usize, out: &mut Vec<Letter>) -> Result<()> {
    if tok == "1" {
        return Ok(());
    }
    let (name, exponent) = match tok.split_once('^') {
        Some((n, e)) => {
            let k: i64 = e.parse().map_err(|_| Error::Syntax {
                line,
                column: column + n.len() + 1,
                message: format!("bad exponent `{e}`"),
            })?;
            (n, k)
        }
        None => (tok, 1),
    };
    if !valid_identifier(name) {
        return Err(Error::Syntax {
            line,
            column,
            message: format!("bad token `{tok}`"),
        });
    }
    let g = *names.get(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
    let letter = if exponent < 0 { Letter::neg(g) } else { Letter::pos(g) };
    out.extend(std::iter::repeat_n(letter, exponent.unsigned_abs() as usize));
    Ok(())
}

/// Parses the presentation DSL.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut name: Option<String> = None;
    let mut gen_names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut relators: Vec<Word> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks: Vec<(usize, &str)> = tokens(line).collect();
        let Some(&(kw_col, keyword)) = toks.first() else {
            continue;
        };
        let syntax = |column: usize, message: String| Error::Syntax {
            line: line_no,
            column,
            message,
        };
        match keyword {
            "group" => {
                if name.is_some() {
                    return Err(syntax(kw_col, "duplicate `group` line".into()));
                }
                match toks.as_slice() {
                    [_, (_, n)] => name = Some(n.to_string()),
                    _ => return Err(syntax(kw_col, "expected `group <name>`".into())),
                }
            }
            "gen" => {
                if name.is_none() {
                    return Err(syntax(kw_col, "`gen` before `group`".into()));
                }
                let (col, g, inv) = match toks.as_slice() {
                    [_, (c, g)] => (*c, *g, false),
                    [_, (c, g), (_, "inv")] => (*c, *g, true),
                    [_, _, (c, other)] => return Err(syntax(*c, format!("unexpected `{other}` after generator"))),
                    _ => return Err(syntax(kw_col, "expected `gen <id> [inv]`".into())),
                };
                if !valid_identifier(g) {
                    return Err(syntax(col, format!("invalid generator name `{g}`")));
                }
                if index.contains_key(g) {
                    return Err(Error::DuplicateGenerator(g.to_string()));
                }
                index.insert(g.to_string(), gen_names.len());
                if inv {
                    let i = gen_names.len();
                    relators.push(Word(vec![Letter::pos(i), Letter::pos(i)]));
                }
                gen_names.push(g.to_string());
            }
            "rel" => {
                if name.is_none() {
                    return Err(syntax(kw_col, "`rel` before `group`".into()));
                }
                let names: HashMap<&str, usize> = index.iter().map(|(k, v)| (k.as_str(), *v)).collect();
                let mut lhs = Vec::new();
                let mut rhs = Vec::new();
                let mut seen_eq = false;
                if toks.len() == 1 {
                    return Err(syntax(kw_col, "empty relation".into()));
                }
                for &(col, tok) in &toks[1..] {
                    if tok == "=" {
                        if seen_eq {
                            return Err(syntax(col, "second `=` in relation".into()));
                        }
                        seen_eq = true;
                        continue;
                    }
                    let target = if seen_eq { &mut rhs } else { &mut lhs };
                    parse_token(tok, &names, line_no, col, target)?;
                }
                let r = Word(lhs).concat(&Word(rhs).inverse()).free_reduce();
                relators.push(r);
            }
            other => return Err(syntax(kw_col, format!("unknown keyword `{other}`"))),
        }
    }
    let name = name.ok_or(Error::Syntax {
        line: 1,
        column: 1,
        message: "missing `group` line".into(),
    })?;
    let refs: Vec<&str> = gen_names.iter().map(String::as_str).collect();
    Presentation::new(&name, &refs, relators)
}

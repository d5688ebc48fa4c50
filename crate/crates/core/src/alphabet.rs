use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a symbol inside its [`Alphabet`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Sym(pub u16);

impl Sym {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite, ordered set of named symbols with an optional one-character
/// rendering for each symbol.
#[derive(Clone, Debug)]
pub struct Alphabet {
    symbols: Vec<String>,
    glyphs: Option<Vec<char>>,
    index: HashMap<String, Sym>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Alphabet> {
        let symbols: Vec<String> = names.into_iter().map(|s| s.as_ref().to_string()).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        if symbols.len() > u16::MAX as usize {
            return Err(Error::InvalidAlphabet("too many symbols".into()));
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(Error::InvalidAlphabet(format!("bad symbol name `{s}`")));
            }
            if index.insert(s.clone(), Sym(i as u16)).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Alphabet {
            symbols,
            glyphs: None,
            index,
        })
    }

    /// Attaches a glyph map. Glyphs must be pairwise distinct.
    pub fn with_glyphs(mut self, glyphs: Vec<char>) -> Result<Alphabet> {
        if glyphs.len() != self.symbols.len() {
            return Err(Error::InvalidAlphabet("glyph map does not cover the alphabet".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for g in &glyphs {
            if !seen.insert(*g) {
                return Err(Error::InvalidAlphabet(format!("glyph `{g}` used twice")));
            }
        }
        self.glyphs = Some(glyphs);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.symbols
    }

    pub fn glyphs(&self) -> Option<&[char]> {
        self.glyphs.as_deref()
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.symbols[s.index()]
    }

    pub fn sym(&self, name: &str) -> Option<Sym> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<Sym> {
        self.sym(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn syms(&self) -> impl Iterator<Item = Sym> + '_ {
        (0..self.symbols.len()).map(|i| Sym(i as u16))
    }

    fn symbol_or_glyph(&self, token: &str) -> Result<Sym> {
        if let Some(s) = self.sym(token) {
            return Ok(s);
        }
        let mut chars = token.chars();
        if let (Some(c), None, Some(g)) = (chars.next(), chars.next(), &self.glyphs) {
            if let Some(i) = g.iter().position(|&x| x == c) {
                return Ok(Sym(i as u16));
            }
        }
        Err(Error::UnknownSymbol(token.to_string()))
    }

    /// Character used when rendering `s`: its glyph, or the first character of its name.
    pub fn glyph(&self, s: Sym) -> char {
        match &self.glyphs {
            Some(g) => g[s.index()],
            None => self.symbols[s.index()].chars().next().unwrap_or('?'),
        }
    }

    fn compact_names(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Parses a word literal. Whitespace-separated input is read as a list of
    /// symbol names; otherwise each character is matched against the glyph map
    /// and then against one-character symbol names.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Sym>> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        if text.chars().any(char::is_whitespace) {
            return text.split_whitespace().map(|t| self.symbol_or_glyph(t)).collect();
        }
        if let Some(s) = self.sym(text) {
            return Ok(vec![s]);
        }
        text.chars()
            .map(|c| {
                if let Some(g) = &self.glyphs {
                    if let Some(i) = g.iter().position(|&x| x == c) {
                        return Ok(Sym(i as u16));
                    }
                }
                let mut buf = [0u8; 4];
                self.require(c.encode_utf8(&mut buf))
            })
            .collect()
    }

    /// Inverse of [`Alphabet::parse_word`]: compact when every name is one
    /// character long, space separated otherwise.
    pub fn format_word(&self, word: &[Sym]) -> String {
        if self.compact_names() {
            word.iter().map(|&s| self.symbols[s.index()].as_str()).collect()
        } else {
            word.iter()
                .map(|&s| self.symbols[s.index()].as_str())
                .collect::<Vec<_>>()
                .join(" ")
        }
    }

    /// Renders a word with glyphs, one character per cell.
    pub fn render_word(&self, word: &[Sym]) -> String {
        word.iter().map(|&s| self.glyph(s)).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.symbols.join(","))
    }
}

/// A finite word tied to its alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub alphabet: Arc<Alphabet>,
    pub letters: Vec<Sym>,
}

impl Word {
    pub fn new(alphabet: Arc<Alphabet>, letters: Vec<Sym>) -> Result<Word> {
        if let Some(bad) = letters.iter().find(|s| s.index() >= alphabet.len()) {
            return Err(Error::UnknownSymbol(format!("#{}", bad.0)));
        }
        Ok(Word { alphabet, letters })
    }

    pub fn parse(alphabet: Arc<Alphabet>, text: &str) -> Result<Word> {
        let letters = alphabet.parse_word(text)?;
        Ok(Word { alphabet, letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.format_word(&self.letters))
    }
}

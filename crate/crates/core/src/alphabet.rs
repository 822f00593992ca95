use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a letter inside its [`Alphabet`].
pub type LetterId = usize;

/// A finite word, stored as letter indices.
pub type Word = Vec<LetterId>;

/// Names reserved by the toolkit; they may not be used as atomic symbols.
pub const EPS_NAME: &str = "eps";
pub const PAD_NAME: &str = "_";
pub const BOT_NAME: &str = "BOT";

/// A symbol. Product alphabets use tuples, and the per-component pad of a
/// synchronous encoding is [`Letter::Pad`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Sym(String),
    Pad,
    Tuple(Vec<Letter>),
}

impl Letter {
    pub fn sym(name: impl Into<String>) -> Letter {
        Letter::Sym(name.into())
    }

    pub fn pair(a: Letter, b: Letter) -> Letter {
        Letter::Tuple(vec![a, b])
    }

    pub fn is_pad(&self) -> bool {
        matches!(self, Letter::Pad)
    }

    /// Components of a tuple letter, or `None` for an atom.
    pub fn components(&self) -> Option<&[Letter]> {
        match self {
            Letter::Tuple(c) => Some(c),
            _ => None,
        }
    }

    fn fmt_nested(&self, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
        match self {
            Letter::Sym(s) => write!(f, "{s}"),
            Letter::Pad => write!(f, "{PAD_NAME}"),
            Letter::Tuple(c) => {
                if nested {
                    write!(f, "(")?;
                }
                for (i, l) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, "|")?;
                    }
                    l.fmt_nested(f, true)?;
                }
                if nested {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_nested(f, false)
    }
}

#[derive(Debug)]
struct Inner {
    letters: Vec<Letter>,
    index: HashMap<Letter, LetterId>,
}

/// An ordered set of distinct letters. Declaration order is the canonical
/// order used by every lexicographic comparison.
#[derive(Clone)]
pub struct Alphabet(Arc<Inner>);

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.letters.iter().map(|l| l.to_string())).finish()
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.letters == other.0.letters
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    /// Builds an alphabet; letters must be distinct and the list nonempty.
    pub fn new(letters: Vec<Letter>) -> Result<Alphabet> {
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        Alphabet::possibly_empty(letters)
    }

    /// Like [`Alphabet::new`] but accepts the empty list. Used for the
    /// internal-letter part of a pushdown alphabet and for degenerate
    /// projections.
    pub fn possibly_empty(letters: Vec<Letter>) -> Result<Alphabet> {
        let mut index = HashMap::with_capacity(letters.len());
        for (i, l) in letters.iter().enumerate() {
            if let Letter::Sym(s) = l {
                if s == EPS_NAME {
                    return Err(Error::InvalidAlphabet(format!("`{EPS_NAME}` is reserved")));
                }
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{l}`")));
            }
        }
        Ok(Alphabet(Arc::new(Inner { letters, index })))
    }

    /// Alphabet of atomic symbols with the given names.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Alphabet> {
        Alphabet::new(names.iter().map(|s| Letter::sym(s.as_ref())).collect())
    }

    /// Cartesian product of component alphabets in lexicographic order
    /// (first component most significant). With `padded`, each component is
    /// extended by a trailing pad and the all-pad tuple is left out.
    pub fn product(components: &[Alphabet], padded: bool) -> Alphabet {
        let mut out: Vec<Vec<Letter>> = vec![vec![]];
        for comp in components {
            let mut choices: Vec<Letter> = comp.letters().to_vec();
            if padded {
                choices.push(Letter::Pad);
            }
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    choices.iter().map(move |l| {
                        let mut p = prefix.clone();
                        p.push(l.clone());
                        p
                    })
                })
                .collect();
        }
        let letters = out
            .into_iter()
            .filter(|t| !(padded && t.iter().all(Letter::is_pad)))
            .map(Letter::Tuple)
            .collect();
        Alphabet::possibly_empty(letters).expect("product letters are distinct")
    }

    pub fn len(&self) -> usize {
        self.0.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0.letters
    }

    pub fn letter(&self, id: LetterId) -> &Letter {
        &self.0.letters[id]
    }

    pub fn index_of(&self, l: &Letter) -> Option<LetterId> {
        self.0.index.get(l).copied()
    }

    pub fn id(&self, l: &Letter) -> Result<LetterId> {
        self.index_of(l).ok_or_else(|| Error::UnknownSymbol(l.to_string()))
    }

    pub fn id_of_name(&self, name: &str) -> Result<LetterId> {
        self.id(&Letter::sym(name))
    }

    fn single_chars(&self) -> bool {
        self.0.letters.iter().all(|l| matches!(l, Letter::Sym(s) if s.chars().count() == 1))
    }

    /// Parses a word. Whitespace-separated tokens are letter names; a token
    /// free string over an alphabet of one-character symbols is split into
    /// characters.
    pub fn word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(vec![]);
        }
        if text.contains(char::is_whitespace) || !self.single_chars() {
            text.split_whitespace().map(|t| self.id_of_name(t)).collect()
        } else {
            text.chars().map(|c| self.id_of_name(&c.to_string())).collect()
        }
    }

    /// Inverse of [`Alphabet::word`].
    pub fn render(&self, w: &[LetterId]) -> String {
        let parts: Vec<String> = w.iter().map(|&i| self.letter(i).to_string()).collect();
        if self.single_chars() {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }
}

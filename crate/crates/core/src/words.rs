//! Words over string-named letters and word homomorphisms.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub type Word = Vec<String>;

/// Splits a string into one-character letters: `word("aabb")`.
pub fn word(s: &str) -> Word {
    s.chars().map(|c| c.to_string()).collect()
}

pub fn reversed(w: &[String]) -> Word {
    w.iter().rev().cloned().collect()
}

pub fn display_word(w: &[String]) -> String {
    if w.iter().all(|l| l.chars().count() == 1) {
        w.concat()
    } else {
        w.join(" ")
    }
}

/// All words over `alphabet` of length at most `max_len`, shortest first
/// and lexicographic by letter position within a length.
pub fn all_words(alphabet: &[String], max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * alphabet.len());
        for w in &frontier {
            for a in alphabet {
                let mut v = w.clone();
                v.push(a.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Maps letter names to their position in an alphabet.
pub(crate) fn letter_index(alphabet: &[String]) -> HashMap<&str, usize> {
    alphabet
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_str(), i))
        .collect()
}

pub(crate) fn check_distinct(names: &[String], what: &str) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::InvalidAutomaton(format!("duplicate {what} `{n}`")));
        }
    }
    Ok(())
}

/// A monoid homomorphism `source* -> target*` given by letter images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordHom {
    source: Vec<String>,
    target: Vec<String>,
    images: Vec<Word>,
}

impl WordHom {
    pub fn new(source: Vec<String>, target: Vec<String>, images: Vec<Word>) -> Result<Self> {
        check_distinct(&source, "letter")?;
        check_distinct(&target, "letter")?;
        if images.len() != source.len() {
            return Err(Error::ArityMismatch {
                expected: source.len(),
                found: images.len(),
            });
        }
        let idx = letter_index(&target);
        for img in &images {
            for a in img {
                if !idx.contains_key(a.as_str()) {
                    return Err(Error::UnknownLetter(a.clone()));
                }
            }
        }
        Ok(WordHom {
            source,
            target,
            images,
        })
    }

    pub fn identity(alphabet: &[String]) -> Self {
        WordHom {
            source: alphabet.to_vec(),
            target: alphabet.to_vec(),
            images: alphabet.iter().map(|a| vec![a.clone()]).collect(),
        }
    }

    pub fn source(&self) -> &[String] {
        &self.source
    }

    pub fn target(&self) -> &[String] {
        &self.target
    }

    pub fn image(&self, letter: &str) -> Result<&Word> {
        self.source
            .iter()
            .position(|a| a == letter)
            .map(|i| &self.images[i])
            .ok_or_else(|| Error::UnknownLetter(letter.to_string()))
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn is_non_deleting(&self) -> bool {
        self.images.iter().all(|w| !w.is_empty())
    }

    pub fn apply(&self, w: &[String]) -> Result<Word> {
        let mut out = Vec::new();
        for a in w {
            out.extend(self.image(a)?.iter().cloned());
        }
        Ok(out)
    }

    /// Every `v` with `apply(v) == w`. Requires a non-deleting homomorphism,
    /// which makes the preimage finite.
    pub fn preimages(&self, w: &[String]) -> Result<Vec<Word>> {
        if !self.is_non_deleting() {
            let culprit = self
                .source
                .iter()
                .zip(&self.images)
                .find(|(_, img)| img.is_empty())
                .map(|(a, _)| a.clone())
                .unwrap_or_default();
            return Err(Error::Deleting(format!("letter `{culprit}` maps to the empty word")));
        }
        let mut table: Vec<Vec<Word>> = vec![Vec::new(); w.len() + 1];
        table[w.len()].push(Vec::new());
        for start in (0..w.len()).rev() {
            let mut here = Vec::new();
            for (letter, img) in self.source.iter().zip(&self.images) {
                let end = start + img.len();
                if end <= w.len() && w[start..end] == img[..] {
                    for rest in &table[end] {
                        let mut v = vec![letter.clone()];
                        v.extend(rest.iter().cloned());
                        here.push(v);
                    }
                }
            }
            table[start] = here;
        }
        Ok(std::mem::take(&mut table[0]))
    }
}

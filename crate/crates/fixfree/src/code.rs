use std::collections::BTreeSet;

use crate::lengths::LengthVector;
use crate::word::Word;

/// A set of codewords, iterated in (length, value) order.
///
/// The set structure rules out duplicates; fix-freeness is a separate
/// property checked by [`crate::oracle::verify_fixfree`].
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Code {
    words: BTreeSet<Word>,
}

impl Code {
    pub fn new() -> Self {
        Code::default()
    }

    /// Returns `false` if the word was already present.
    pub fn insert(&mut self, word: Word) -> bool {
        self.words.insert(word)
    }

    /// Collects words, failing with the first duplicate.
    pub fn from_words<I: IntoIterator<Item = Word>>(words: I) -> Result<Self, Word> {
        let mut code = Code::new();
        for w in words {
            if !code.insert(w) {
                return Err(w);
            }
        }
        Ok(code)
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Word> + '_ {
        self.words.iter().copied()
    }

    pub fn words_of_len(&self, len: u8) -> impl Iterator<Item = Word> + '_ {
        self.words.iter().copied().filter(move |w| w.len() == len)
    }

    pub fn max_len(&self) -> u8 {
        self.words.iter().next_back().map_or(0, |w| w.len())
    }

    /// Per-length codeword counts.
    pub fn length_vector(&self) -> LengthVector {
        let mut counts = vec![0u64; self.max_len() as usize];
        for w in &self.words {
            counts[w.len() as usize - 1] += 1;
        }
        LengthVector::new(counts)
    }
}

impl FromIterator<Word> for Code {
    fn from_iter<I: IntoIterator<Item = Word>>(iter: I) -> Self {
        Code { words: iter.into_iter().collect() }
    }
}

use std::collections::HashMap;
use std::fmt;

use crate::word::{Word, DEFAULT_MAX_LEN, MAX_WORD_LEN};

/// The addability frontiers at one word length: prefix-free words split by
/// first bit and suffix-free words split by last bit, each sorted by value.
///
/// A word is prefix-free (suffix-free) over a code if no codeword is a
/// prefix (suffix) of it, including a codeword equal to the whole word.
/// Length 0 is the sentinel state over the empty code, before any extension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FrontierState {
    length: u8,
    max_len: u8,
    pf0: Vec<Word>,
    pf1: Vec<Word>,
    sf0: Vec<Word>,
    sf1: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrontierError {
    LengthCapExceeded { requested: u8, max_len: u8 },
    WrongLength { word: Word, expected: u8 },
    DuplicateWord { word: Word },
    NotAddable { word: Word },
}

impl fmt::Display for FrontierError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrontierError::LengthCapExceeded { requested, max_len } => write!(
                f,
                "word length {} exceeds the configured maximum {}; raise the cap to proceed",
                requested, max_len
            ),
            FrontierError::WrongLength { word, expected } => {
                write!(f, "codeword {} does not have the step length {}", word, expected)
            }
            FrontierError::DuplicateWord { word } => {
                write!(f, "codeword {} supplied twice in one step", word)
            }
            FrontierError::NotAddable { word } => write!(
                f,
                "codeword {} is not prefix-free and suffix-free over the code so far",
                word
            ),
        }
    }
}

impl std::error::Error for FrontierError {}

impl FrontierState {
    /// Sentinel state over the empty code; the first extension produces the
    /// frontiers at length 1.
    pub fn initial() -> Self {
        Self::with_max_len(DEFAULT_MAX_LEN)
    }

    pub fn with_max_len(max_len: u8) -> Self {
        assert!(
            (1..=MAX_WORD_LEN).contains(&max_len),
            "max_len must be between 1 and {}",
            MAX_WORD_LEN
        );
        FrontierState {
            length: 0,
            max_len,
            pf0: Vec::new(),
            pf1: Vec::new(),
            sf0: Vec::new(),
            sf1: Vec::new(),
        }
    }

    pub fn length(&self) -> u8 {
        self.length
    }

    pub fn max_len(&self) -> u8 {
        self.max_len
    }

    /// Prefix-free words with first bit 0.
    pub fn pf0(&self) -> &[Word] {
        &self.pf0
    }

    /// Prefix-free words with first bit 1.
    pub fn pf1(&self) -> &[Word] {
        &self.pf1
    }

    /// Suffix-free words with last bit 0.
    pub fn sf0(&self) -> &[Word] {
        &self.sf0
    }

    /// Suffix-free words with last bit 1.
    pub fn sf1(&self) -> &[Word] {
        &self.sf1
    }

    /// All prefix-free words, sorted. First-bit-0 values precede first-bit-1
    /// values, so concatenation preserves order.
    pub fn prefix_free(&self) -> Vec<Word> {
        let mut all = Vec::with_capacity(self.pf0.len() + self.pf1.len());
        all.extend_from_slice(&self.pf0);
        all.extend_from_slice(&self.pf1);
        all
    }

    /// All suffix-free words, sorted.
    pub fn suffix_free(&self) -> Vec<Word> {
        merge_sorted(&self.sf0, &self.sf1)
    }

    /// Words of the next length addable to the code without violating
    /// fix-freeness, sorted.
    pub fn addable(&self) -> Vec<Word> {
        if self.length == 0 {
            return vec![word(0, 1), word(1, 1)];
        }
        cross(&self.prefix_free(), &self.suffix_free())
    }

    /// Addable words of the next length partitioned by form, in
    /// [`crate::word::WordForm::ALL`] order.
    pub fn addable_by_form(&self) -> [Vec<Word>; 4] {
        if self.length == 0 {
            return [vec![word(0, 1)], Vec::new(), Vec::new(), vec![word(1, 1)]];
        }
        [
            cross(&self.pf0, &self.sf0),
            cross(&self.pf0, &self.sf1),
            cross(&self.pf1, &self.sf0),
            cross(&self.pf1, &self.sf1),
        ]
    }

    /// Advance to the next length after adding `new_codewords` there.
    ///
    /// Each new codeword must have the next length and be addable over the
    /// current code: its prefix of the current length must lie in pf0/pf1
    /// and its suffix in sf0/sf1.
    pub fn extend(&self, new_codewords: &[Word]) -> Result<FrontierState, FrontierError> {
        if self.length >= self.max_len {
            return Err(FrontierError::LengthCapExceeded {
                requested: self.length + 1,
                max_len: self.max_len,
            });
        }
        let next_len = self.length + 1;

        let mut excluded: Vec<u32> = Vec::with_capacity(new_codewords.len());
        for w in new_codewords {
            if w.len() != next_len {
                return Err(FrontierError::WrongLength { word: *w, expected: next_len });
            }
            excluded.push(w.value());
        }
        excluded.sort_unstable();
        for pair in excluded.windows(2) {
            if pair[0] == pair[1] {
                return Err(FrontierError::DuplicateWord {
                    word: word(pair[0], next_len),
                });
            }
        }
        if self.length > 0 {
            for w in new_codewords {
                let p = w.prefix(self.length).expect("length in range");
                let s = w.suffix(self.length).expect("length in range");
                let in_pf = if p.first_bit() == 0 {
                    self.pf0.binary_search(&p).is_ok()
                } else {
                    self.pf1.binary_search(&p).is_ok()
                };
                let in_sf = if s.last_bit() == 0 {
                    self.sf0.binary_search(&s).is_ok()
                } else {
                    self.sf1.binary_search(&s).is_ok()
                };
                if !in_pf || !in_sf {
                    return Err(FrontierError::NotAddable { word: *w });
                }
            }
        }

        let keep = |w: &Word| excluded.binary_search(&w.value()).is_err();
        let (pf0, pf1, sf0, sf1) = if self.length == 0 {
            let zero = [word(0, 1)];
            let one = [word(1, 1)];
            (
                zero.iter().copied().filter(keep).collect(),
                one.iter().copied().filter(keep).collect(),
                zero.iter().copied().filter(keep).collect(),
                one.iter().copied().filter(keep).collect(),
            )
        } else {
            // Appending a bit keeps the first bit; doubled pf0/pf1 stay
            // sorted because values map to 2v and 2v+1.  Prepending keeps
            // the last bit; 0w values precede all 1w values.
            let double_low = |src: &[Word]| -> Vec<Word> {
                src.iter()
                    .flat_map(|w| {
                        [w.push_low(0).expect("under cap"), w.push_low(1).expect("under cap")]
                    })
                    .filter(keep)
                    .collect()
            };
            let double_high = |src: &[Word]| -> Vec<Word> {
                src.iter()
                    .map(|w| w.push_high(0).expect("under cap"))
                    .chain(src.iter().map(|w| w.push_high(1).expect("under cap")))
                    .filter(keep)
                    .collect()
            };
            (double_low(&self.pf0), double_low(&self.pf1), double_high(&self.sf0), double_high(&self.sf1))
        };

        Ok(FrontierState { length: next_len, max_len: self.max_len, pf0, pf1, sf0, sf1 })
    }
}

fn word(value: u32, len: u8) -> Word {
    Word::new(value, len).expect("valid word")
}

fn merge_sorted(a: &[Word], b: &[Word]) -> Vec<Word> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Words of length `n + 1` whose `n`-prefix lies in `m1` and `n`-suffix in
/// `m2`, sorted.  Both inputs must consist of words of one common length.
///
/// Built by matching on the shared middle: a word `a b c` (one bit, n-1
/// bits, one bit) qualifies exactly when `a b` is in `m1` and `b c` is in
/// `m2`, so the sets are joined on `b` instead of scanning all candidates.
pub fn cross(m1: &[Word], m2: &[Word]) -> Vec<Word> {
    if m1.is_empty() || m2.is_empty() {
        return Vec::new();
    }
    let n = m1[0].len();
    assert!(m1.iter().all(|w| w.len() == n), "cross inputs must share one length");
    assert!(m2.iter().all(|w| w.len() == n), "cross inputs must share one length");
    assert!(n < MAX_WORD_LEN, "cross output length exceeds representation");

    let mid_mask = if n == 1 { 0 } else { (1u32 << (n - 1)) - 1 };
    // middle bits -> set of first bits occurring in m1
    let mut firsts: HashMap<u32, u8> = HashMap::with_capacity(m1.len());
    for w in m1 {
        *firsts.entry(w.value() & mid_mask).or_insert(0) |= 1 << (w.value() >> (n - 1));
    }
    let mut out = Vec::new();
    for w in m2 {
        let mid = w.value() >> 1;
        let last = w.value() & 1;
        if let Some(&mask) = firsts.get(&mid) {
            for first in 0..2u32 {
                if mask & (1 << first) != 0 {
                    out.push(word((first << n) | (mid << 1) | last, n + 1));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// True when all (n-1)-suffixes are pairwise distinct; a set of single-bit
/// words qualifies only with at most one element.
pub fn is_right_regular(m: &[Word]) -> bool {
    regular_by(m, |w, n| w.value() & if n == 1 { 0 } else { (1u32 << (n - 1)) - 1 })
}

/// True when all (n-1)-prefixes are pairwise distinct.
pub fn is_left_regular(m: &[Word]) -> bool {
    regular_by(m, |w, _| w.value() >> 1)
}

fn regular_by(m: &[Word], key: impl Fn(&Word, u8) -> u32) -> bool {
    if m.len() <= 1 {
        return true;
    }
    let n = m[0].len();
    assert!(m.iter().all(|w| w.len() == n), "regularity inputs must share one length");
    if n == 1 {
        return false;
    }
    let mut seen: Vec<u32> = m.iter().map(|w| key(w, n)).collect();
    seen.sort_unstable();
    seen.windows(2).all(|p| p[0] != p[1])
}

/// Guaranteed minimum size of `cross(m1, m2)` for a right regular `m1` and
/// left regular `m2` of length-`n` words: `max(0, |m1| + |m2| - 2^(n-1))`.
pub fn cross_size_lower_bound(m1_size: usize, m2_size: usize, n: u8) -> usize {
    assert!((1..=MAX_WORD_LEN).contains(&n));
    (m1_size + m2_size).saturating_sub(1usize << (n - 1))
}

use std::fmt;
use std::str::FromStr;

/// Hard limit of the packed (value, length) word representation.
pub const MAX_WORD_LEN: u8 = 32;

/// Default cap on word length at construction and design entry points.
/// Frontier memory grows as 2^len, so the cap guards against runaway inputs.
pub const DEFAULT_MAX_LEN: u8 = 24;

/// A binary word of explicit bit length, stored MSB-first in the low bits
/// of `value`.
///
/// Ordering is by `(len, value)`; on equal lengths integer order coincides
/// with lexicographic order on the bitstrings.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    len: u8,
    value: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordError {
    Empty,
    TooLong { len: usize },
    ValueTooWide { value: u32, len: u8 },
    RangeOutOfBounds { p: u8, len: u8 },
    BadBit(char),
}

impl fmt::Display for WordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordError::Empty => write!(f, "word must have at least one bit"),
            WordError::TooLong { len } => {
                write!(f, "word length {} exceeds the limit of {} bits", len, MAX_WORD_LEN)
            }
            WordError::ValueTooWide { value, len } => {
                write!(f, "value {} does not fit in {} bits", value, len)
            }
            WordError::RangeOutOfBounds { p, len } => {
                write!(f, "bit count {} out of range for a word of length {}", p, len)
            }
            WordError::BadBit(c) => write!(f, "invalid bit character {:?}", c),
        }
    }
}

impl std::error::Error for WordError {}

impl Word {
    pub fn new(value: u32, len: u8) -> Result<Self, WordError> {
        if len == 0 {
            return Err(WordError::Empty);
        }
        if len > MAX_WORD_LEN {
            return Err(WordError::TooLong { len: len as usize });
        }
        if len < 32 && value >> len != 0 {
            return Err(WordError::ValueTooWide { value, len });
        }
        Ok(Word { len, value })
    }

    #[allow(clippy::len_without_is_empty)] // a word has at least one bit
    pub fn len(&self) -> u8 {
        self.len
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    /// The first `p` bits, `1 <= p <= len`.
    pub fn prefix(&self, p: u8) -> Result<Word, WordError> {
        if p == 0 || p > self.len {
            return Err(WordError::RangeOutOfBounds { p, len: self.len });
        }
        Ok(Word { len: p, value: self.value >> (self.len - p) })
    }

    /// The last `p` bits, `1 <= p <= len`.
    pub fn suffix(&self, p: u8) -> Result<Word, WordError> {
        if p == 0 || p > self.len {
            return Err(WordError::RangeOutOfBounds { p, len: self.len });
        }
        Ok(Word { len: p, value: self.value & low_mask(p) })
    }

    pub fn first_bit(&self) -> u8 {
        ((self.value >> (self.len - 1)) & 1) as u8
    }

    pub fn last_bit(&self) -> u8 {
        (self.value & 1) as u8
    }

    /// Bit at position `i`, counting from the most significant bit.
    pub fn bit(&self, i: u8) -> u8 {
        debug_assert!(i < self.len);
        ((self.value >> (self.len - 1 - i)) & 1) as u8
    }

    /// Boundary-bit classification (first bit, last bit); for a single-bit
    /// word both equal that bit.
    pub fn form(&self) -> WordForm {
        WordForm::from_bits(self.first_bit(), self.last_bit())
    }

    /// Append a bit at the low (last) end. `None` if the word is already at
    /// the representation limit.
    pub fn push_low(&self, bit: u8) -> Option<Word> {
        debug_assert!(bit <= 1);
        if self.len >= MAX_WORD_LEN {
            return None;
        }
        Some(Word { len: self.len + 1, value: (self.value << 1) | bit as u32 })
    }

    /// Prepend a bit at the high (first) end.
    pub fn push_high(&self, bit: u8) -> Option<Word> {
        debug_assert!(bit <= 1);
        if self.len >= MAX_WORD_LEN {
            return None;
        }
        Some(Word { len: self.len + 1, value: self.value | ((bit as u32) << self.len) })
    }

    /// Bits in MSB-first order.
    pub fn bits(&self) -> impl DoubleEndedIterator<Item = u8> + '_ {
        (0..self.len).map(move |i| self.bit(i))
    }
}

fn low_mask(p: u8) -> u32 {
    if p >= 32 {
        u32::MAX
    } else {
        (1u32 << p) - 1
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self)
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, WordError> {
        if s.is_empty() {
            return Err(WordError::Empty);
        }
        if s.len() > MAX_WORD_LEN as usize {
            return Err(WordError::TooLong { len: s.len() });
        }
        let mut value = 0u32;
        for c in s.chars() {
            let bit = match c {
                '0' => 0,
                '1' => 1,
                other => return Err(WordError::BadBit(other)),
            };
            value = (value << 1) | bit;
        }
        Ok(Word { len: s.len() as u8, value })
    }
}

/// Classification of a word by its first and last bit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum WordForm {
    ZeroZero,
    ZeroOne,
    OneZero,
    OneOne,
}

impl WordForm {
    /// All forms, ordered by (first bit, last bit).
    pub const ALL: [WordForm; 4] =
        [WordForm::ZeroZero, WordForm::ZeroOne, WordForm::OneZero, WordForm::OneOne];

    pub fn from_bits(first: u8, last: u8) -> WordForm {
        match (first, last) {
            (0, 0) => WordForm::ZeroZero,
            (0, 1) => WordForm::ZeroOne,
            (1, 0) => WordForm::OneZero,
            (1, 1) => WordForm::OneOne,
            _ => unreachable!("bits are 0 or 1"),
        }
    }

    pub fn first(self) -> u8 {
        match self {
            WordForm::ZeroZero | WordForm::ZeroOne => 0,
            WordForm::OneZero | WordForm::OneOne => 1,
        }
    }

    pub fn last(self) -> u8 {
        match self {
            WordForm::ZeroZero | WordForm::OneZero => 0,
            WordForm::ZeroOne | WordForm::OneOne => 1,
        }
    }

    /// Position in [`WordForm::ALL`].
    pub fn index(self) -> usize {
        (self.first() * 2 + self.last()) as usize
    }
}

impl fmt::Display for WordForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{}", self.first(), self.last())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(w("10110").prefix(2).unwrap(), w("10"));
        assert_eq!(w("10110").prefix(5).unwrap(), w("10110"));
        assert_eq!(w("0").prefix(1).unwrap(), w("0"));
    }

    #[test]
    fn suffix_examples() {
        assert_eq!(w("10110").suffix(2).unwrap(), w("10"));
        assert_eq!(w("10110").suffix(1).unwrap(), w("0"));
        assert_eq!(w("11").suffix(2).unwrap(), w("11"));
    }

    #[test]
    fn form_examples() {
        assert_eq!(w("0110").form(), WordForm::ZeroZero);
        assert_eq!(w("101").form(), WordForm::OneOne);
        assert_eq!(w("0").form(), WordForm::ZeroZero);
    }

    #[test]
    fn prefix_suffix_out_of_range() {
        assert!(w("101").prefix(0).is_err());
        assert!(w("101").prefix(4).is_err());
        assert!(w("101").suffix(0).is_err());
        assert!(w("101").suffix(4).is_err());
    }

    #[test]
    fn new_rejects_bad_words() {
        assert_eq!(Word::new(0, 0), Err(WordError::Empty));
        assert!(Word::new(4, 2).is_err());
        assert!(Word::new(0, 33).is_err());
        assert!(Word::new(u32::MAX, 32).is_ok());
    }

    #[test]
    fn ordering_is_length_then_value() {
        assert!(w("11") < w("000"));
        assert!(w("001") < w("010"));
    }

    #[test]
    fn push_bits() {
        assert_eq!(w("10").push_low(1).unwrap(), w("101"));
        assert_eq!(w("10").push_high(1).unwrap(), w("110"));
        assert!(Word::new(0, 32).unwrap().push_low(0).is_none());
    }

    proptest! {
        #[test]
        fn parse_display_roundtrip(s in "[01]{1,32}") {
            let word: Word = s.parse().unwrap();
            prop_assert_eq!(word.to_string(), s);
        }

        #[test]
        fn full_prefix_and_suffix_are_identity(value in any::<u32>(), len in 1u8..=32) {
            let value = value & super::low_mask(len);
            let word = Word::new(value, len).unwrap();
            prop_assert_eq!(word.prefix(len).unwrap(), word);
            prop_assert_eq!(word.suffix(len).unwrap(), word);
        }

        #[test]
        fn form_matches_unit_prefix_and_suffix(value in any::<u32>(), len in 1u8..=32) {
            let value = value & super::low_mask(len);
            let word = Word::new(value, len).unwrap();
            let first = word.prefix(1).unwrap().value() as u8;
            let last = word.suffix(1).unwrap().value() as u8;
            prop_assert_eq!(word.form(), WordForm::from_bits(first, last));
        }
    }
}

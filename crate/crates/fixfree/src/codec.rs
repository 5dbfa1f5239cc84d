use std::collections::HashMap;
use std::fmt;

use crate::code::Code;
use crate::oracle::{verify_fixfree_words, FixFreeViolation};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodecError {
    UnknownSymbol { symbol: String, position: usize },
    /// Stream exhausted in the middle of a codeword; offset of the codeword
    /// start, counted from the decoding end.
    DanglingBits { offset: u64 },
    /// No codeword matches at the offset (counted from the decoding end).
    NoMatch { offset: u64 },
    DuplicateSymbol { symbol: String },
    DuplicateWord { word: Word },
    BadSymbol { symbol: String },
    NotFixFree(FixFreeViolation),
    TableSyntax { line: usize, detail: String },
    BadMagic,
    Truncated,
    TrailingData,
    NonZeroPadding,
}

impl fmt::Display for CodecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodecError::UnknownSymbol { symbol, position } => {
                write!(f, "symbol {:?} at position {} is not in the code table", symbol, position)
            }
            CodecError::DanglingBits { offset } => {
                write!(f, "stream ends inside a codeword that starts at bit offset {}", offset)
            }
            CodecError::NoMatch { offset } => {
                write!(f, "no codeword matches at bit offset {}", offset)
            }
            CodecError::DuplicateSymbol { symbol } => write!(f, "duplicate symbol {:?}", symbol),
            CodecError::DuplicateWord { word } => write!(f, "duplicate codeword {}", word),
            CodecError::BadSymbol { symbol } => write!(
                f,
                "invalid symbol {:?}: symbols are nonempty and contain no whitespace or '#'",
                symbol
            ),
            CodecError::NotFixFree(v) => write!(f, "code is not fix-free: {}", v),
            CodecError::TableSyntax { line, detail } => {
                write!(f, "code table line {}: {}", line, detail)
            }
            CodecError::BadMagic => write!(f, "not a bitstream file (bad magic)"),
            CodecError::Truncated => write!(f, "bitstream file is truncated"),
            CodecError::TrailingData => write!(f, "bitstream file has bytes past the payload"),
            CodecError::NonZeroPadding => write!(f, "bitstream padding bits are not zero"),
        }
    }
}

impl std::error::Error for CodecError {}

/// A packed bit sequence, MSB-first within each byte, zero-padded in the
/// final byte.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitStream {
    bit_count: u64,
    payload: Vec<u8>,
}

/// Bitstream file magic.
pub const BITSTREAM_MAGIC: [u8; 4] = *b"FXF1";

impl BitStream {
    pub fn new() -> Self {
        BitStream::default()
    }

    pub fn bit_count(&self) -> u64 {
        self.bit_count
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    pub fn push_bit(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        if self.bit_count.is_multiple_of(8) {
            self.payload.push(0);
        }
        if bit != 0 {
            let last = self.payload.len() - 1;
            self.payload[last] |= 1 << (7 - (self.bit_count % 8));
        }
        self.bit_count += 1;
    }

    pub fn push_word(&mut self, word: Word) {
        for bit in word.bits() {
            self.push_bit(bit);
        }
    }

    pub fn bit(&self, index: u64) -> u8 {
        debug_assert!(index < self.bit_count);
        (self.payload[(index / 8) as usize] >> (7 - (index % 8))) & 1
    }

    /// File form: magic `FXF1`, 8-byte big-endian bit count, payload.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 + self.payload.len());
        out.extend_from_slice(&BITSTREAM_MAGIC);
        out.extend_from_slice(&self.bit_count.to_be_bytes());
        out.extend_from_slice(&self.payload);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CodecError> {
        if bytes.len() < 4 {
            return Err(CodecError::Truncated);
        }
        if bytes[..4] != BITSTREAM_MAGIC {
            return Err(CodecError::BadMagic);
        }
        if bytes.len() < 12 {
            return Err(CodecError::Truncated);
        }
        let bit_count = u64::from_be_bytes(bytes[4..12].try_into().expect("eight bytes"));
        let payload = &bytes[12..];
        let expected = (bit_count as usize).div_ceil(8);
        if payload.len() < expected {
            return Err(CodecError::Truncated);
        }
        if payload.len() > expected {
            return Err(CodecError::TrailingData);
        }
        if bit_count % 8 != 0 {
            let pad_bits = 8 - (bit_count % 8) as u32;
            let last = payload[payload.len() - 1];
            if last & ((1u16 << pad_bits) - 1) as u8 != 0 {
                return Err(CodecError::NonZeroPadding);
            }
        }
        Ok(BitStream { bit_count, payload: payload.to_vec() })
    }
}

#[derive(Clone, Debug, Default)]
struct TrieNode {
    child: [Option<u32>; 2],
    entry: Option<u32>,
}

#[derive(Clone, Debug)]
struct Trie {
    nodes: Vec<TrieNode>,
}

impl Trie {
    fn new() -> Self {
        Trie { nodes: vec![TrieNode::default()] }
    }

    fn insert(&mut self, bits: impl Iterator<Item = u8>, entry: u32) {
        let mut node = 0usize;
        for bit in bits {
            node = match self.nodes[node].child[bit as usize] {
                Some(next) => next as usize,
                None => {
                    self.nodes.push(TrieNode::default());
                    let next = self.nodes.len() - 1;
                    self.nodes[node].child[bit as usize] = Some(next as u32);
                    next
                }
            };
        }
        debug_assert!(self.nodes[node].entry.is_none());
        self.nodes[node].entry = Some(entry);
    }
}

/// A symbol-to-codeword bijection over a fix-free code, with tries for
/// decoding in both directions.  Immutable once built.
#[derive(Clone, Debug)]
pub struct CodeTable {
    entries: Vec<(String, Word)>,
    by_symbol: HashMap<String, u32>,
    forward: Trie,
    backward: Trie,
}

impl CodeTable {
    pub fn new(entries: Vec<(String, Word)>) -> Result<Self, CodecError> {
        let mut by_symbol = HashMap::with_capacity(entries.len());
        for (i, (symbol, _)) in entries.iter().enumerate() {
            if symbol.is_empty() || symbol.chars().any(|c| c.is_whitespace() || c == '#') {
                return Err(CodecError::BadSymbol { symbol: symbol.clone() });
            }
            if by_symbol.insert(symbol.clone(), i as u32).is_some() {
                return Err(CodecError::DuplicateSymbol { symbol: symbol.clone() });
            }
        }
        let words: Vec<Word> = entries.iter().map(|(_, w)| *w).collect();
        match verify_fixfree_words(&words) {
            Ok(()) => {}
            Err(FixFreeViolation::Duplicate { word }) => {
                return Err(CodecError::DuplicateWord { word })
            }
            Err(violation) => return Err(CodecError::NotFixFree(violation)),
        }
        let mut forward = Trie::new();
        let mut backward = Trie::new();
        for (i, (_, word)) in entries.iter().enumerate() {
            forward.insert(word.bits(), i as u32);
            backward.insert(word.bits().rev(), i as u32);
        }
        Ok(CodeTable { entries, by_symbol, forward, backward })
    }

    /// Parse `symbol<TAB>bitstring` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CodecError> {
        CodeTable::new(parse_table_entries(text)?)
    }

    /// Emit the table sorted by (length, value), one `symbol<TAB>bitstring`
    /// line per entry.
    pub fn to_text(&self) -> String {
        let mut sorted: Vec<&(String, Word)> = self.entries.iter().collect();
        sorted.sort_by_key(|(_, w)| *w);
        let mut out = String::new();
        for (symbol, word) in sorted {
            out.push_str(symbol);
            out.push('\t');
            out.push_str(&word.to_string());
            out.push('\n');
        }
        out
    }

    pub fn entries(&self) -> &[(String, Word)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn word_for(&self, symbol: &str) -> Option<Word> {
        self.by_symbol.get(symbol).map(|&i| self.entries[i as usize].1)
    }

    pub fn code(&self) -> Code {
        self.entries.iter().map(|(_, w)| *w).collect()
    }
}

/// Lenient table-line parsing: syntax and symbol checks only, so a
/// not-fix-free (or duplicated) word list can still be loaded for
/// inspection by the verifier.
pub fn parse_table_entries(text: &str) -> Result<Vec<(String, Word)>, CodecError> {
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let symbol = fields.next().unwrap_or("").trim();
        let word_text = match fields.next() {
            Some(w) => w.trim(),
            None => {
                return Err(CodecError::TableSyntax {
                    line: lineno + 1,
                    detail: "expected symbol<TAB>bitstring".to_string(),
                })
            }
        };
        if fields.next().is_some() {
            return Err(CodecError::TableSyntax {
                line: lineno + 1,
                detail: "more than two tab-separated fields".to_string(),
            });
        }
        if symbol.is_empty() || symbol.chars().any(|c| c.is_whitespace()) {
            return Err(CodecError::BadSymbol { symbol: symbol.to_string() });
        }
        let word: Word = word_text.parse().map_err(|e| CodecError::TableSyntax {
            line: lineno + 1,
            detail: format!("bad bitstring {:?}: {}", word_text, e),
        })?;
        entries.push((symbol.to_string(), word));
    }
    Ok(entries)
}

/// Concatenate the codewords of `symbols` in order.
pub fn encode<'a>(
    table: &CodeTable,
    symbols: impl IntoIterator<Item = &'a str>,
) -> Result<BitStream, CodecError> {
    let mut stream = BitStream::new();
    for (position, symbol) in symbols.into_iter().enumerate() {
        match table.word_for(symbol) {
            Some(word) => stream.push_word(word),
            None => {
                return Err(CodecError::UnknownSymbol { symbol: symbol.to_string(), position })
            }
        }
    }
    Ok(stream)
}

/// Parse the stream left to right.  The code is prefix-free, so at most one
/// codeword can match at each position and the parse is unique.
pub fn decode_forward<'t>(
    table: &'t CodeTable,
    stream: &BitStream,
) -> Result<Vec<&'t str>, CodecError> {
    let mut out = Vec::new();
    let mut pos = 0u64;
    while pos < stream.bit_count() {
        let start = pos;
        let mut node = 0usize;
        loop {
            if let Some(entry) = table.forward.nodes[node].entry {
                out.push(table.entries[entry as usize].0.as_str());
                break;
            }
            if pos == stream.bit_count() {
                return Err(CodecError::DanglingBits { offset: start });
            }
            let bit = stream.bit(pos);
            pos += 1;
            node = match table.forward.nodes[node].child[bit as usize] {
                Some(next) => next as usize,
                None => return Err(CodecError::NoMatch { offset: start }),
            };
        }
    }
    Ok(out)
}

/// Parse the stream right to left by matching codeword suffixes (unique
/// because the code is suffix-free) and return symbols in message order.
/// Error offsets count from the stream end.
pub fn decode_backward<'t>(
    table: &'t CodeTable,
    stream: &BitStream,
) -> Result<Vec<&'t str>, CodecError> {
    let mut reversed = Vec::new();
    let mut pos = stream.bit_count();
    while pos > 0 {
        let start = stream.bit_count() - pos;
        let mut node = 0usize;
        loop {
            if let Some(entry) = table.backward.nodes[node].entry {
                reversed.push(table.entries[entry as usize].0.as_str());
                break;
            }
            if pos == 0 {
                return Err(CodecError::DanglingBits { offset: start });
            }
            pos -= 1;
            let bit = stream.bit(pos);
            node = match table.backward.nodes[node].child[bit as usize] {
                Some(next) => next as usize,
                None => return Err(CodecError::NoMatch { offset: start }),
            };
        }
    }
    reversed.reverse();
    Ok(reversed)
}

/// Message files are whitespace-separated symbol tokens.
pub fn parse_message(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

/// Canonical message rendering: tokens joined by single spaces with a
/// trailing newline; the empty message renders as the empty string.
pub fn render_message(symbols: &[&str]) -> String {
    if symbols.is_empty() {
        String::new()
    } else {
        let mut out = symbols.join(" ");
        out.push('\n');
        out
    }
}

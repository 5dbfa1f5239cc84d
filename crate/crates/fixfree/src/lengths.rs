use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_traits::Zero;

use crate::dyadic::DyadicRational;

/// Codeword counts per length: `counts[i]` words of length `i + 1`.
///
/// The canonical form trims trailing zeros, so `(1, 1, 0)` and `(1, 1)`
/// compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LengthVector {
    counts: Vec<u64>,
}

impl LengthVector {
    pub fn new(mut counts: Vec<u64>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        LengthVector { counts }
    }

    /// Histogram of explicit codeword lengths.
    pub fn from_lengths(lengths: &[u8]) -> Self {
        let mut counts = vec![0u64; lengths.iter().copied().max().unwrap_or(0) as usize];
        for &l in lengths {
            counts[l as usize - 1] += 1;
        }
        LengthVector::new(counts)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of codewords of length `len` (1-based).
    pub fn count_at(&self, len: usize) -> u64 {
        if len == 0 || len > self.counts.len() {
            0
        } else {
            self.counts[len - 1]
        }
    }

    /// Largest length with a nonzero count; 0 for the empty vector.
    pub fn max_len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total_words(&self) -> u64 {
        self.counts
            .iter()
            .fold(0u128, |acc, &k| acc + k as u128)
            .try_into()
            .unwrap_or(u64::MAX)
    }

    /// `sum k_i / 2^i`, exact.
    pub fn kraft_sum(&self) -> DyadicRational {
        let mut sum = DyadicRational::zero();
        for (i, &k) in self.counts.iter().enumerate() {
            if k != 0 {
                sum += &DyadicRational::new_u64(k, i as u32 + 1);
            }
        }
        sum
    }

    /// Add `k` words of length `len`, extending as needed.
    pub fn add_count(&mut self, len: usize, k: u64) {
        if k == 0 {
            return;
        }
        if self.counts.len() < len {
            self.counts.resize(len, 0);
        }
        self.counts[len - 1] += k;
    }
}

impl Add for &LengthVector {
    type Output = LengthVector;

    fn add(self, rhs: Self) -> LengthVector {
        let n = self.counts.len().max(rhs.counts.len());
        let counts = (1..=n).map(|i| self.count_at(i) + rhs.count_at(i)).collect();
        LengthVector::new(counts)
    }
}

impl fmt::Display for LengthVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for k in &self.counts {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}", k)?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseLengthsError {
    pub token: String,
}

impl fmt::Display for ParseLengthsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid count {:?}: expected a nonnegative integer", self.token)
    }
}

impl std::error::Error for ParseLengthsError {}

/// Text format: whitespace-separated nonnegative integers `k_1 .. k_n`,
/// with `#` starting a comment that runs to the end of the line.
impl FromStr for LengthVector {
    type Err = ParseLengthsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut counts = Vec::new();
        for line in s.lines() {
            let line = line.split('#').next().unwrap_or("");
            for token in line.split_whitespace() {
                let k = token
                    .parse::<u64>()
                    .map_err(|_| ParseLengthsError { token: token.to_string() })?;
                counts.push(k);
            }
        }
        Ok(LengthVector::new(counts))
    }
}

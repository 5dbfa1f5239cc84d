use std::fmt;

use num_traits::Zero;

use crate::codec::{CodeTable, CodecError};
use crate::construct::{construct_with_max_len, ConstructError};
use crate::dyadic::DyadicRational;
use crate::lengths::LengthVector;
use crate::word::Word;

/// Allowed deviation of the input probability sum from 1 before rejection;
/// within it the distribution is renormalized exactly.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// `4 - log2(5)`, the strict upper bound on the redundancy of designed codes.
pub fn redundancy_bound() -> f64 {
    4.0 - 5f64.log2()
}

#[derive(Clone, Debug, PartialEq)]
pub enum DesignError {
    Empty,
    BadSymbol { symbol: String },
    DuplicateSymbol { symbol: String },
    NonPositiveProbability { symbol: String },
    SumOutOfTolerance { sum: f64 },
    LengthCapExceeded { symbol: String, max_len: u8 },
    Syntax { line: usize, detail: String },
    Construct(ConstructError),
    Table(CodecError),
}

impl fmt::Display for DesignError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DesignError::Empty => write!(f, "distribution has no symbols"),
            DesignError::BadSymbol { symbol } => write!(
                f,
                "invalid symbol {:?}: symbols are nonempty and contain no whitespace or '#'",
                symbol
            ),
            DesignError::DuplicateSymbol { symbol } => write!(f, "duplicate symbol {:?}", symbol),
            DesignError::NonPositiveProbability { symbol } => {
                write!(f, "probability of {:?} must be positive and finite", symbol)
            }
            DesignError::SumOutOfTolerance { sum } => write!(
                f,
                "probabilities sum to {} which is more than {} away from 1",
                sum, SUM_TOLERANCE
            ),
            DesignError::LengthCapExceeded { symbol, max_len } => write!(
                f,
                "symbol {:?} needs a codeword longer than the cap {}; raise the cap or merge \
                 rare symbols",
                symbol, max_len
            ),
            DesignError::Syntax { line, detail } => {
                write!(f, "distribution line {}: {}", line, detail)
            }
            DesignError::Construct(e) => write!(f, "{}", e),
            DesignError::Table(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for DesignError {}

/// A source distribution with exact binary-rational probabilities.
///
/// Each probability is the exact value of its `f64` representation, and the
/// exact sum is kept for renormalized comparisons, so threshold decisions
/// never hinge on floating rounding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    symbols: Vec<String>,
    probs: Vec<DyadicRational>,
    total: DyadicRational,
}

impl Distribution {
    pub fn new(entries: Vec<(String, f64)>) -> Result<Self, DesignError> {
        if entries.is_empty() {
            return Err(DesignError::Empty);
        }
        let mut symbols = Vec::with_capacity(entries.len());
        let mut probs = Vec::with_capacity(entries.len());
        let mut total = DyadicRational::zero();
        for (symbol, p) in entries {
            if symbol.is_empty() || symbol.chars().any(|c| c.is_whitespace() || c == '#') {
                return Err(DesignError::BadSymbol { symbol });
            }
            if symbols.contains(&symbol) {
                return Err(DesignError::DuplicateSymbol { symbol });
            }
            let exact = match DyadicRational::from_f64_exact(p) {
                Some(v) if !v.is_zero() => v,
                _ => return Err(DesignError::NonPositiveProbability { symbol }),
            };
            total += &exact;
            symbols.push(symbol);
            probs.push(exact);
        }
        let sum = total.to_f64();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(DesignError::SumOutOfTolerance { sum });
        }
        Ok(Distribution { symbols, probs, total })
    }

    /// Auto-named distribution `s1..sm`, mainly for tests and sweeps.
    pub fn from_probs(probs: &[f64]) -> Result<Self, DesignError> {
        Distribution::new(
            probs.iter().enumerate().map(|(i, &p)| (format!("s{}", i + 1), p)).collect(),
        )
    }

    /// Parse `symbol<TAB>probability` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, DesignError> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let symbol = fields.next().unwrap_or("").trim().to_string();
            let prob_text = match fields.next() {
                Some(p) => p.trim(),
                None => {
                    return Err(DesignError::Syntax {
                        line: lineno + 1,
                        detail: "expected symbol<TAB>probability".to_string(),
                    })
                }
            };
            if fields.next().is_some() {
                return Err(DesignError::Syntax {
                    line: lineno + 1,
                    detail: "more than two tab-separated fields".to_string(),
                });
            }
            let p: f64 = prob_text.parse().map_err(|_| DesignError::Syntax {
                line: lineno + 1,
                detail: format!("bad probability {:?}", prob_text),
            })?;
            entries.push((symbol, p));
        }
        Distribution::new(entries)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn probs(&self) -> &[DyadicRational] {
        &self.probs
    }

    pub fn total(&self) -> &DyadicRational {
        &self.total
    }

    /// Renormalized probabilities in double precision.
    pub fn renormalized(&self) -> Vec<f64> {
        let total = self.total.to_f64();
        self.probs.iter().map(|p| p.to_f64() / total).collect()
    }
}

/// Codeword lengths for the distribution: each `l_i` is the least length
/// with `2^-l <= (5/8) p_i`, decided by the exact comparison
/// `total <= (5/8) p_i 2^l` on the rational representations.  The resulting
/// Kraft sum never exceeds 5/8, so construction always succeeds.
pub fn design_lengths(d: &Distribution, max_len: u8) -> Result<Vec<u8>, DesignError> {
    let five_eighths = DyadicRational::new_u64(5, 3);
    let mut lengths = Vec::with_capacity(d.len());
    for (symbol, p) in d.symbols.iter().zip(&d.probs) {
        let scaled = &five_eighths * p;
        let mut l = 1u8;
        loop {
            if *d.total() <= scaled.shl_pow2(l as u32) {
                break;
            }
            if l >= max_len {
                return Err(DesignError::LengthCapExceeded {
                    symbol: symbol.clone(),
                    max_len,
                });
            }
            l += 1;
        }
        lengths.push(l);
    }
    Ok(lengths)
}

/// Everything the design reports alongside the table.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignReport {
    /// Codeword length per input symbol, in input order.
    pub lengths: Vec<u8>,
    /// Exact Kraft sum of the lengths; at most 5/8 by construction.
    pub kraft: DyadicRational,
    pub entropy: f64,
    pub avg_length: f64,
    /// `avg_length - entropy`; strictly below `bound`.
    pub redundancy: f64,
    pub bound: f64,
}

impl DesignReport {
    pub fn aligned_text(&self) -> String {
        let lengths =
            self.lengths.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ");
        format!(
            "lengths     {}\nkraft       {}\nentropy     {:.6}\navg_length  {:.6}\n\
             redundancy  {:.6}\nbound       {:.6}\n",
            lengths, self.kraft, self.entropy, self.avg_length, self.redundancy, self.bound
        )
    }

    pub fn kv_text(&self) -> String {
        let lengths =
            self.lengths.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
        format!(
            "lengths={}\nkraft={}\nentropy={}\navg_length={}\nredundancy={}\nbound={}\n",
            lengths, self.kraft, self.entropy, self.avg_length, self.redundancy, self.bound
        )
    }
}

/// Design a fix-free code for the distribution: compute lengths, build the
/// code, and assign the shortest words to the most probable symbols (ties
/// keep input order).
pub fn design_code(
    d: &Distribution,
    max_len: u8,
) -> Result<(CodeTable, DesignReport), DesignError> {
    let lengths = design_lengths(d, max_len)?;
    let vector = LengthVector::from_lengths(&lengths);
    let built = construct_with_max_len(&vector, max_len).map_err(DesignError::Construct)?;

    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| d.probs[b].cmp(&d.probs[a]).then(a.cmp(&b)));
    let words: Vec<Word> = built.code.iter().collect();
    let mut assigned: Vec<Option<(String, Word)>> = vec![None; d.len()];
    for (word, &i) in words.iter().zip(&order) {
        debug_assert_eq!(word.len(), lengths[i], "length multisets align");
        assigned[i] = Some((d.symbols[i].clone(), *word));
    }
    let entries: Vec<(String, Word)> =
        assigned.into_iter().map(|e| e.expect("every symbol assigned")).collect();
    let table = CodeTable::new(entries).map_err(DesignError::Table)?;

    let entropy = entropy(d);
    let avg_length = avg_length(&lengths, d);
    let report = DesignReport {
        kraft: vector.kraft_sum(),
        lengths,
        entropy,
        avg_length,
        redundancy: avg_length - entropy,
        bound: redundancy_bound(),
    };
    debug_assert!(report.kraft <= DyadicRational::new_u64(5, 3));
    Ok((table, report))
}

/// Shannon entropy of the renormalized distribution, in bits.
pub fn entropy(d: &Distribution) -> f64 {
    d.renormalized().iter().map(|&q| if q > 0.0 { -q * q.log2() } else { 0.0 }).sum()
}

/// Probability-weighted mean codeword length.
pub fn avg_length(lengths: &[u8], d: &Distribution) -> f64 {
    assert_eq!(lengths.len(), d.len());
    d.renormalized().iter().zip(lengths).map(|(&q, &l)| q * l as f64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{decode_backward, decode_forward, encode};
    use crate::oracle::verify_fixfree;

    #[test]
    fn lengths_examples() {
        let d = Distribution::from_probs(&[0.5, 0.5]).unwrap();
        assert_eq!(design_lengths(&d, 24).unwrap(), vec![2, 2]);

        let d = Distribution::from_probs(&[1.0]).unwrap();
        assert_eq!(design_lengths(&d, 24).unwrap(), vec![1]);

        let d = Distribution::from_probs(&[0.25, 0.25, 0.25, 0.25]).unwrap();
        assert_eq!(design_lengths(&d, 24).unwrap(), vec![3, 3, 3, 3]);
        let v = LengthVector::from_lengths(&design_lengths(&d, 24).unwrap());
        assert_eq!(v.kraft_sum(), DyadicRational::new_u64(1, 1));
    }

    #[test]
    fn boundary_probabilities_stay_exact() {
        // five copies of the double nearest to 1/5: the exact comparison
        // lands the lengths on 3 and the Kraft sum exactly on 5/8
        let d = Distribution::from_probs(&[0.2; 5]).unwrap();
        let lengths = design_lengths(&d, 24).unwrap();
        assert_eq!(lengths, vec![3; 5]);
        let kraft = LengthVector::from_lengths(&lengths).kraft_sum();
        assert_eq!(kraft, DyadicRational::new_u64(5, 3));
    }

    #[test]
    fn lengths_are_minimal() {
        let d = Distribution::from_probs(&[0.7, 0.2, 0.06, 0.04]).unwrap();
        let lengths = design_lengths(&d, 24).unwrap();
        let five_eighths = DyadicRational::new_u64(5, 3);
        for (l, p) in lengths.iter().zip(d.probs()) {
            let scaled = &five_eighths * p;
            assert!(*d.total() <= scaled.shl_pow2(*l as u32));
            if *l > 1 {
                assert!(*d.total() > scaled.shl_pow2(*l as u32 - 1), "length {} not minimal", l);
            }
        }
    }

    #[test]
    fn monotone_in_probability() {
        let d = Distribution::from_probs(&[0.4, 0.3, 0.2, 0.05, 0.05]).unwrap();
        let lengths = design_lengths(&d, 24).unwrap();
        for pair in lengths.windows(2) {
            assert!(pair[0] <= pair[1]);
        }
    }

    #[test]
    fn entropy_examples() {
        let uniform = Distribution::from_probs(&[0.5, 0.5]).unwrap();
        assert!((entropy(&uniform) - 1.0).abs() < 1e-12);
        let single = Distribution::from_probs(&[1.0]).unwrap();
        assert_eq!(entropy(&single), 0.0);
        let skewed = Distribution::from_probs(&[0.75, 0.25]).unwrap();
        assert!((entropy(&skewed) - 0.811278).abs() < 1e-6);
    }

    #[test]
    fn design_single_symbol() {
        let d = Distribution::from_probs(&[1.0]).unwrap();
        let (table, report) = design_code(&d, 24).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(report.lengths, vec![1]);
        assert_eq!(report.avg_length, 1.0);
        assert_eq!(report.entropy, 0.0);
        assert_eq!(report.redundancy, 1.0);
        assert!(report.redundancy < report.bound);
    }

    #[test]
    fn design_two_symbols() {
        let d = Distribution::from_probs(&[0.5, 0.5]).unwrap();
        let (table, report) = design_code(&d, 24).unwrap();
        assert_eq!(report.lengths, vec![2, 2]);
        assert!((report.redundancy - 1.0).abs() < 1e-12);
        assert!(verify_fixfree(&table.code()).is_ok());
    }

    #[test]
    fn shortest_words_go_to_most_probable() {
        let d = Distribution::new(vec![
            ("rare".to_string(), 0.1),
            ("common".to_string(), 0.8),
            ("rare2".to_string(), 0.1),
        ])
        .unwrap();
        let (table, report) = design_code(&d, 24).unwrap();
        let common = table.word_for("common").unwrap();
        let rare = table.word_for("rare").unwrap();
        let rare2 = table.word_for("rare2").unwrap();
        assert!(common.len() <= rare.len());
        assert!(common.len() <= rare2.len());
        // ties keep input order: "rare" gets the smaller word
        assert_eq!(rare.len(), rare2.len());
        assert!(rare < rare2);
        assert_eq!(report.lengths.len(), 3);
    }

    #[test]
    fn designed_table_roundtrips() {
        let d = Distribution::from_probs(&[0.4, 0.3, 0.2, 0.1]).unwrap();
        let (table, _) = design_code(&d, 24).unwrap();
        let message = vec!["s1", "s4", "s2", "s2", "s3"];
        let stream = encode(&table, message.iter().copied()).unwrap();
        assert_eq!(decode_forward(&table, &stream).unwrap(), message);
        assert_eq!(decode_backward(&table, &stream).unwrap(), message);
    }

    #[test]
    fn validation_errors() {
        assert_eq!(Distribution::new(vec![]), Err(DesignError::Empty));
        assert_eq!(
            Distribution::from_probs(&[0.5, -0.5]),
            Err(DesignError::NonPositiveProbability { symbol: "s2".to_string() })
        );
        assert_eq!(
            Distribution::from_probs(&[0.5, 0.0]),
            Err(DesignError::NonPositiveProbability { symbol: "s2".to_string() })
        );
        assert!(matches!(
            Distribution::from_probs(&[0.5, 0.4]),
            Err(DesignError::SumOutOfTolerance { .. })
        ));
        assert!(matches!(
            Distribution::new(vec![("a a".to_string(), 1.0)]),
            Err(DesignError::BadSymbol { .. })
        ));
        assert!(matches!(
            Distribution::new(vec![("a".to_string(), 0.5), ("a".to_string(), 0.5)]),
            Err(DesignError::DuplicateSymbol { .. })
        ));
    }

    #[test]
    fn parse_distribution_file() {
        let d = Distribution::parse("# dist\na\t0.75\nb\t0.25\n").unwrap();
        assert_eq!(d.symbols(), &["a".to_string(), "b".to_string()]);
        assert!(Distribution::parse("a 0.5\n").is_err());
        assert!(Distribution::parse("a\tx\n").is_err());
    }

    #[test]
    fn cap_violation_names_symbol() {
        let d = Distribution::from_probs(&[0.5, 0.5]).unwrap();
        assert_eq!(
            design_lengths(&d, 1),
            Err(DesignError::LengthCapExceeded { symbol: "s1".to_string(), max_len: 1 })
        );
    }

    #[test]
    fn report_rendering() {
        let d = Distribution::from_probs(&[0.5, 0.5]).unwrap();
        let (_, report) = design_code(&d, 24).unwrap();
        let text = report.aligned_text();
        assert!(text.contains("kraft       1/2"));
        assert!(text.contains("redundancy  1.000000"));
        let kv = report.kv_text();
        assert!(kv.contains("kraft=1/2"));
        assert!(kv.contains("bound=1.6780719051126378"));
    }
}

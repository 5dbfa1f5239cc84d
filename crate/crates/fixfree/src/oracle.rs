use std::collections::HashSet;
use std::fmt;

use crate::code::Code;
use crate::frontier::FrontierState;
use crate::lengths::LengthVector;
use crate::word::{Word, MAX_WORD_LEN};

/// Limits for the exhaustive existence search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Cap on search-tree nodes before giving up.
    pub max_nodes: u64,
    /// Cap on the longest codeword length the search will consider.
    pub max_len: u8,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 1_000_000, max_len: 10 }
    }
}

/// Why a word set fails to be fix-free.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixFreeViolation {
    Duplicate { word: Word },
    PrefixOf { shorter: Word, longer: Word },
    SuffixOf { shorter: Word, longer: Word },
}

impl fmt::Display for FixFreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixFreeViolation::Duplicate { word } => write!(f, "word {} appears twice", word),
            FixFreeViolation::PrefixOf { shorter, longer } => {
                write!(f, "word {} is a prefix of word {}", shorter, longer)
            }
            FixFreeViolation::SuffixOf { shorter, longer } => {
                write!(f, "word {} is a suffix of word {}", shorter, longer)
            }
        }
    }
}

/// Checks the fix-free property: no word is a prefix or a suffix of another.
/// The witness is deterministic: words are scanned in (length, value) order,
/// shorter prefixes before suffixes.
pub fn verify_fixfree(code: &Code) -> Result<(), FixFreeViolation> {
    let words: Vec<Word> = code.iter().collect();
    verify_fixfree_words(&words)
}

/// Slice variant that also reports duplicates.
pub fn verify_fixfree_words(words: &[Word]) -> Result<(), FixFreeViolation> {
    let mut set: HashSet<Word> = HashSet::with_capacity(words.len());
    for &w in words {
        if !set.insert(w) {
            return Err(FixFreeViolation::Duplicate { word: w });
        }
    }
    let mut sorted = words.to_vec();
    sorted.sort_unstable();
    for &w in &sorted {
        for p in 1..w.len() {
            let prefix = w.prefix(p).expect("length in range");
            if set.contains(&prefix) {
                return Err(FixFreeViolation::PrefixOf { shorter: prefix, longer: w });
            }
            let suffix = w.suffix(p).expect("length in range");
            if set.contains(&suffix) {
                return Err(FixFreeViolation::SuffixOf { shorter: suffix, longer: w });
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A witness code with the requested per-length counts.
    Exists(Code),
    /// Complete search ruled every choice out.
    NotExists,
    /// Budget ran out before the search finished.
    Inconclusive { nodes_expanded: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    LengthCapExceeded { required: usize, max_len: u8 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::LengthCapExceeded { required, max_len } => write!(
                f,
                "length vector needs words of length {} but the search cap is {}",
                required, max_len
            ),
        }
    }
}

impl std::error::Error for OracleError {}

/// Exhaustive depth-first search for a fix-free code with the given counts.
///
/// Words are chosen at each length in increasing order (combinations, not
/// permutations), so no permuted branch is visited twice.  A branch is cut
/// early when the forced frontier sizes cannot cover the remaining demands.
/// Within budget, `NotExists` is a proof of non-existence.
pub fn exists_fixfree(v: &LengthVector, budget: SearchBudget) -> Result<SearchOutcome, OracleError> {
    if v.max_len() > budget.max_len as usize {
        return Err(OracleError::LengthCapExceeded {
            required: v.max_len(),
            max_len: budget.max_len,
        });
    }
    let mut search = Search { v, n: v.max_len(), max_nodes: budget.max_nodes, nodes: 0 };
    let root = FrontierState::with_max_len(budget.max_len.clamp(1, MAX_WORD_LEN));
    let mut picked = Vec::new();
    Ok(match search.descend(&root, 1, &mut picked) {
        Walk::Found => {
            let code = Code::from_words(picked).expect("search picks distinct words");
            SearchOutcome::Exists(code)
        }
        Walk::Exhausted => SearchOutcome::NotExists,
        Walk::Budget => SearchOutcome::Inconclusive { nodes_expanded: search.nodes },
    })
}

enum Walk {
    Found,
    Exhausted,
    Budget,
}

struct Search<'a> {
    v: &'a LengthVector,
    n: usize,
    max_nodes: u64,
    nodes: u64,
}

impl Search<'_> {
    fn descend(&mut self, frontier: &FrontierState, t: usize, picked: &mut Vec<Word>) -> Walk {
        if t > self.n {
            return Walk::Found;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Walk::Budget;
        }
        let k = self.v.count_at(t);
        let addable = frontier.addable();
        if (addable.len() as u64) < k || !self.counts_feasible(frontier, t) {
            return Walk::Exhausted;
        }
        let mut current = Vec::with_capacity(k as usize);
        self.choose(&addable, k as usize, 0, frontier, t, picked, &mut current)
    }

    /// Necessary condition on sizes alone: each step removes exactly one
    /// doubled slot per chosen word on both the prefix and the suffix side,
    /// and the next addable set is at most twice the smaller side.
    fn counts_feasible(&self, frontier: &FrontierState, t: usize) -> bool {
        let (mut pf, mut sf) = if frontier.length() == 0 {
            (1u64, 1u64)
        } else {
            (
                (frontier.pf0().len() + frontier.pf1().len()) as u64,
                (frontier.sf0().len() + frontier.sf1().len()) as u64,
            )
        };
        for j in t..=self.n {
            let k = self.v.count_at(j);
            let upper = 2 * pf.min(sf);
            if k > upper {
                return false;
            }
            pf = 2 * pf - k;
            sf = 2 * sf - k;
        }
        true
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &mut self,
        addable: &[Word],
        k: usize,
        start: usize,
        frontier: &FrontierState,
        t: usize,
        picked: &mut Vec<Word>,
        current: &mut Vec<Word>,
    ) -> Walk {
        if current.len() == k {
            let next = frontier.extend(current).expect("addable words extend cleanly");
            picked.extend_from_slice(current);
            let walk = self.descend(&next, t + 1, picked);
            if !matches!(walk, Walk::Found) {
                picked.truncate(picked.len() - k);
            }
            return walk;
        }
        let need = k - current.len();
        let mut i = start;
        while i + need <= addable.len() {
            current.push(addable[i]);
            match self.choose(addable, k, i + 1, frontier, t, picked, current) {
                Walk::Exhausted => {}
                walk => {
                    current.pop();
                    return walk;
                }
            }
            current.pop();
            i += 1;
        }
        Walk::Exhausted
    }
}

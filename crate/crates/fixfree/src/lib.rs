//! Binary fix-free codes: construction, source-driven design, and
//! bidirectional coding.
//!
//! A fix-free code is a variable-length code in which no codeword is a
//! prefix or a suffix of any other codeword, so a bitstream decodes from
//! either end.  This crate
//!
//! - builds a fix-free code for any per-length count vector whose Kraft sum
//!   is at most 5/8 (and for two seeded shapes up to 3/4), selecting
//!   concrete words deterministically ([`construct()`]);
//! - designs near-optimal fix-free codes for arbitrary source
//!   distributions, with redundancy strictly below `4 - log2(5)`
//!   ([`design_code`]);
//! - encodes symbol sequences and decodes bitstreams in both directions
//!   ([`codec`]);
//! - provides an independent verifier and an exhaustive existence search
//!   for small instances ([`oracle`]).
//!
//! All Kraft arithmetic is exact over dyadic rationals; floating point
//! appears only in entropy and redundancy reporting.
//!
//! ```
//! use fixfree::{construct, verify_fixfree, LengthVector};
//!
//! let v: LengthVector = "0 0 2 1 2 6 20".parse().unwrap();
//! let built = construct(&v).unwrap();
//! assert_eq!(built.code.len(), 31);
//! assert!(verify_fixfree(&built.code).is_ok());
//! ```

pub mod code;
pub mod codec;
pub mod construct;
pub mod design;
pub mod dyadic;
pub mod frontier;
pub mod lengths;
pub mod oracle;
pub mod word;

pub use code::Code;
pub use codec::{
    decode_backward, decode_forward, encode, BitStream, CodeTable, CodecError,
};
pub use construct::{
    construct, construct_with_max_len, decompose, dispatch, step_demand_bound, ConstructError,
    Construction, ConstructionCase, ConstructionTrace, Decomposition, StepRecord,
};
pub use design::{
    avg_length, design_code, design_lengths, entropy, redundancy_bound, DesignError,
    DesignReport, Distribution,
};
pub use dyadic::DyadicRational;
pub use frontier::{
    cross, cross_size_lower_bound, is_left_regular, is_right_regular, FrontierError,
    FrontierState,
};
pub use lengths::LengthVector;
pub use oracle::{
    exists_fixfree, verify_fixfree, verify_fixfree_words, FixFreeViolation, OracleError,
    SearchBudget, SearchOutcome,
};
pub use word::{Word, WordError, WordForm, DEFAULT_MAX_LEN, MAX_WORD_LEN};

//! Synthetic Bengali misspellings for Avro-phonetic typing on a QWERTY
//! keyboard.
//!
//! The crate segments words into letters and conjuncts ([`grapheme`]),
//! loads the replacement tables ([`tables`]) and ordered conjunct rules
//! ([`rules`]), and runs a seeded probabilistic pipeline over them
//! ([`generator`]). [`corpus`] turns raw text into word lists and parallel
//! correct/errored datasets.
//!
//! ```
//! use juktak::{generate, ErrorConfig, ErrorTables, RuleSet};
//!
//! let tables = ErrorTables::default();
//! let rules = RuleSet::default();
//! let cfg = ErrorConfig::with_probabilities(1.0, 0.0, 0.0, 0.0);
//! let out = generate("সহজ", &cfg, &tables, &rules, 42);
//! assert!(out.errored == "শহজ" || out.errored == "ষহজ");
//! ```

pub mod conformance;
pub mod corpus;
pub mod generator;
pub mod grapheme;
pub mod rules;
pub mod tables;

pub use corpus::{
    count_frequencies, emit_parallel, normalize, select_frequent, tokenize, CorpusError, DecodePolicy, EmitOptions,
    EmitSummary, FrequencyTable, OutputFormat, ParallelRecord,
};
pub use generator::{
    derive_word_seed, generate, reachable_set, replay, EditKind, EditRecord, ErrorConfig, GeneratedError,
};
pub use grapheme::{effective_length, segment, GraphemeUnit, SegmentedWord, UnitKind};
pub use rules::{apply_outcome, ConjunctContext, RuleOutcome, RuleSet};
pub use tables::{ErrorTables, TableError};

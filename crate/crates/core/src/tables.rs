//! The four data tables that drive error generation.
//!
//! Every table is a UTF-8 text file with one entry per line:
//!
//! ```text
//! # comment
//! key<TAB>value1,value2,...
//! ```
//!
//! Blank lines and lines starting with `#` are skipped. Keys and values are
//! NFC-normalized on load. An empty value list is only accepted in the
//! phonetic table, where it records that a letter has no substitute.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::grapheme::{segment, GraphemeUnit, UnitKind};

pub const CONJUNCT_FILE: &str = "juktakkhor.tsv";
pub const PHONETIC_FILE: &str = "phonetic.tsv";
pub const ADJACENCY_FILE: &str = "adjacency.tsv";
pub const INSERTION_FILE: &str = "insertion.tsv";

const DEFAULT_CONJUNCTS: &str = include_str!("../data/juktakkhor.tsv");
const DEFAULT_PHONETIC: &str = include_str!("../data/phonetic.tsv");
const DEFAULT_ADJACENCY: &str = include_str!("../data/adjacency.tsv");
const DEFAULT_INSERTION: &str = include_str!("../data/insertion.tsv");

#[derive(Debug, Error)]
pub enum TableError {
    #[error("{file}:{line}: {message}")]
    Parse { file: String, line: usize, message: String },
    #[error("{file}:{line}: {violation}")]
    Validation {
        file: String,
        line: usize,
        violation: Violation,
    },
    #[error("missing table file {}", .0.display())]
    MissingFile(PathBuf),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateKey(String),
    SelfReplacement(String),
    EmptyList(String),
    EmptyValue(String),
    DuplicateValue(String),
    NotAConjunct(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateKey(k) => write!(f, "duplicate key {k:?}"),
            Violation::SelfReplacement(k) => write!(f, "{k:?} lists itself as a replacement"),
            Violation::EmptyList(k) => write!(f, "{k:?} has an empty replacement list"),
            Violation::EmptyValue(k) => write!(f, "{k:?} has an empty item in its list"),
            Violation::DuplicateValue(v) => write!(f, "value {v:?} is listed twice"),
            Violation::NotAConjunct(v) => write!(f, "{v:?} is not a single conjunct"),
        }
    }
}

/// Splits a table file into `(line number, fields)` records, skipping
/// comments and blank lines. Line numbers are 1-based.
pub(crate) fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            None
        } else {
            Some((i + 1, line.split('\t').collect()))
        }
    })
}

pub(crate) fn nfc(s: &str) -> String {
    s.nfc().collect()
}

/// Which table a [`ReplacementTable`] is; decides the validation rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Phonetic,
    Adjacency,
    Insertion,
}

impl TableKind {
    pub fn file_name(self) -> &'static str {
        match self {
            TableKind::Phonetic => PHONETIC_FILE,
            TableKind::Adjacency => ADJACENCY_FILE,
            TableKind::Insertion => INSERTION_FILE,
        }
    }

    fn allows_empty_list(self) -> bool {
        self == TableKind::Phonetic
    }

    fn forbids_self(self) -> bool {
        self != TableKind::Insertion
    }
}

/// An ordered mapping from a letter to the strings it may turn into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplacementTable {
    kind: TableKind,
    entries: IndexMap<String, Vec<String>>,
}

impl ReplacementTable {
    pub fn parse(kind: TableKind, text: &str) -> Result<Self, TableError> {
        Self::parse_named(kind, kind.file_name(), text)
    }

    fn parse_named(kind: TableKind, file: &str, text: &str) -> Result<Self, TableError> {
        let mut entries = IndexMap::new();
        for (line, fields) in records(text) {
            let invalid = |violation| TableError::Validation {
                file: file.to_string(),
                line,
                violation,
            };
            if fields.len() > 2 {
                return Err(TableError::Parse {
                    file: file.to_string(),
                    line,
                    message: format!("expected key<TAB>values, found {} fields", fields.len()),
                });
            }
            let key = nfc(fields[0].trim());
            if key.is_empty() || key.chars().any(char::is_whitespace) {
                return Err(TableError::Parse {
                    file: file.to_string(),
                    line,
                    message: format!("malformed key {:?}", fields[0]),
                });
            }
            let raw = fields.get(1).map(|s| s.trim()).unwrap_or("");
            let values: Vec<String> = if raw.is_empty() {
                Vec::new()
            } else {
                raw.split(',').map(|v| nfc(v.trim())).collect()
            };

            if values.is_empty() && !kind.allows_empty_list() {
                return Err(invalid(Violation::EmptyList(key)));
            }
            let mut seen = IndexSet::new();
            for v in &values {
                if v.is_empty() {
                    return Err(invalid(Violation::EmptyValue(key)));
                }
                if kind.forbids_self() && *v == key {
                    return Err(invalid(Violation::SelfReplacement(key)));
                }
                if !seen.insert(v.as_str()) {
                    return Err(invalid(Violation::DuplicateValue(v.clone())));
                }
            }
            if entries.contains_key(&key) {
                return Err(invalid(Violation::DuplicateKey(key)));
            }
            entries.insert(key, values);
        }
        Ok(ReplacementTable { kind, entries })
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn get(&self, key: &str) -> &[String] {
        self.entries.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains_key(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push('\t');
            out.push_str(&v.join(","));
            out.push('\n');
        }
        out
    }
}

/// The set of known conjuncts, with example words where available.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConjunctInventory {
    entries: IndexMap<String, Vec<String>>,
}

impl ConjunctInventory {
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut entries = IndexMap::new();
        for (line, fields) in records(text) {
            let invalid = |violation| TableError::Validation {
                file: CONJUNCT_FILE.to_string(),
                line,
                violation,
            };
            if fields.len() > 2 {
                return Err(TableError::Parse {
                    file: CONJUNCT_FILE.to_string(),
                    line,
                    message: format!("expected conjunct<TAB>examples, found {} fields", fields.len()),
                });
            }
            let conjunct = nfc(fields[0].trim());
            let seg = segment(&conjunct);
            if seg.effective_length() != 1 || seg.units()[0].kind() != UnitKind::Conjunct || seg.is_irregular() {
                return Err(invalid(Violation::NotAConjunct(conjunct)));
            }
            let examples = fields
                .get(1)
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .map(|s| s.split(',').map(|w| nfc(w.trim())).collect())
                .unwrap_or_default();
            if entries.contains_key(&conjunct) {
                return Err(invalid(Violation::DuplicateKey(conjunct)));
            }
            entries.insert(conjunct, examples);
        }
        Ok(ConjunctInventory { entries })
    }

    pub fn contains(&self, conjunct: &str) -> bool {
        self.entries.contains_key(conjunct)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push('\t');
            out.push_str(&v.join(","));
            out.push('\n');
        }
        out
    }
}

/// All four tables. Immutable once loaded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorTables {
    pub conjuncts: ConjunctInventory,
    pub phonetic: ReplacementTable,
    pub adjacency: ReplacementTable,
    pub insertion: ReplacementTable,
}

impl Default for ErrorTables {
    /// The tables shipped with the crate.
    fn default() -> Self {
        ErrorTables::parse(
            DEFAULT_CONJUNCTS,
            DEFAULT_PHONETIC,
            DEFAULT_ADJACENCY,
            DEFAULT_INSERTION,
        )
        .expect("bundled tables are valid")
    }
}

impl ErrorTables {
    pub fn parse(conjuncts: &str, phonetic: &str, adjacency: &str, insertion: &str) -> Result<Self, TableError> {
        Ok(ErrorTables {
            conjuncts: ConjunctInventory::parse(conjuncts)?,
            phonetic: ReplacementTable::parse(TableKind::Phonetic, phonetic)?,
            adjacency: ReplacementTable::parse(TableKind::Adjacency, adjacency)?,
            insertion: ReplacementTable::parse(TableKind::Insertion, insertion)?,
        })
    }

    /// Loads the four table files from `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self, TableError> {
        let conjuncts = read_table_file(dir, CONJUNCT_FILE)?;
        let phonetic = read_table_file(dir, PHONETIC_FILE)?;
        let adjacency = read_table_file(dir, ADJACENCY_FILE)?;
        let insertion = read_table_file(dir, INSERTION_FILE)?;
        Self::parse(&conjuncts, &phonetic, &adjacency, &insertion)
    }

    pub fn write_dir(&self, dir: &Path) -> Result<(), TableError> {
        let files = [
            (CONJUNCT_FILE, self.conjuncts.to_tsv()),
            (PHONETIC_FILE, self.phonetic.to_tsv()),
            (ADJACENCY_FILE, self.adjacency.to_tsv()),
            (INSERTION_FILE, self.insertion.to_tsv()),
        ];
        for (name, body) in files {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|source| TableError::Io { path, source })?;
        }
        Ok(())
    }

    /// Phonetic substitutes for a simple unit; empty for conjuncts and
    /// letters without an entry.
    pub fn phonetic_candidates(&self, unit: &GraphemeUnit) -> &[String] {
        simple_lookup(&self.phonetic, unit)
    }

    pub fn adjacency_candidates(&self, unit: &GraphemeUnit) -> &[String] {
        simple_lookup(&self.adjacency, unit)
    }

    /// Letters that may be typed by accident right after `unit`.
    pub fn insertion_candidates(&self, unit: &GraphemeUnit) -> &[String] {
        simple_lookup(&self.insertion, unit)
    }

    /// Phonetic substitutes of a bare letter (used inside conjunct rules).
    pub fn phonetic_of(&self, letter: &str) -> &[String] {
        self.phonetic.get(letter)
    }
}

fn simple_lookup<'t>(table: &'t ReplacementTable, unit: &GraphemeUnit) -> &'t [String] {
    if unit.kind() != UnitKind::Simple {
        return &[];
    }
    table.get(unit.text())
}

pub(crate) fn read_table_file(dir: &Path, name: &str) -> Result<String, TableError> {
    let path = dir.join(name);
    match fs::read_to_string(&path) {
        Ok(s) => Ok(s),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Err(TableError::MissingFile(path)),
        Err(source) => Err(TableError::Io { path, source }),
    }
}

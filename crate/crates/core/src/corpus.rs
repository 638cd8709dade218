//! Corpus front-end: word counting, frequent-word selection and parallel
//! dataset emission.

use std::collections::{BTreeMap, HashMap};
use std::io::{self, BufRead, BufReader, Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::generator::{derive_word_seed, generate, ConfigError, EditKind, EditRecord, ErrorConfig, GeneratedError};
use crate::grapheme::is_bengali;
use crate::rules::RuleSet;
use crate::tables::ErrorTables;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("invalid UTF-8 at byte offset {offset}")]
    Decode { offset: u64 },
    #[error("frequency table line {line}: {message}")]
    FrequencyFormat { line: usize, message: String },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("variants per word must be at least 1")]
    NoVariants,
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// What to do with bytes that are not valid UTF-8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecodePolicy {
    /// Stop with [`CorpusError::Decode`].
    Strict,
    /// Substitute U+FFFD and note the offset.
    #[default]
    Replace,
}

/// Word counts over a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: HashMap<String, u64>,
    total_tokens: u64,
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, word: &str, count: u64) {
        if count == 0 {
            return;
        }
        *self.counts.entry(word.to_string()).or_insert(0) += count;
        self.total_tokens += count;
    }

    /// Folds another table into this one.
    pub fn merge(&mut self, other: FrequencyTable) {
        for (w, c) in other.counts {
            *self.counts.entry(w).or_insert(0) += c;
        }
        self.total_tokens += other.total_tokens;
    }

    pub fn get(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// Entries by descending count, ties in codepoint order.
    pub fn sorted(&self) -> Vec<(&str, u64)> {
        let mut v: Vec<(&str, u64)> = self.counts.iter().map(|(w, c)| (w.as_str(), *c)).collect();
        v.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        v
    }

    /// Writes `word<TAB>count` lines in [`Self::sorted`] order.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (w, c) in self.sorted() {
            writeln!(out, "{w}\t{c}")?;
        }
        out.flush()
    }

    pub fn read_tsv<R: BufRead>(input: R) -> Result<Self, CorpusError> {
        let mut table = FrequencyTable::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |message: &str| CorpusError::FrequencyFormat {
                line: i + 1,
                message: message.to_string(),
            };
            let (word, count) = line.split_once('\t').ok_or_else(|| bad("expected word<TAB>count"))?;
            let count: u64 = count.trim().parse().map_err(|_| bad("count is not an integer"))?;
            if count == 0 {
                return Err(bad("count must be positive"));
            }
            if table.counts.contains_key(word) {
                return Err(bad("duplicate word"));
            }
            table.add(word, count);
        }
        Ok(table)
    }
}

fn is_edge_punct(c: char) -> bool {
    matches!(c, '\u{0964}' | '\u{0965}' | '\u{09F7}') || (!is_bengali(c) && !c.is_alphanumeric())
}

/// NFC form of `s`.
pub fn normalize(s: &str) -> String {
    s.nfc().collect()
}

/// Whitespace tokens with edge punctuation removed, NFC-normalized, keeping
/// only those that contain Bengali script.
pub fn tokenize(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split_whitespace().filter_map(|raw| {
        let token = raw.trim_matches(is_edge_punct);
        if token.is_empty() || !token.chars().any(is_bengali) {
            None
        } else {
            Some(normalize(token))
        }
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyReport {
    pub table: FrequencyTable,
    /// Byte offsets of invalid UTF-8 sequences that were replaced.
    pub decode_errors: Vec<u64>,
}

/// Counts Bengali word tokens in a UTF-8 stream.
pub fn count_frequencies<R: Read>(input: R, policy: DecodePolicy) -> Result<FrequencyReport, CorpusError> {
    let mut reader = BufReader::new(input);
    let mut report = FrequencyReport::default();
    let mut buf = Vec::new();
    let mut offset: u64 = 0;
    loop {
        buf.clear();
        let n = reader.read_until(b'\n', &mut buf)?;
        if n == 0 {
            break;
        }
        let line = match std::str::from_utf8(&buf) {
            Ok(s) => std::borrow::Cow::Borrowed(s),
            Err(e) => {
                if policy == DecodePolicy::Strict {
                    return Err(CorpusError::Decode {
                        offset: offset + e.valid_up_to() as u64,
                    });
                }
                let mut pos = 0usize;
                for chunk in buf.utf8_chunks() {
                    pos += chunk.valid().len();
                    if !chunk.invalid().is_empty() {
                        report.decode_errors.push(offset + pos as u64);
                        pos += chunk.invalid().len();
                    }
                }
                String::from_utf8_lossy(&buf)
            }
        };
        for token in tokenize(&line) {
            report.table.add(&token, 1);
        }
        offset += n as u64;
    }
    Ok(report)
}

/// Words seen strictly more than `threshold` times, most frequent first.
pub fn select_frequent(table: &FrequencyTable, threshold: u64) -> Vec<String> {
    table
        .sorted()
        .into_iter()
        .filter(|(_, c)| *c > threshold)
        .map(|(w, _)| w.to_string())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Jsonl,
    /// `original<TAB>errored`; drops the edit trace.
    Tsv,
}

/// One line of an emitted dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelRecord {
    pub original: String,
    pub errored: String,
    pub edits: Vec<EditRecord>,
    pub word_seed: u64,
}

impl ParallelRecord {
    pub fn from_generated(g: GeneratedError, word_seed: u64) -> Self {
        ParallelRecord {
            original: g.original,
            errored: g.errored,
            edits: g.edits,
            word_seed,
        }
    }

    pub fn write<W: Write>(&self, format: OutputFormat, out: &mut W) -> Result<(), CorpusError> {
        match format {
            OutputFormat::Jsonl => {
                serde_json::to_writer(&mut *out, self)?;
                out.write_all(b"\n")?;
            }
            OutputFormat::Tsv => writeln!(out, "{}\t{}", self.original, self.errored)?,
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EmitSummary {
    pub words: usize,
    pub records: usize,
    pub unchanged: usize,
    pub edits: BTreeMap<EditKind, usize>,
}

impl EmitSummary {
    fn absorb(&mut self, g: &GeneratedError) {
        self.records += 1;
        if g.edits.is_empty() {
            self.unchanged += 1;
        }
        for e in &g.edits {
            *self.edits.entry(e.kind).or_insert(0) += 1;
        }
    }

    fn merge(&mut self, other: EmitSummary) {
        self.records += other.records;
        self.unchanged += other.unchanged;
        for (k, v) in other.edits {
            *self.edits.entry(k).or_insert(0) += v;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmitOptions {
    pub variants_per_word: usize,
    pub format: OutputFormat,
    pub workers: usize,
}

impl Default for EmitOptions {
    fn default() -> Self {
        EmitOptions {
            variants_per_word: 2,
            format: OutputFormat::Jsonl,
            workers: 1,
        }
    }
}

const CHUNK_WORDS: usize = 4096;

/// Generates `variants_per_word` errored variants of every word and writes
/// them in word order. Record `(i, v)` uses the seed derived from
/// `i * variants_per_word + v`, so the bytes written do not depend on the
/// number of workers.
pub fn emit_parallel<W: Write>(
    words: &[String],
    cfg: &ErrorConfig,
    tables: &ErrorTables,
    rules: &RuleSet,
    opts: EmitOptions,
    sink: &mut W,
) -> Result<EmitSummary, CorpusError> {
    cfg.validate()?;
    if opts.variants_per_word == 0 {
        return Err(CorpusError::NoVariants);
    }
    if opts.workers == 0 {
        return Err(CorpusError::NoWorkers);
    }

    let render = |base: usize, chunk: &[String]| -> Result<(Vec<u8>, EmitSummary), CorpusError> {
        let mut buf = Vec::with_capacity(chunk.len() * opts.variants_per_word * 96);
        let mut summary = EmitSummary::default();
        for (offset, word) in chunk.iter().enumerate() {
            let i = (base + offset) as u64;
            for v in 0..opts.variants_per_word as u64 {
                let seed = derive_word_seed(cfg.seed, i * opts.variants_per_word as u64 + v);
                let g = generate(word, cfg, tables, rules, seed);
                summary.absorb(&g);
                ParallelRecord::from_generated(g, seed).write(opts.format, &mut buf)?;
            }
        }
        Ok((buf, summary))
    };

    let mut summary = EmitSummary {
        words: words.len(),
        ..EmitSummary::default()
    };
    if opts.workers == 1 {
        for (k, chunk) in words.chunks(CHUNK_WORDS).enumerate() {
            let (buf, s) = render(k * CHUNK_WORDS, chunk)?;
            sink.write_all(&buf)?;
            summary.merge(s);
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| io::Error::other(e.to_string()))?;
        // Process a window of chunks at a time and flush it in order.
        let window = CHUNK_WORDS * opts.workers * 2;
        for (w, block) in words.chunks(window).enumerate() {
            let rendered: Vec<Result<(Vec<u8>, EmitSummary), CorpusError>> = pool.install(|| {
                block
                    .par_chunks(CHUNK_WORDS)
                    .enumerate()
                    .map(|(k, chunk)| render(w * window + k * CHUNK_WORDS, chunk))
                    .collect()
            });
            for r in rendered {
                let (buf, s) = r?;
                sink.write_all(&buf)?;
                summary.merge(s);
            }
        }
    }
    sink.flush()?;
    Ok(summary)
}

//! The per-word error pipeline.
//!
//! A word is segmented once and then passed through four stages in fixed
//! order:
//!
//! 1. conjunct rules: one `jp` draw per rule site;
//! 2. phonetic replacement: one `pp` draw per unedited simple unit;
//! 3. adjacency replacement: one `mp` draw per word (per allowed edit),
//!    then a uniform pick of site and replacement;
//! 4. adjacency insertion: one `ip` draw per word (per allowed edit), then a
//!    uniform pick of trigger and inserted letter.
//!
//! Stages 3 and 4 only run on words of at least `min_len_for_mp_ip` units.
//! A unit is edited at most once. Every edit is recorded against the
//! original segmentation so the trace can be replayed.
//!
//! # Randomness
//!
//! Each word gets its own `Xoshiro256PlusPlus` stream seeded through
//! SplitMix64 (the reference seeding procedure). Draws are defined on raw
//! 64-bit outputs so they can be reproduced outside Rust:
//!
//! * Bernoulli(p): `(x >> 11) * 2^-53 < p`
//! * uniform index in `0..n`: `(x * n) >> 64` in 128-bit arithmetic

use std::collections::BTreeSet;
use std::fmt;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256PlusPlus};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grapheme::{segment, SegmentedWord, UnitKind};
use crate::rules::RuleSet;
use crate::tables::ErrorTables;

/// Probabilities and limits for the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorConfig {
    /// Phonetic replacement, per simple unit.
    pub pp: f64,
    /// Adjacency replacement, per word.
    pub mp: f64,
    /// Conjunct rewrite, per rule site.
    pub jp: f64,
    /// Adjacency insertion, per word.
    pub ip: f64,
    pub seed: u64,
    pub min_len_for_mp_ip: usize,
    pub max_mp_per_word: usize,
    pub max_ip_per_word: usize,
}

impl Default for ErrorConfig {
    fn default() -> Self {
        ErrorConfig {
            pp: 0.25,
            mp: 0.2,
            jp: 0.3,
            ip: 0.2,
            seed: 0,
            min_len_for_mp_ip: 4,
            max_mp_per_word: 1,
            max_ip_per_word: 1,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{name} must be within [0, 1], got {value}")]
    Probability { name: &'static str, value: f64 },
    #[error("min_len_for_mp_ip must be at least 1")]
    MinLength,
}

impl ErrorConfig {
    /// All four probabilities set to zero.
    pub fn zero() -> Self {
        ErrorConfig {
            pp: 0.0,
            mp: 0.0,
            jp: 0.0,
            ip: 0.0,
            ..ErrorConfig::default()
        }
    }

    pub fn with_probabilities(pp: f64, mp: f64, jp: f64, ip: f64) -> Self {
        ErrorConfig {
            pp,
            mp,
            jp,
            ip,
            ..ErrorConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, value) in [("pp", self.pp), ("mp", self.mp), ("jp", self.jp), ("ip", self.ip)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(ConfigError::Probability { name, value });
            }
        }
        if self.min_len_for_mp_ip < 1 {
            return Err(ConfigError::MinLength);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EditKind {
    Phonetic,
    Adjacency,
    Insertion,
    ConjunctRule,
}

impl EditKind {
    pub const ALL: [EditKind; 4] = [
        EditKind::ConjunctRule,
        EditKind::Phonetic,
        EditKind::Adjacency,
        EditKind::Insertion,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EditKind::Phonetic => "phonetic",
            EditKind::Adjacency => "adjacency",
            EditKind::Insertion => "insertion",
            EditKind::ConjunctRule => "conjunct_rule",
        }
    }
}

impl fmt::Display for EditKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One applied error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditRecord {
    pub kind: EditKind,
    /// Index into the segmentation of the original word.
    pub unit_index: usize,
    /// Replaced text; empty for insertions.
    pub before: String,
    pub after: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_id: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedError {
    pub original: String,
    pub errored: String,
    /// Sorted by unit index.
    pub edits: Vec<EditRecord>,
}

impl GeneratedError {
    pub fn count(&self, kind: EditKind) -> usize {
        self.edits.iter().filter(|e| e.kind == kind).count()
    }
}

/// Seed for word `word_index` of a run seeded with `global_seed`.
///
/// The index is spread by the golden-ratio constant, XOR-ed into the global
/// seed and passed through the SplitMix64 output function. For a fixed
/// global seed the map is a bijection on indices, so no two words collide.
pub fn derive_word_seed(global_seed: u64, word_index: u64) -> u64 {
    const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
    // SplitMix64 adds the gamma before mixing; subtract it so the mixer
    // sees exactly `global_seed ^ (word_index * gamma)`.
    let state = (global_seed ^ word_index.wrapping_mul(GOLDEN_GAMMA)).wrapping_sub(GOLDEN_GAMMA);
    SplitMix64::seed_from_u64(state).next_u64()
}

/// The random stream for one word.
struct Draws(Xoshiro256PlusPlus);

impl Draws {
    fn new(seed: u64) -> Self {
        Draws(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    fn bernoulli(&mut self, p: f64) -> bool {
        let u = (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        u < p
    }

    fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.0.next_u64() as u128 * n as u128) >> 64) as usize
    }
}

/// Runs the pipeline on `word` with its own seed.
pub fn generate(
    word: &str,
    cfg: &ErrorConfig,
    tables: &ErrorTables,
    rules: &RuleSet,
    word_seed: u64,
) -> GeneratedError {
    let seg = segment(word);
    let n = seg.effective_length();
    let mut draws = Draws::new(word_seed);
    let mut plan = Plan::new(&seg);

    for site in rules.sites(&seg) {
        if !draws.bernoulli(cfg.jp) || plan.span_edited(site..site + 1) {
            continue;
        }
        if let Some(outcome) = rules.match_at(&seg, site, tables) {
            if plan.span_edited(outcome.span.clone()) {
                continue;
            }
            let k = draws.index(outcome.candidates.len());
            plan.replace(
                outcome.span,
                outcome.candidates[k].clone(),
                EditKind::ConjunctRule,
                Some(outcome.rule_id),
            );
        }
    }

    for i in 0..n {
        let unit = &seg.units()[i];
        if unit.kind() != UnitKind::Simple || plan.edited[i] {
            continue;
        }
        if !draws.bernoulli(cfg.pp) {
            continue;
        }
        let candidates = tables.phonetic_candidates(unit);
        if !candidates.is_empty() {
            let k = draws.index(candidates.len());
            plan.replace(i..i + 1, candidates[k].clone(), EditKind::Phonetic, None);
        }
    }

    if n >= cfg.min_len_for_mp_ip {
        for _ in 0..cfg.max_mp_per_word {
            if !draws.bernoulli(cfg.mp) {
                break;
            }
            let sites: Vec<usize> = (0..n)
                .filter(|&i| !plan.edited[i] && !tables.adjacency_candidates(&seg.units()[i]).is_empty())
                .collect();
            if sites.is_empty() {
                break;
            }
            let site = sites[draws.index(sites.len())];
            let candidates = tables.adjacency_candidates(&seg.units()[site]);
            let k = draws.index(candidates.len());
            plan.replace(site..site + 1, candidates[k].clone(), EditKind::Adjacency, None);
        }

        for _ in 0..cfg.max_ip_per_word {
            if !draws.bernoulli(cfg.ip) {
                break;
            }
            let triggers: Vec<usize> = (0..n)
                .filter(|&i| {
                    !plan.edited[i]
                        && plan.inserted[i].is_none()
                        && !tables.insertion_candidates(&seg.units()[i]).is_empty()
                })
                .collect();
            if triggers.is_empty() {
                break;
            }
            let trigger = triggers[draws.index(triggers.len())];
            let letters = tables.insertion_candidates(&seg.units()[trigger]);
            let k = draws.index(letters.len());
            plan.insert_after(trigger, letters[k].clone());
        }
    }

    plan.finish(&seg)
}

/// Edits chosen so far for one word.
struct Plan {
    edited: Vec<bool>,
    /// Replacement text keyed by the first unit of its span, with span length.
    replaced: Vec<Option<(usize, String)>>,
    inserted: Vec<Option<String>>,
    edits: Vec<EditRecord>,
    texts: Vec<String>,
}

impl Plan {
    fn new(seg: &SegmentedWord) -> Self {
        let n = seg.effective_length();
        Plan {
            edited: vec![false; n],
            replaced: vec![None; n],
            inserted: vec![None; n],
            edits: Vec::new(),
            texts: seg.units().iter().map(|u| u.text().to_string()).collect(),
        }
    }

    fn span_edited(&self, span: std::ops::Range<usize>) -> bool {
        self.edited[span].iter().any(|e| *e)
    }

    fn replace(&mut self, span: std::ops::Range<usize>, after: String, kind: EditKind, rule_id: Option<u8>) {
        let before: String = self.texts[span.clone()].concat();
        for i in span.clone() {
            self.edited[i] = true;
        }
        self.replaced[span.start] = Some((span.len(), after.clone()));
        self.edits.push(EditRecord {
            kind,
            unit_index: span.start,
            before,
            after,
            rule_id,
        });
    }

    fn insert_after(&mut self, index: usize, letter: String) {
        self.inserted[index] = Some(letter.clone());
        self.edits.push(EditRecord {
            kind: EditKind::Insertion,
            unit_index: index,
            before: String::new(),
            after: letter,
            rule_id: None,
        });
    }

    fn finish(mut self, seg: &SegmentedWord) -> GeneratedError {
        let mut errored = String::with_capacity(seg.source().len() + 16);
        let mut i = 0;
        while i < self.texts.len() {
            let mut last = i;
            match &self.replaced[i] {
                Some((len, after)) => {
                    errored.push_str(after);
                    last = i + len - 1;
                }
                None => errored.push_str(&self.texts[i]),
            }
            if let Some(letter) = &self.inserted[last] {
                errored.push_str(letter);
            }
            i = last + 1;
        }
        self.edits
            .sort_by_key(|e| (e.unit_index, e.kind == EditKind::Insertion));
        GeneratedError {
            original: seg.source().to_string(),
            errored,
            edits: self.edits,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("edit at unit {index} is out of range")]
    OutOfRange { index: usize },
    #[error("edit at unit {index} expects {expected:?} but the word has {found:?}")]
    Mismatch {
        index: usize,
        expected: String,
        found: String,
    },
    #[error("edits are not in left-to-right order at unit {index}")]
    Order { index: usize },
}

/// Applies an edit trace to the original word.
pub fn replay(original: &str, edits: &[EditRecord]) -> Result<String, ReplayError> {
    let seg = segment(original);
    let units = seg.units();
    let mut out = String::with_capacity(original.len() + 16);
    let mut cursor = 0;
    let mut pending = edits.iter().peekable();

    while cursor < units.len() {
        let mut last = cursor;
        let mut wrote = false;
        while let Some(edit) = pending.peek() {
            if edit.unit_index < cursor {
                return Err(ReplayError::Order { index: edit.unit_index });
            }
            if edit.unit_index > last {
                break;
            }
            let edit = pending.next().expect("peeked");
            if edit.kind == EditKind::Insertion {
                if !wrote {
                    out.push_str(units[cursor].text());
                    wrote = true;
                }
                out.push_str(&edit.after);
                continue;
            }
            if wrote {
                return Err(ReplayError::Order { index: edit.unit_index });
            }
            let mut found = String::new();
            let mut end = cursor;
            while end < units.len() && found.len() < edit.before.len() {
                found.push_str(units[end].text());
                end += 1;
            }
            if found != edit.before {
                return Err(ReplayError::Mismatch {
                    index: edit.unit_index,
                    expected: edit.before.clone(),
                    found,
                });
            }
            out.push_str(&edit.after);
            wrote = true;
            last = end - 1;
        }
        if !wrote {
            out.push_str(units[cursor].text());
        }
        cursor = last + 1;
    }

    match pending.next() {
        Some(edit) => Err(ReplayError::OutOfRange { index: edit.unit_index }),
        None => Ok(out),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("enumeration exceeded {limit} outcomes")]
pub struct CapacityError {
    pub limit: usize,
}

pub const DEFAULT_ENUMERATION_LIMIT: usize = 1_000_000;

/// Every string [`generate`] can produce for `word` under any sequence of
/// draws. A class with probability 0 never fires and one with probability 1
/// never skips.
pub fn reachable_set(
    word: &str,
    cfg: &ErrorConfig,
    tables: &ErrorTables,
    rules: &RuleSet,
) -> Result<BTreeSet<String>, CapacityError> {
    reachable_set_bounded(word, cfg, tables, rules, DEFAULT_ENUMERATION_LIMIT)
}

pub fn reachable_set_bounded(
    word: &str,
    cfg: &ErrorConfig,
    tables: &ErrorTables,
    rules: &RuleSet,
    limit: usize,
) -> Result<BTreeSet<String>, CapacityError> {
    let seg = segment(word);
    let mut walk = Walk {
        seg: &seg,
        cfg,
        tables,
        rules,
        sites: rules.sites(&seg),
        limit,
        leaves: 0,
        out: BTreeSet::new(),
    };
    let state = WalkState {
        slot: seg
            .units()
            .iter()
            .map(|u| Slot::Original(u.text().to_string()))
            .collect(),
        inserted: vec![None; seg.effective_length()],
    };
    walk.conjuncts(0, state)?;
    Ok(walk.out)
}

#[derive(Debug, Clone)]
enum Slot {
    Original(String),
    Replaced(String),
    /// Covered by a replacement that starts at an earlier unit.
    Absorbed,
}

#[derive(Debug, Clone)]
struct WalkState {
    slot: Vec<Slot>,
    inserted: Vec<Option<String>>,
}

impl WalkState {
    fn untouched(&self, i: usize) -> bool {
        matches!(self.slot[i], Slot::Original(_))
    }

    fn render(&self) -> String {
        let mut s = String::new();
        for (slot, ins) in self.slot.iter().zip(&self.inserted) {
            match slot {
                Slot::Original(t) | Slot::Replaced(t) => s.push_str(t),
                Slot::Absorbed => {}
            }
            if let Some(letter) = ins {
                s.push_str(letter);
            }
        }
        s
    }
}

/// Depth-first walk over every branch of the pipeline.
struct Walk<'a> {
    seg: &'a SegmentedWord,
    cfg: &'a ErrorConfig,
    tables: &'a ErrorTables,
    rules: &'a RuleSet,
    sites: Vec<usize>,
    limit: usize,
    leaves: usize,
    out: BTreeSet<String>,
}

impl Walk<'_> {
    fn branches(p: f64) -> (bool, bool) {
        (p < 1.0, p > 0.0)
    }

    fn conjuncts(&mut self, k: usize, state: WalkState) -> Result<(), CapacityError> {
        if k == self.sites.len() {
            return self.phonetic(0, state);
        }
        let site = self.sites[k];
        let outcome = if state.untouched(site) {
            self.rules.match_at(self.seg, site, self.tables)
        } else {
            None
        };
        let (can_skip, can_fire) = Self::branches(self.cfg.jp);
        match outcome {
            Some(o) if can_fire && o.span.clone().all(|i| state.untouched(i)) => {
                if can_skip {
                    self.conjuncts(k + 1, state.clone())?;
                }
                for c in &o.candidates {
                    let mut next = state.clone();
                    next.slot[o.span.start] = Slot::Replaced(c.clone());
                    for i in o.span.clone().skip(1) {
                        next.slot[i] = Slot::Absorbed;
                    }
                    self.conjuncts(k + 1, next)?;
                }
                Ok(())
            }
            _ => self.conjuncts(k + 1, state),
        }
    }

    fn phonetic(&mut self, i: usize, state: WalkState) -> Result<(), CapacityError> {
        if i == self.seg.effective_length() {
            return self.adjacency(self.cfg.max_mp_per_word, state);
        }
        let unit = &self.seg.units()[i];
        let candidates = if unit.kind() == UnitKind::Simple && state.untouched(i) {
            self.tables.phonetic_candidates(unit)
        } else {
            &[]
        };
        let (can_skip, can_fire) = Self::branches(self.cfg.pp);
        if candidates.is_empty() || !can_fire {
            return self.phonetic(i + 1, state);
        }
        if can_skip {
            self.phonetic(i + 1, state.clone())?;
        }
        for c in candidates {
            let mut next = state.clone();
            next.slot[i] = Slot::Replaced(c.clone());
            self.phonetic(i + 1, next)?;
        }
        Ok(())
    }

    fn eligible(&self) -> bool {
        self.seg.effective_length() >= self.cfg.min_len_for_mp_ip
    }

    fn adjacency(&mut self, remaining: usize, state: WalkState) -> Result<(), CapacityError> {
        let (can_skip, can_fire) = Self::branches(self.cfg.mp);
        let sites: Vec<usize> = (0..self.seg.effective_length())
            .filter(|&i| state.untouched(i) && !self.tables.adjacency_candidates(&self.seg.units()[i]).is_empty())
            .collect();
        if !self.eligible() || remaining == 0 || !can_fire || sites.is_empty() {
            return self.insertion(self.cfg.max_ip_per_word, state);
        }
        if can_skip {
            self.insertion(self.cfg.max_ip_per_word, state.clone())?;
        }
        for site in sites {
            for c in self.tables.adjacency_candidates(&self.seg.units()[site]) {
                let mut next = state.clone();
                next.slot[site] = Slot::Replaced(c.clone());
                self.adjacency(remaining - 1, next)?;
            }
        }
        Ok(())
    }

    fn insertion(&mut self, remaining: usize, state: WalkState) -> Result<(), CapacityError> {
        let (can_skip, can_fire) = Self::branches(self.cfg.ip);
        let triggers: Vec<usize> = (0..self.seg.effective_length())
            .filter(|&i| {
                state.untouched(i)
                    && state.inserted[i].is_none()
                    && !self.tables.insertion_candidates(&self.seg.units()[i]).is_empty()
            })
            .collect();
        if !self.eligible() || remaining == 0 || !can_fire || triggers.is_empty() {
            return self.leaf(state);
        }
        if can_skip {
            self.leaf(state.clone())?;
        }
        for t in triggers {
            for letter in self.tables.insertion_candidates(&self.seg.units()[t]) {
                let mut next = state.clone();
                next.inserted[t] = Some(letter.clone());
                self.insertion(remaining - 1, next)?;
            }
        }
        Ok(())
    }

    fn leaf(&mut self, state: WalkState) -> Result<(), CapacityError> {
        self.leaves += 1;
        if self.leaves > self.limit {
            return Err(CapacityError { limit: self.limit });
        }
        self.out.insert(state.render());
        Ok(())
    }
}

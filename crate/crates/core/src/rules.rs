//! Ordered conjunct rewrite rules.
//!
//! Rules are data (see `data/rules.tsv`). Each row is a clause: a rule id,
//! a matcher kind with parameters, and rewrite templates. Clauses are tried
//! in file order and the first one that yields at least one candidate decides
//! the outcome. A clause that matches structurally but produces no candidate
//! that differs from the original does not count as a match.

use std::fmt;
use std::ops::Range;
use std::path::Path;

use thiserror::Error;

use crate::grapheme::{is_consonant, segment, GraphemeUnit, SegmentedWord, UnitKind, HASANTA};
use crate::tables::{nfc, read_table_file, records, ErrorTables, TableError};

pub const RULES_FILE: &str = "rules.tsv";

const DEFAULT_RULES: &str = include_str!("../data/rules.tsv");

/// Where in the word a literal clause may apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    Any,
    Start,
    Inner,
}

impl Position {
    fn admits(self, index: usize) -> bool {
        match self {
            Position::Any => true,
            Position::Start => index == 0,
            Position::Inner => index > 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Template {
    Literal(String),
    /// The letter together with each of its phonetic substitutes.
    WithPhonetic(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Matcher {
    Literal {
        pattern: String,
        at: Position,
    },
    YaPhala,
    BaPhala,
    Class {
        has: Vec<String>,
        first: Option<String>,
        keep: Vec<String>,
        swap: Vec<(String, String)>,
    },
    Geminate,
    FollowedBy {
        has: String,
        next: String,
        bare: bool,
    },
}

impl Matcher {
    fn kind_name(&self) -> &'static str {
        match self {
            Matcher::Literal { .. } => "literal",
            Matcher::YaPhala => "ya-phala",
            Matcher::BaPhala => "ba-phala",
            Matcher::Class { .. } => "class",
            Matcher::Geminate => "geminate",
            Matcher::FollowedBy { .. } => "followed-by",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Clause {
    id: u8,
    matcher: Matcher,
    templates: Vec<Template>,
}

/// The surroundings of one rule site in a word.
#[derive(Debug, Clone, Copy)]
pub struct ConjunctContext<'w> {
    pub word: &'w SegmentedWord,
    pub index: usize,
    pub at_word_start: bool,
    pub prev_unit: Option<&'w GraphemeUnit>,
    pub next_unit: Option<&'w GraphemeUnit>,
}

impl<'w> ConjunctContext<'w> {
    /// Returns `None` when `index` is out of range.
    pub fn new(word: &'w SegmentedWord, index: usize) -> Option<Self> {
        word.unit(index)?;
        Some(ConjunctContext {
            word,
            index,
            at_word_start: index == 0,
            prev_unit: index.checked_sub(1).and_then(|i| word.unit(i)),
            next_unit: word.unit(index + 1),
        })
    }

    pub fn unit(&self) -> &'w GraphemeUnit {
        &self.word.units()[self.index]
    }
}

/// The result of the first applicable rule at a site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleOutcome {
    pub rule_id: u8,
    /// Replacement strings for the units in `span`; never empty.
    pub candidates: Vec<String>,
    pub span: Range<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("choice {choice} out of range for {len} candidates")]
pub struct ChoiceOutOfRange {
    pub choice: usize,
    pub len: usize,
}

/// An ordered list of rewrite clauses. Immutable once loaded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    clauses: Vec<Clause>,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::parse(DEFAULT_RULES).expect("bundled rules are valid")
    }
}

impl RuleSet {
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut clauses: Vec<Clause> = Vec::new();
        for (line, fields) in records(text) {
            let err = |message: String| TableError::Parse {
                file: RULES_FILE.to_string(),
                line,
                message,
            };
            if fields.len() != 4 {
                return Err(err(format!("expected 4 fields, found {}", fields.len())));
            }
            let id: u8 = fields[0]
                .trim()
                .parse()
                .ok()
                .filter(|id| *id >= 1)
                .ok_or_else(|| err(format!("bad rule id {:?}", fields[0])))?;
            if let Some(last) = clauses.last() {
                if id < last.id {
                    return Err(err(format!("rule {id} appears after rule {}", last.id)));
                }
            }
            let params = Params::parse(fields[2]).map_err(&err)?;
            let matcher = build_matcher(fields[1].trim(), &params).map_err(&err)?;
            let templates = parse_templates(fields[3]);
            if matches!(matcher, Matcher::Literal { .. } | Matcher::FollowedBy { .. }) && templates.is_empty() {
                return Err(err(format!("{} clause needs templates", matcher.kind_name())));
            }
            clauses.push(Clause { id, matcher, templates });
        }
        Ok(RuleSet { clauses })
    }

    pub fn load_dir(dir: &Path) -> Result<Self, TableError> {
        Self::parse(&read_table_file(dir, RULES_FILE)?)
    }

    /// Distinct rule ids, in order.
    pub fn rule_ids(&self) -> Vec<u8> {
        let mut ids: Vec<u8> = self.clauses.iter().map(|c| c.id).collect();
        ids.dedup();
        ids
    }

    /// A copy with every clause of rule `id` removed.
    pub fn without_rule(&self, id: u8) -> RuleSet {
        RuleSet {
            clauses: self.clauses.iter().filter(|c| c.id != id).cloned().collect(),
        }
    }

    /// Unit indices the conjunct pass visits: every conjunct, plus lone
    /// letters that a `bare` clause can rewrite in their current context.
    pub fn sites(&self, word: &SegmentedWord) -> Vec<usize> {
        (0..word.effective_length())
            .filter(|&i| {
                let unit = &word.units()[i];
                unit.is_conjunct()
                    || self.clauses.iter().any(|c| match &c.matcher {
                        Matcher::FollowedBy { has, next, bare: true } => {
                            unit.text() == has && word.unit(i + 1).is_some_and(|n| n.text() == next)
                        }
                        _ => false,
                    })
            })
            .collect()
    }

    /// Tries every clause in order and returns the first outcome.
    pub fn match_rule(&self, ctx: &ConjunctContext<'_>, tables: &ErrorTables) -> Option<RuleOutcome> {
        let unit = ctx.unit();
        let canonical = unit.letters().join(&HASANTA.to_string());
        for clause in &self.clauses {
            let mut candidates = clause.candidates(ctx, tables);
            candidates.retain(|c| c != unit.text() && *c != canonical);
            dedup_in_order(&mut candidates);
            if !candidates.is_empty() {
                return Some(RuleOutcome {
                    rule_id: clause.id,
                    candidates,
                    span: ctx.index..ctx.index + 1,
                });
            }
        }
        None
    }

    pub fn match_at(&self, word: &SegmentedWord, index: usize, tables: &ErrorTables) -> Option<RuleOutcome> {
        ConjunctContext::new(word, index).and_then(|ctx| self.match_rule(&ctx, tables))
    }

    pub fn to_tsv(&self) -> String {
        self.clauses.iter().map(|c| c.to_tsv_line() + "\n").collect()
    }
}

/// Replaces the outcome's span with candidate `choice`.
pub fn apply_outcome(word: &SegmentedWord, outcome: &RuleOutcome, choice: usize) -> Result<String, ChoiceOutOfRange> {
    let replacement = outcome.candidates.get(choice).ok_or(ChoiceOutOfRange {
        choice,
        len: outcome.candidates.len(),
    })?;
    let mut out = String::with_capacity(word.source().len() + replacement.len());
    for (i, unit) in word.units().iter().enumerate() {
        if i == outcome.span.start {
            out.push_str(replacement);
        }
        if !outcome.span.contains(&i) {
            out.push_str(unit.text());
        }
    }
    Ok(out)
}

impl Clause {
    fn candidates(&self, ctx: &ConjunctContext<'_>, tables: &ErrorTables) -> Vec<String> {
        let unit = ctx.unit();
        if unit.kind() == UnitKind::Simple {
            return match &self.matcher {
                Matcher::FollowedBy { has, next, bare: true }
                    if unit.text() == has && ctx.next_unit.is_some_and(|n| n.text() == next) =>
                {
                    self.expand_templates(tables)
                }
                _ => Vec::new(),
            };
        }

        let letters = unit.letters();
        let n = letters.len();
        match &self.matcher {
            Matcher::Literal { pattern, at } => {
                if at.admits(ctx.index) && join_letters(&letters) == *pattern {
                    self.expand_templates(tables)
                } else {
                    Vec::new()
                }
            }
            Matcher::YaPhala => {
                if n < 2 || letters[n - 1] != "য" {
                    return Vec::new();
                }
                let base = &letters[..n - 1];
                match ctx.next_unit {
                    Some(next) if next.is_vowel_sign() => vec![join_letters(base)],
                    Some(next) if next.is_bengali() => self
                        .expand_templates(tables)
                        .into_iter()
                        .map(|sign| join_letters(base) + &sign)
                        .collect(),
                    // End of the word: the ya-phala is silent and the letter
                    // before it is typed doubled or once.
                    _ => {
                        let (prefix, last) = base.split_at(base.len() - 1);
                        let mut out = Vec::new();
                        for letter in letter_options(&last[0], tables) {
                            let mut doubled = prefix.to_vec();
                            doubled.push(letter.clone());
                            let single = join_letters(&doubled);
                            out.push(single.clone() + &letter);
                            out.push(single);
                        }
                        out
                    }
                }
            }
            Matcher::BaPhala => {
                if n >= 2 && letters[n - 1] == "ব" {
                    vec![join_letters(&letters[..n - 1])]
                } else {
                    Vec::new()
                }
            }
            Matcher::Class { has, first, keep, swap } => {
                let hit = letters.iter().any(|l| has.contains(l))
                    || first.as_ref().is_some_and(|f| letters.first() == Some(f));
                if !hit {
                    return Vec::new();
                }
                let options: Vec<Vec<String>> = letters
                    .iter()
                    .map(|l| {
                        if keep.contains(l) {
                            vec![l.clone()]
                        } else if let Some((_, to)) = swap.iter().find(|(from, _)| from == l) {
                            vec![to.clone()]
                        } else {
                            letter_options(l, tables)
                        }
                    })
                    .collect();
                cartesian(&options).iter().map(|combo| join_letters(combo)).collect()
            }
            Matcher::Geminate => {
                if n == 2 && letters[0] == letters[1] {
                    let mut out = vec![letters[0].clone()];
                    for alt in letter_options(&letters[0], tables).into_iter().skip(1) {
                        out.push(join_letters(&[alt.clone(), alt]));
                    }
                    out
                } else {
                    Vec::new()
                }
            }
            Matcher::FollowedBy { has, next, .. } => {
                if letters.contains(has) && ctx.next_unit.is_some_and(|u| u.text() == next) {
                    self.expand_templates(tables)
                } else {
                    Vec::new()
                }
            }
        }
    }

    fn expand_templates(&self, tables: &ErrorTables) -> Vec<String> {
        let mut out = Vec::new();
        for t in &self.templates {
            match t {
                Template::Literal(s) => out.push(s.clone()),
                Template::WithPhonetic(s) => {
                    out.push(s.clone());
                    out.extend(tables.phonetic_of(s).iter().cloned());
                }
            }
        }
        out
    }

    fn to_tsv_line(&self) -> String {
        let params = match &self.matcher {
            Matcher::Literal { pattern, at } => {
                let mut p = format!("pattern={pattern}");
                match at {
                    Position::Any => {}
                    Position::Start => p.push_str(";at=start"),
                    Position::Inner => p.push_str(";at=inner"),
                }
                p
            }
            Matcher::YaPhala | Matcher::BaPhala | Matcher::Geminate => "-".to_string(),
            Matcher::Class { has, first, keep, swap } => {
                let mut parts = Vec::new();
                if !has.is_empty() {
                    parts.push(format!("has={}", has.join(",")));
                }
                if let Some(f) = first {
                    parts.push(format!("first={f}"));
                }
                if !keep.is_empty() {
                    parts.push(format!("keep={}", keep.join(",")));
                }
                if !swap.is_empty() {
                    let pairs: Vec<String> = swap.iter().map(|(a, b)| format!("{a}:{b}")).collect();
                    parts.push(format!("swap={}", pairs.join(",")));
                }
                parts.join(";")
            }
            Matcher::FollowedBy { has, next, bare } => {
                let mut p = format!("has={has};next={next}");
                if *bare {
                    p.push_str(";bare");
                }
                p
            }
        };
        let templates = if self.templates.is_empty() {
            "-".to_string()
        } else {
            self.templates
                .iter()
                .map(|t| match t {
                    Template::Literal(s) => s.clone(),
                    Template::WithPhonetic(s) => format!("~{s}"),
                })
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("{}\t{}\t{}\t{}", self.id, self.matcher.kind_name(), params, templates)
    }
}

/// A letter followed by those of its phonetic substitutes that are single
/// consonants and so can sit inside a conjunct.
fn letter_options(letter: &str, tables: &ErrorTables) -> Vec<String> {
    let mut out = vec![letter.to_string()];
    for alt in tables.phonetic_of(letter) {
        let seg = segment(alt);
        if seg.effective_length() == 1
            && seg.units()[0].kind() == UnitKind::Simple
            && is_consonant(seg.units()[0].base())
        {
            out.push(alt.clone());
        }
    }
    out
}

/// Joins letters into a cluster, placing a hasanta only between two
/// consonants.
fn join_letters(letters: &[String]) -> String {
    let mut out = String::new();
    for (i, l) in letters.iter().enumerate() {
        if i > 0 {
            let prev_ends = out.chars().last().is_some_and(is_consonant);
            let next_starts = l.chars().next().is_some_and(is_consonant);
            if prev_ends && next_starts {
                out.push(HASANTA);
            }
        }
        out.push_str(l);
    }
    out
}

fn cartesian(options: &[Vec<String>]) -> Vec<Vec<String>> {
    options.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut next = prefix.clone();
                    next.push(o.clone());
                    next
                })
            })
            .collect()
    })
}

fn dedup_in_order(v: &mut Vec<String>) {
    let mut seen = std::collections::HashSet::new();
    v.retain(|s| seen.insert(s.clone()));
}

struct Params {
    pairs: Vec<(String, Option<String>)>,
}

impl Params {
    fn parse(field: &str) -> Result<Self, String> {
        let field = field.trim();
        let mut pairs = Vec::new();
        if field.is_empty() || field == "-" {
            return Ok(Params { pairs });
        }
        for part in field.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            match part.split_once('=') {
                Some((k, v)) => pairs.push((k.trim().to_string(), Some(nfc(v.trim())))),
                None => pairs.push((part.to_string(), None)),
            }
        }
        Ok(Params { pairs })
    }

    fn value(&self, key: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(k, _)| k == key)
            .and_then(|(_, v)| v.as_deref())
    }

    fn list(&self, key: &str) -> Vec<String> {
        self.value(key)
            .map(|v| {
                v.split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            })
            .unwrap_or_default()
    }

    fn flag(&self, key: &str) -> bool {
        self.pairs.iter().any(|(k, v)| k == key && v.is_none())
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<(), String> {
        match self.pairs.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            Some((k, _)) => Err(format!("unknown parameter {k:?}")),
            None => Ok(()),
        }
    }
}

fn build_matcher(kind: &str, params: &Params) -> Result<Matcher, String> {
    let required = |key: &str| {
        params
            .value(key)
            .map(str::to_string)
            .ok_or_else(|| format!("{kind} clause needs `{key}=`"))
    };
    match kind {
        "literal" => {
            params.check_keys(&["pattern", "at"])?;
            let at = match params.value("at") {
                None | Some("any") => Position::Any,
                Some("start") => Position::Start,
                Some("inner") => Position::Inner,
                Some(other) => return Err(format!("bad position {other:?}")),
            };
            Ok(Matcher::Literal {
                pattern: required("pattern")?,
                at,
            })
        }
        "ya-phala" => {
            params.check_keys(&[])?;
            Ok(Matcher::YaPhala)
        }
        "ba-phala" => {
            params.check_keys(&[])?;
            Ok(Matcher::BaPhala)
        }
        "geminate" => {
            params.check_keys(&[])?;
            Ok(Matcher::Geminate)
        }
        "class" => {
            params.check_keys(&["has", "first", "keep", "swap"])?;
            let swap = params
                .list("swap")
                .iter()
                .map(|pair| {
                    pair.split_once(':')
                        .map(|(a, b)| (a.to_string(), b.to_string()))
                        .ok_or_else(|| format!("bad swap pair {pair:?}"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let has = params.list("has");
            let first = params.value("first").map(str::to_string);
            if has.is_empty() && first.is_none() {
                return Err("class clause needs `has=` or `first=`".to_string());
            }
            Ok(Matcher::Class {
                has,
                first,
                keep: params.list("keep"),
                swap,
            })
        }
        "followed-by" => {
            params.check_keys(&["has", "next", "bare"])?;
            Ok(Matcher::FollowedBy {
                has: required("has")?,
                next: required("next")?,
                bare: params.flag("bare"),
            })
        }
        other => Err(format!("unknown matcher kind {other:?}")),
    }
}

fn parse_templates(field: &str) -> Vec<Template> {
    let field = field.trim();
    if field.is_empty() || field == "-" {
        return Vec::new();
    }
    field
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s.strip_prefix('~') {
            Some(rest) => Template::WithPhonetic(nfc(rest)),
            None => Template::Literal(nfc(s)),
        })
        .collect()
}

impl fmt::Display for RuleOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {} -> {}", self.rule_id, self.candidates.join(" | "))
    }
}

use std::fs;

use juktak::rules::RULES_FILE;
use juktak::tables::{ReplacementTable, TableKind, Violation, PHONETIC_FILE};
use juktak::{apply_outcome, segment, ErrorTables, RuleSet, TableError};

#[test]
fn bundled_data_round_trips_through_a_directory() {
    let dir = tempfile::tempdir().unwrap();
    let tables = ErrorTables::default();
    tables.write_dir(dir.path()).unwrap();
    fs::write(dir.path().join(RULES_FILE), RuleSet::default().to_tsv()).unwrap();
    assert_eq!(ErrorTables::load_dir(dir.path()).unwrap(), tables);
    assert_eq!(
        RuleSet::load_dir(dir.path()).unwrap().to_tsv(),
        RuleSet::default().to_tsv()
    );
}

#[test]
fn missing_files_are_reported_by_name() {
    let dir = tempfile::tempdir().unwrap();
    match ErrorTables::load_dir(dir.path()) {
        Err(TableError::MissingFile(p)) => assert!(p.ends_with("juktakkhor.tsv")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn invalid_rows_carry_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    ErrorTables::default().write_dir(dir.path()).unwrap();
    fs::write(dir.path().join(PHONETIC_FILE), "# header\nস\tশ\nস\tষ\n").unwrap();
    match ErrorTables::load_dir(dir.path()) {
        Err(TableError::Validation { file, line, violation }) => {
            assert_eq!(file, PHONETIC_FILE);
            assert_eq!(line, 3);
            assert!(matches!(violation, Violation::DuplicateKey(_)));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn only_phonetic_rows_may_be_empty() {
    assert!(ReplacementTable::parse(TableKind::Phonetic, "ক\t\n").is_ok());
    assert!(ReplacementTable::parse(TableKind::Adjacency, "ক\t\n").is_err());
    assert!(ReplacementTable::parse(TableKind::Insertion, "ক\t\n").is_err());
}

#[test]
fn decomposed_and_precomposed_keys_agree() {
    let t = ReplacementTable::parse(TableKind::Adjacency, "\u{09DF}\tত\n").unwrap();
    assert_eq!(t.get("\u{09AF}\u{09BC}"), ["ত"]);
}

#[test]
fn first_matching_rule_wins_and_later_rules_take_over() {
    let (t, r) = (ErrorTables::default(), RuleSet::default());
    let w = segment("কন্না");
    assert_eq!(r.match_at(&w, 1, &t).unwrap().rule_id, 15);
    let without = r.without_rule(15);
    let o = without.match_at(&w, 1, &t).unwrap();
    assert_eq!(o.rule_id, 16);
    assert_eq!(apply_outcome(&w, &o, 0).unwrap(), "কনা");

    let w = segment("ভাগ্য");
    assert_eq!(r.match_at(&w, 2, &t).unwrap().rule_id, 2);
    assert_eq!(r.without_rule(2).match_at(&w, 2, &t).unwrap().rule_id, 4);
}

#[test]
fn rule_positions_are_respected() {
    let (t, r) = (ErrorTables::default(), RuleSet::default());
    let start = r.match_at(&segment("ক্ষান্ত"), 0, &t).unwrap();
    assert_eq!((start.rule_id, start.candidates.clone()), (10, vec!["খ".to_string()]));
    let inner = r.match_at(&segment("পক্ষ"), 1, &t).unwrap();
    assert_eq!(inner.candidates, ["ক্ক", "খ"]);
}

#[test]
fn every_candidate_applies_and_changes_the_word() {
    let (t, r) = (ErrorTables::default(), RuleSet::default());
    for word in ["ব্যবহার", "সম্ভব", "তত্ত্ব", "ব্যাঙাচি", "ব্যাঙ্গ", "চিহ্ন", "কষ্ট", "লাচ্ছি", "বাচ্য"]
    {
        let seg = segment(word);
        for site in r.sites(&seg) {
            let Some(o) = r.match_at(&seg, site, &t) else { continue };
            for k in 0..o.candidates.len() {
                assert_ne!(apply_outcome(&seg, &o, k).unwrap(), word, "{word} rule {}", o.rule_id);
            }
            assert!(apply_outcome(&seg, &o, o.candidates.len()).is_err());
        }
    }
}

use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn juktak(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_juktak"))
        .args(args)
        .env_remove("JUKTAK_TABLES")
        .output()
        .expect("run juktak")
}

fn juktak_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_juktak"))
        .args(args)
        .env_remove("JUKTAK_TABLES")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn juktak");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const ZERO: &[&str] = &["--pp", "0", "--mp", "0", "--jp", "0", "--ip", "0"];

#[test]
fn zero_probabilities_leave_words_unchanged() {
    let mut args = vec!["gen", "--format", "tsv"];
    args.extend_from_slice(ZERO);
    args.extend_from_slice(&["ব্যবহার", "রক্ত", "সহজ"]);
    let out = juktak(&args);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 6);
    for line in text.lines() {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols[0], cols[1], "{line}");
    }
}

#[test]
fn same_seed_same_bytes() {
    let input = "ব্যবহার স্মরণ চিহ্ন কষ্ট পেট্রল বাংলাদেশ\n".repeat(50);
    let a = juktak_stdin(&["gen", "--seed", "9"], &input);
    let b = juktak_stdin(&["gen", "--seed", "9", "--workers", "4"], &input);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = juktak_stdin(&["gen", "--seed", "10"], &input);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn disabled_insertion_never_inserts() {
    let input = "ব্যবহার বাংলাদেশ কালিয়াকৈর টাঙ্গাইল\n".repeat(100);
    let out = juktak_stdin(&["gen", "--ip", "0", "--mp", "1", "--pp", "1"], &input);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(!text.contains("\"insertion\""));
    assert!(text.contains("\"adjacency\""));
}

#[test]
fn bad_probability_is_a_usage_error() {
    let out = juktak(&["gen", "--jp", "1.5", "সহজ"]);
    assert_eq!(out.status.code(), Some(2));
    let out = juktak(&["gen", "--variants", "0", "সহজ"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inspect_shows_units_and_rules() {
    let out = juktak(&["inspect", "রক্ত", "পেট্রল"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("রক্ত\t2 units\t1 conjuncts"));
    assert!(text.contains("ক্ত\tconjunct\tinventory=yes"));
    assert!(text.contains("rule=9\trewrites=ত্র"));
}

#[test]
fn freq_applies_strict_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("in.txt");
    fs::write(&path, "আমি তুমি। আমি, আমি hello\n").unwrap();
    let p = path.to_str().unwrap();
    let out = juktak(&["freq", "--threshold", "2", p]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "আমি\t3\n");
    let out = juktak(&["freq", "--threshold", "3", p]);
    assert_eq!(stdout(&out), "");
    let out = juktak(&["freq", "--threshold", "0", p]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corpus_emits_records_for_frequent_words() {
    let out = juktak_stdin(&["corpus", "--threshold", "1", "--format", "tsv"], "আমি আমি তুমি\n");
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().all(|l| l.starts_with("আমি\t")));
}

#[test]
fn selfcheck_passes_with_bundled_data() {
    let out = juktak(&["selfcheck"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("worked examples: 24/24 reachable"));
}

#[test]
fn custom_tables_directory_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let base = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data");
    for name in ["juktakkhor.tsv", "adjacency.tsv", "insertion.tsv", "rules.tsv"] {
        fs::copy(format!("{base}/{name}"), dir.path().join(name)).unwrap();
    }
    fs::write(dir.path().join("phonetic.tsv"), "স\tথ\n").unwrap();
    let d = dir.path().to_str().unwrap();
    let out = juktak(&[
        "--tables",
        d,
        "gen",
        "--pp",
        "1",
        "--mp",
        "0",
        "--jp",
        "0",
        "--ip",
        "0",
        "--format",
        "tsv",
        "সহজ",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).lines().all(|l| l.starts_with("সহজ\tথহজ")));

    fs::write(dir.path().join("phonetic.tsv"), "স\tস\n").unwrap();
    let out = juktak(&["--tables", d, "selfcheck"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("phonetic.tsv"));
}

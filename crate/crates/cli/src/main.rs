use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use juktak::conformance::{self, Status};
use juktak::corpus::{normalize, FrequencyTable};
use juktak::grapheme::segment;
use juktak::{
    count_frequencies, emit_parallel, select_frequent, DecodePolicy, EmitOptions, ErrorConfig, ErrorTables,
    OutputFormat, RuleSet,
};

#[derive(Parser)]
#[command(name = "juktak", version, about = "Generate realistic Bengali misspellings")]
struct Cli {
    /// Directory holding juktakkhor.tsv, phonetic.tsv, adjacency.tsv,
    /// insertion.tsv and rules.tsv. Defaults to the bundled tables.
    #[arg(long, global = true, env = "JUKTAK_TABLES", value_name = "DIR")]
    tables: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate errored variants of the given words (or of stdin).
    Gen {
        words: Vec<String>,
        #[command(flatten)]
        gen: GenArgs,
    },
    /// Count words, keep the frequent ones and generate a parallel dataset.
    Corpus {
        /// Input text files; stdin when omitted.
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        threshold: u64,
        /// Also write the full frequency table here.
        #[arg(long, value_name = "PATH")]
        freq_out: Option<PathBuf>,
        #[arg(long)]
        strict_utf8: bool,
        #[command(flatten)]
        gen: GenArgs,
    },
    /// Print `word<TAB>count` for words seen more than THRESHOLD times.
    Freq {
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        threshold: u64,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
        #[arg(long)]
        strict_utf8: bool,
    },
    /// Show segmentation, candidates and matching rules for each word.
    Inspect {
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Check the worked rewrite examples against the loaded tables and rules.
    Selfcheck,
}

#[derive(Args)]
struct GenArgs {
    /// Phonetic replacement probability (per letter).
    #[arg(long, default_value_t = 0.25, value_parser = probability)]
    pp: f64,
    /// Keyboard-adjacency replacement probability (per word).
    #[arg(long, default_value_t = 0.2, value_parser = probability)]
    mp: f64,
    /// Conjunct rule probability (per conjunct).
    #[arg(long, default_value_t = 0.3, value_parser = probability)]
    jp: f64,
    /// Keyboard-adjacency insertion probability (per word).
    #[arg(long, default_value_t = 0.2, value_parser = probability)]
    ip: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Errored variants per word.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    variants: u64,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    Tsv,
}

fn probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("{p} is outside [0, 1]"))
    }
}

impl GenArgs {
    fn config(&self) -> ErrorConfig {
        ErrorConfig {
            seed: self.seed,
            ..ErrorConfig::with_probabilities(self.pp, self.mp, self.jp, self.ip)
        }
    }

    fn options(&self) -> EmitOptions {
        EmitOptions {
            variants_per_word: self.variants as usize,
            format: match self.format {
                Format::Jsonl => OutputFormat::Jsonl,
                Format::Tsv => OutputFormat::Tsv,
            },
            workers: self.workers as usize,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("juktak: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let (tables, rules) = load(cli.tables.as_deref())?;
    match cli.command {
        Command::Gen { words, gen } => {
            let words: Vec<String> = if words.is_empty() {
                let mut text = String::new();
                io::stdin().read_to_string(&mut text).context("reading stdin")?;
                text.split_whitespace().map(normalize).collect()
            } else {
                words.iter().map(|w| normalize(w)).collect()
            };
            emit(&words, &gen, &tables, &rules)?;
        }
        Command::Corpus {
            inputs,
            threshold,
            freq_out,
            strict_utf8,
            gen,
        } => {
            let table = count_inputs(&inputs, strict_utf8)?;
            if let Some(path) = freq_out {
                let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                table.write_tsv(BufWriter::new(file))?;
            }
            let words = select_frequent(&table, threshold);
            eprintln!(
                "{} tokens, {} distinct words, {} above {threshold}",
                table.total_tokens(),
                table.len(),
                words.len()
            );
            emit(&words, &gen, &tables, &rules)?;
        }
        Command::Freq {
            inputs,
            threshold,
            output,
            strict_utf8,
        } => {
            let table = count_inputs(&inputs, strict_utf8)?;
            let mut out = sink(output.as_deref())?;
            let mut selected = 0;
            for (word, count) in table.sorted() {
                if count > threshold {
                    writeln!(out, "{word}\t{count}")?;
                    selected += 1;
                }
            }
            out.flush()?;
            eprintln!(
                "{} tokens, {} distinct words, {selected} above {threshold}",
                table.total_tokens(),
                table.len()
            );
        }
        Command::Inspect { words } => {
            let mut out = sink(None)?;
            for w in &words {
                inspect(&normalize(w), &tables, &rules, &mut out)?;
            }
            out.flush()?;
        }
        Command::Selfcheck => return selfcheck(&tables, &rules),
    }
    Ok(ExitCode::SUCCESS)
}

fn load(dir: Option<&Path>) -> Result<(ErrorTables, RuleSet)> {
    match dir {
        None => Ok((ErrorTables::default(), RuleSet::default())),
        Some(dir) => {
            let tables = ErrorTables::load_dir(dir).context("loading tables")?;
            let rules = RuleSet::load_dir(dir).context("loading rules")?;
            Ok((tables, rules))
        }
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(words: &[String], gen: &GenArgs, tables: &ErrorTables, rules: &RuleSet) -> Result<()> {
    let mut out = sink(gen.output.as_deref())?;
    let summary = emit_parallel(words, &gen.config(), tables, rules, gen.options(), &mut out)?;
    let kinds: Vec<String> = summary.edits.iter().map(|(k, n)| format!("{k}={n}")).collect();
    eprintln!(
        "{} records for {} words, {} unchanged [{}]",
        summary.records,
        summary.words,
        summary.unchanged,
        kinds.join(" ")
    );
    Ok(())
}

fn count_inputs(inputs: &[PathBuf], strict: bool) -> Result<FrequencyTable> {
    let policy = if strict {
        DecodePolicy::Strict
    } else {
        DecodePolicy::Replace
    };
    let mut table = FrequencyTable::new();
    let mut count_one = |name: &str, reader: Box<dyn Read>| -> Result<()> {
        let report = count_frequencies(reader, policy).with_context(|| format!("reading {name}"))?;
        for offset in &report.decode_errors {
            eprintln!("{name}: invalid UTF-8 at byte {offset}, replaced");
        }
        table.merge(report.table);
        Ok(())
    };
    if inputs.is_empty() {
        count_one("<stdin>", Box::new(io::stdin().lock()))?;
    } else {
        for path in inputs {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            count_one(&path.display().to_string(), Box::new(BufReader::new(file)))?;
        }
    }
    Ok(table)
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "-".to_string()
    } else {
        items.join(",")
    }
}

fn inspect(word: &str, tables: &ErrorTables, rules: &RuleSet, out: &mut dyn Write) -> Result<()> {
    let seg = segment(word);
    writeln!(
        out,
        "{word}\t{} units\t{} conjuncts{}",
        seg.effective_length(),
        seg.conjunct_count(),
        if seg.is_irregular() { "\tirregular" } else { "" }
    )?;
    let sites = rules.sites(&seg);
    for (i, unit) in seg.units().iter().enumerate() {
        write!(out, "  {i}\t{}\t{}", unit.text(), unit.kind())?;
        if unit.is_conjunct() {
            let known = if tables.conjuncts.contains(unit.text()) {
                "yes"
            } else {
                "no"
            };
            write!(out, "\tinventory={known}")?;
        } else {
            write!(
                out,
                "\tphonetic={}\tadjacency={}\tinsertion={}",
                list(tables.phonetic_candidates(unit)),
                list(tables.adjacency_candidates(unit)),
                list(tables.insertion_candidates(unit)),
            )?;
        }
        if sites.contains(&i) {
            match rules.match_at(&seg, i, tables) {
                Some(o) => write!(out, "\trule={}\trewrites={}", o.rule_id, o.candidates.join(","))?,
                None => write!(out, "\trule=none")?,
            }
        }
        writeln!(out)?;
    }
    Ok(())
}

fn selfcheck(tables: &ErrorTables, rules: &RuleSet) -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    let results = conformance::check_worked_examples(tables, rules)?;
    let mut failed = 0;
    for r in &results {
        let ex = &r.example;
        let rule = ex
            .rule
            .map(|id| format!("rule {id:>2}"))
            .unwrap_or_else(|| "letter ".to_string());
        let (tag, note) = match ex.status {
            Status::Blocked(why) => ("BLOCKED", format!("\t({why})")),
            Status::Corrected(why) if r.reachable => {
                ("PASS", format!("\t(checked as {} -> {}: {why})", ex.before, ex.after))
            }
            Status::Exact if r.reachable => ("PASS", String::new()),
            _ => ("FAIL", String::new()),
        };
        if !r.passed() {
            failed += 1;
        }
        writeln!(
            out,
            "{tag:<7}\t{rule}\t{} -> {}{note}",
            ex.published_before, ex.published_after
        )?;
    }
    let checked = results
        .iter()
        .filter(|r| !matches!(r.example.status, Status::Blocked(_)))
        .count();
    writeln!(
        out,
        "worked examples: {}/{checked} reachable, {} blocked",
        checked - failed,
        results.len() - checked
    )?;

    let coverage = conformance::sample_coverage(&ErrorConfig::default(), tables, rules)?;
    let hits = coverage.iter().filter(|c| c.any_hit()).count();
    let real = coverage.iter().filter(|c| c.any_real_hit()).count();
    writeln!(
        out,
        "sample error words: {hits}/{} words with a reachable form ({real} excluding unchanged forms)",
        coverage.len()
    )?;
    out.flush()?;
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

//! The `gcmeta` command line.

pub mod bench;
pub mod manifest;

use clap::{Parser, Subcommand, ValueEnum};
use gcmeta::ground::{ground_pair, GroundMode, Grounder};
use gcmeta::integrate::{build_check_prime, enforce_splitting, GuessCheckPair};
use gcmeta::suite::{run_suite, Family, SuiteConfig};
use gcmeta::text::{print_answer_sets, Format};
use gcmeta::{parse, solve::solve_program, transform, AnswerSet, Budget, Error, Program, SolveConfig, TransformOptions};
use manifest::RunManifest;
use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_BUDGET: i32 = 30;

#[derive(Parser, Debug)]
#[command(name = "gcmeta", version, about = "Guess/check integration for disjunctive logic programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Naive,
    Relevant,
}

impl From<ModeArg> for GroundMode {
    fn from(m: ModeArg) -> GroundMode {
        match m {
            ModeArg::Naive => GroundMode::Naive,
            ModeArg::Relevant => GroundMode::Relevant,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EmitArg {
    /// Guess program followed by the rewritten check program.
    All,
    /// The rewritten check program only.
    Check,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Instantiate a program.
    Ground {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "relevant")]
        mode: ModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Rewrite a head-cycle-free program into the meta program.
    Transform {
        file: PathBuf,
        #[arg(long, default_value = "none")]
        opt: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Combine a guess and a check program into one program.
    Integrate {
        guess: PathBuf,
        check: PathBuf,
        #[arg(long, default_value = "none")]
        opt: String,
        /// Grounding of the check program; the guess is always grounded relevantly.
        #[arg(long, value_enum, default_value = "relevant")]
        ground: ModeArg,
        #[arg(long, value_enum, default_value = "all")]
        emit: EmitArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Compute answer sets. Exit 10: some, 20: none, 30: budget exceeded.
    Solve {
        file: PathBuf,
        #[arg(long, conflicts_with = "n")]
        all: bool,
        #[arg(short = 'n')]
        n: Option<usize>,
        /// Comma-separated predicate names to keep.
        #[arg(long)]
        project: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Run the oracle-agreement suites.
    Verify {
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "4")]
        sizes: String,
        #[arg(long, default_value = "0..20")]
        seeds: String,
        /// One option set; all eight combinations when absent.
        #[arg(long)]
        opt: Option<String>,
        /// Drop one meta rule (mutation testing).
        #[arg(long, hide = true)]
        omit_line: Option<u32>,
        /// Directory for counterexample files.
        #[arg(long, default_value = "counterexamples")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Time the encodings over generated instances and print CSV.
    Bench {
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "")]
        sizes: String,
        #[arg(long, default_value = "0")]
        seeds: String,
        /// Option sets separated by `;`, e.g. `none;mod;dep;all`.
        #[arg(long, default_value = "none;mod;dep;all")]
        opts_matrix: String,
        /// Also write instances under `<dir>/bench/<family>/<size>/<seed>/`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Parses `1,2,5`, `2..5` (exclusive) or `2..=5`.
pub fn parse_list(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (b, inclusive) = match b.strip_prefix('=') {
                Some(b) => (b, true),
                None => (b, false),
            };
            let a: u64 = a.trim().parse().map_err(|_| format!("bad range `{part}`"))?;
            let b: u64 = b.trim().parse().map_err(|_| format!("bad range `{part}`"))?;
            let end = if inclusive { b + 1 } else { b };
            out.extend(a..end);
        } else {
            out.push(part.parse().map_err(|_| format!("bad number `{part}`"))?);
        }
    }
    Ok(out)
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = if matches!(e, Error::BudgetExceeded { .. }) { EXIT_BUDGET } else { EXIT_ERROR };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure { code: EXIT_ERROR, message: e.to_string() }
    }
}

impl From<String> for Failure {
    fn from(message: String) -> Failure {
        Failure { code: EXIT_ERROR, message }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure { code: EXIT_ERROR, message: format!("{}: {e}", path.display()) })
}

fn read_program(path: &Path, m: &mut RunManifest) -> Result<Program, Failure> {
    let src = read(path)?;
    m.input(&path.display().to_string(), &src);
    parse(&src).map_err(|e| Failure { code: EXIT_ERROR, message: format!("{}: {e}", path.display()) })
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

/// Writes the result to `out` (or stdout) and the manifest next to it.
fn emit(
    text: &str,
    out: &Option<PathBuf>,
    manifest_path: &Option<PathBuf>,
    m: &mut RunManifest,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let text = if text.ends_with('\n') || text.is_empty() { text.to_string() } else { format!("{text}\n") };
    m.result(&text);
    match out {
        Some(p) => std::fs::write(p, &text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    let mpath = manifest_path.clone().or_else(|| out.as_ref().map(|p| PathBuf::from(format!("{}.manifest.json", p.display()))));
    if let Some(mp) = mpath {
        std::fs::write(mp, m.to_json())?;
    }
    Ok(())
}

fn ground_if_needed(p: Program, mode: GroundMode) -> Result<Program, Failure> {
    if p.is_ground() && !p.has_builtins() {
        return Ok(p);
    }
    Ok(Grounder::new(mode).ground(&p)?.0)
}

pub fn run(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Ground { file, mode, out, manifest } => {
            let mut m = RunManifest::new("ground");
            let p = read_program(&file, &mut m)?;
            m.option("mode", format!("{mode:?}").to_lowercase());
            let t = Instant::now();
            let (g, report) = Grounder::new(mode.into()).ground(&p)?;
            m.wall_ms.insert("ground".into(), ms(t));
            m.option("universe_size", report.universe_size);
            m.option("dropped", report.dropped);
            emit(&g.to_string(), &out, &manifest, &mut m, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Transform { file, opt, out, manifest } => {
            let mut m = RunManifest::new("transform");
            let opts = TransformOptions::parse(&opt)?;
            m.option("opt", opts.label());
            let p = ground_if_needed(read_program(&file, &mut m)?, GroundMode::Relevant)?;
            let t = Instant::now();
            let tr = transform(&p, &opts)?;
            m.wall_ms.insert("transform".into(), ms(t));
            for w in &tr.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            m.warnings = tr.warnings.clone();
            emit(&tr.program.to_string(), &out, &manifest, &mut m, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Integrate { guess, check, opt, ground, emit: what, out, manifest } => {
            let mut m = RunManifest::new("integrate");
            let opts = TransformOptions::parse(&opt)?;
            m.option("opt", opts.label());
            m.option("ground", format!("{ground:?}").to_lowercase());
            m.option("emit", format!("{what:?}").to_lowercase());
            let g = read_program(&guess, &mut m)?;
            let c = read_program(&check, &mut m)?;
            let t = Instant::now();
            let (gg, cg) = match ground {
                ModeArg::Relevant => ground_pair(&g, &c, GroundMode::Relevant)?,
                ModeArg::Naive => {
                    let (gg, _) = ground_pair(&g, &Program::empty(), GroundMode::Relevant)?;
                    let mut consts = gcmeta::ground::universe(&g);
                    consts.extend(gcmeta::ground::universe(&c));
                    let (cg, _) = Grounder::new(GroundMode::Naive).with_constants(consts).ground(&c)?;
                    (gg, cg)
                }
            };
            m.wall_ms.insert("ground".into(), ms(t));
            let (pair, renames) = enforce_splitting(&GuessCheckPair::new(gg, cg)?)?;
            if !renames.is_empty() {
                let _ = writeln!(stderr, "warning: renamed {} check predicate(s) to keep the guess a splitting set", renames.len());
            }
            m.renames = renames;
            if !pair.check.flags().hcf {
                let w = "unsound: not HCF".to_string();
                let _ = writeln!(stderr, "warning: {w}");
                m.warnings.push(w);
            }
            let t = Instant::now();
            let check_prime = build_check_prime(&pair, &opts)?;
            m.wall_ms.insert("integrate".into(), ms(t));
            let text = match what {
                EmitArg::All => pair.guess.concat(&check_prime)?.to_string(),
                EmitArg::Check => check_prime.to_string(),
            };
            emit(&text, &out, &manifest, &mut m, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Solve { file, all: _, n, project, format } => {
            let mut m = RunManifest::new("solve");
            let p = read_program(&file, &mut m)?;
            let cfg = SolveConfig { limit: n, project: None, budget: Budget::from_env() };
            let (sets, stats) = solve_program(&p, &cfg)?;
            let sets = match &project {
                Some(preds) => {
                    let keep: Vec<&str> = preds.split(',').map(str::trim).collect();
                    let mut seen = BTreeSet::new();
                    sets.iter()
                        .filter(|s| seen.insert(s.restrict_to_predicates(&keep)))
                        .map(|s| AnswerSet { literals: s.restrict_to_predicates(&keep), producer: s.producer })
                        .collect()
                }
                None => sets,
            };
            let code = if sets.is_empty() { EXIT_UNSAT } else { EXIT_SAT };
            match format {
                FormatArg::Text => {
                    let body = print_answer_sets(&sets, Format::Text);
                    if !body.is_empty() {
                        writeln!(stdout, "{body}")?;
                    }
                }
                FormatArg::Json => {
                    let rows: Vec<Vec<String>> =
                        sets.iter().map(|s| s.literals.iter().map(ToString::to_string).collect()).collect();
                    let doc = serde_json::json!({ "answer_sets": rows, "stats": stats, "exit": code });
                    writeln!(stdout, "{doc}")?;
                }
            }
            Ok(code)
        }
        Command::Verify { family, sizes, seeds, opt, omit_line, out, format } => {
            let family = Family::parse(&family)?;
            let sizes: Vec<usize> = parse_list(&sizes)?.into_iter().map(|s| s as usize).collect();
            let mut cfg = SuiteConfig::new(family, sizes, parse_list(&seeds)?);
            if let Some(o) = opt {
                cfg.options = vec![TransformOptions::parse(&o)?];
            }
            if let Some(l) = omit_line {
                if !(1..=42).contains(&l) {
                    return Err(format!("--omit-line {l} is not a meta rule").into());
                }
                for o in &mut cfg.options {
                    o.omit_line = Some(l);
                }
            }
            let report = run_suite(&cfg)?;
            match format {
                FormatArg::Text => write!(stdout, "{report}")?,
                FormatArg::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?,
            }
            if report.passed() {
                return Ok(EXIT_OK);
            }
            std::fs::create_dir_all(&out)?;
            for p in report.properties.iter().filter(|p| !p.passed()) {
                if let Some(c) = &p.counterexample {
                    let path = out.join(format!("{}-{}.dl", report.family, p.name));
                    let mut text = format!("% {}\n% size {} seed {} opts {}\n", c.description, c.size, c.seed, c.options);
                    text.push_str(&c.input);
                    text.push('\n');
                    std::fs::write(&path, text)?;
                    writeln!(stderr, "counterexample written to {}", path.display())?;
                }
            }
            Ok(EXIT_FAILURE)
        }
        Command::Bench { family, sizes, seeds, opts_matrix, out, csv } => {
            let family = bench::BenchFamily::parse(&family)?;
            let sizes: Vec<usize> = parse_list(&sizes)?.into_iter().map(|s| s as usize).collect();
            let matrix = opts_matrix
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(TransformOptions::parse)
                .collect::<Result<Vec<_>, _>>()?;
            let rows = bench::run_bench(family, &sizes, &parse_list(&seeds)?, &matrix, Budget::from_env(), out.as_deref())?;
            let text = bench::to_csv(&rows);
            match csv {
                Some(p) => std::fs::write(p, text)?,
                None => stdout.write_all(text.as_bytes())?,
            }
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_list("0..3").unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_list("2..=4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_list("1, 5").unwrap(), vec![1, 5]);
        assert!(parse_list("").unwrap().is_empty());
        assert!(parse_list("x").is_err());
    }
}

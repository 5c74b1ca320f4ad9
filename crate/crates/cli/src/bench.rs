//! Timing runs over generated instances.

use gcmeta::bench::{bomb, qbf, sc};
use gcmeta::integrate::{integrate, GuessCheckPair};
use gcmeta::solve::solve_program;
use gcmeta::suite::sc_instance;
use gcmeta::verify::{random_pair, PairShape};
use gcmeta::{AnswerSet, Budget, Error, Program, Result, SolveConfig, TransformOptions};
use std::path::Path;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchFamily {
    Qbf,
    Sc,
    Btc,
    Btuc,
    Random,
}

impl BenchFamily {
    pub fn parse(s: &str) -> Result<BenchFamily> {
        match s {
            "qbf" => Ok(BenchFamily::Qbf),
            "sc" => Ok(BenchFamily::Sc),
            "btc" | "bomb" => Ok(BenchFamily::Btc),
            "btuc" => Ok(BenchFamily::Btuc),
            "random" => Ok(BenchFamily::Random),
            _ => Err(Error::Precondition(format!("unknown family `{s}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BenchFamily::Qbf => "qbf",
            BenchFamily::Sc => "sc",
            BenchFamily::Btc => "btc",
            BenchFamily::Btuc => "btuc",
            BenchFamily::Random => "random",
        }
    }
}

/// One CSV row. `answersets` is `None` when the budget ran out.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub family: String,
    pub size: usize,
    pub seed: u64,
    /// Option label for integrated encodings, encoding name otherwise.
    pub opts: String,
    pub seconds: f64,
    pub answersets: Option<usize>,
}

pub const CSV_HEADER: &str = "family,size,seed,opts,time,answersets";

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for r in rows {
        let n = r.answersets.map_or("timeout".to_string(), |n| n.to_string());
        s.push_str(&format!("{},{},{},\"{}\",{:.4},{}\n", r.family, r.size, r.seed, r.opts, r.seconds, n));
    }
    s
}

struct Instance {
    pair: GuessCheckPair,
    adhoc: Vec<(&'static str, Program)>,
    files: Vec<(String, String)>,
    params: serde_json::Value,
}

fn build(family: BenchFamily, size: usize, seed: u64) -> Result<Instance> {
    Ok(match family {
        BenchFamily::Qbf => {
            let q = qbf::gen_qbf(size, size, 3 * size, 3.min(2 * size), seed)?;
            let pair = qbf::encode_qbf(&q);
            let adhoc = qbf::encode_qbf_adhoc(&q)?;
            Instance {
                files: vec![("adhoc.dl".into(), adhoc.to_string())],
                adhoc: vec![("adhoc", adhoc)],
                params: serde_json::json!({"n_x": size, "n_y": size, "n_terms": 3 * size, "term_len": 3.min(2 * size)}),
                pair,
            }
        }
        BenchFamily::Sc => {
            let inst = sc_instance(size, seed)?;
            let (a1, a2) = (sc::encode_sc_adhoc1(&inst)?, sc::encode_sc_adhoc2(&inst)?);
            Instance {
                pair: sc::encode_sc(&inst)?,
                files: vec![("adhoc1.dl".into(), a1.to_string()), ("adhoc2.dl".into(), a2.to_string())],
                adhoc: vec![("adhoc1", a1), ("adhoc2", a2)],
                params: serde_json::json!({"companies": size, "products": size, "controls": size / 2}),
            }
        }
        BenchFamily::Btc | BenchFamily::Btuc => {
            let v = if family == BenchFamily::Btc { bomb::BombVariant::Btc } else { bomb::BombVariant::Btuc };
            let horizon = 2 * size.max(1) - 1;
            let inst = bomb::BombInstance::new(v, size, horizon)?;
            Instance {
                pair: bomb::encode_bomb(&inst)?,
                adhoc: vec![],
                files: vec![],
                params: serde_json::json!({"variant": v.to_string(), "packages": size, "horizon": horizon}),
            }
        }
        BenchFamily::Random => {
            let shape = PairShape { guess_atoms: size.clamp(1, 5), check_atoms: size.clamp(1, 4), ..PairShape::default() };
            Instance {
                pair: random_pair(seed, &shape),
                adhoc: vec![],
                files: vec![],
                params: serde_json::json!({"guess_atoms": shape.guess_atoms, "check_atoms": shape.check_atoms}),
            }
        }
    })
}

fn timed(p: &Program, budget: Budget) -> Result<(f64, Option<Vec<AnswerSet>>)> {
    let t = Instant::now();
    match solve_program(p, &SolveConfig::all().with_budget(budget)) {
        Ok((s, _)) => Ok((t.elapsed().as_secs_f64(), Some(s))),
        Err(Error::BudgetExceeded { .. }) => Ok((t.elapsed().as_secs_f64(), None)),
        Err(e) => Err(e),
    }
}

fn write_instance(dir: &Path, family: BenchFamily, size: usize, seed: u64, inst: &Instance) -> Result<()> {
    let d = dir.join("bench").join(family.name()).join(size.to_string()).join(seed.to_string());
    let io = |e: std::io::Error| Error::Precondition(format!("{}: {e}", d.display()));
    std::fs::create_dir_all(&d).map_err(io)?;
    let mut files = vec![("guess.dl".to_string(), inst.pair.guess.to_string()), ("check.dl".to_string(), inst.pair.check.to_string())];
    files.extend(inst.files.iter().cloned());
    for (name, text) in &files {
        std::fs::write(d.join(name), format!("{text}\n")).map_err(io)?;
    }
    let manifest = serde_json::json!({
        "family": family.name(), "size": size, "seed": seed, "parameters": inst.params,
        "files": files.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
    });
    std::fs::write(d.join("manifest.json"), serde_json::to_string_pretty(&manifest).expect("json")).map_err(io)?;
    Ok(())
}

/// Integrated encodings under each option set, plus the ad hoc encodings
/// where the family has them. Instances out of budget become rows with no
/// answer-set count.
pub fn run_bench(
    family: BenchFamily,
    sizes: &[usize],
    seeds: &[u64],
    matrix: &[TransformOptions],
    budget: Budget,
    out: Option<&Path>,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &size in sizes {
        // Bomb instances do not depend on the seed.
        let seeds: &[u64] = if matches!(family, BenchFamily::Btc | BenchFamily::Btuc) { &seeds[..seeds.len().min(1)] } else { seeds };
        for &seed in seeds {
            let inst = build(family, size, seed)?;
            if let Some(dir) = out {
                write_instance(dir, family, size, seed, &inst)?;
            }
            let row = |opts: String, (seconds, sets): (f64, Option<Vec<AnswerSet>>)| BenchRow {
                family: family.name().into(),
                size,
                seed,
                opts,
                seconds,
                answersets: sets.map(|s| s.len()),
            };
            for o in matrix {
                rows.push(row(o.label(), timed(&integrate(&inst.pair, o)?, budget)?));
            }
            for (name, p) in &inst.adhoc {
                rows.push(row((*name).into(), timed(p, budget)?));
            }
        }
    }
    Ok(rows)
}

/// Mean seconds per option label (timeouts count as their elapsed time).
pub fn mean_by_opts(rows: &[BenchRow]) -> std::collections::BTreeMap<String, f64> {
    let mut acc: std::collections::BTreeMap<String, (f64, usize)> = Default::default();
    for r in rows {
        let e = acc.entry(r.opts.clone()).or_default();
        e.0 += r.seconds;
        e.1 += 1;
    }
    acc.into_iter().map(|(k, (s, n))| (k, s / n as f64)).collect()
}

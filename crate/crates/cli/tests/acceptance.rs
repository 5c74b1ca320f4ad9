//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use gcmeta::bench::{bomb, qbf, sc, BombInstance, BombVariant, QbfInstance, QbfLit, ScInstance};
use gcmeta::golden::compare;
use gcmeta::suite::sc_instance;
use gcmeta::verify::{check_integration, check_solver, check_transformation, random_hcf_program, random_pair, random_program, solve_meta, PairShape, ProgramShape};
use gcmeta::{brute_force, build_check_prime, integrate, parse, parse_literal, project, solve_program, tr, Budget, Error, Program, SolveConfig, TransformOptions};
use gcmeta_cli::bench::{mean_by_opts, run_bench, BenchFamily};
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

const TRANSFORM_SEEDS: u64 = 500;
const PAIR_SEEDS: u64 = 200;
const QBF3_SEEDS: u64 = 50;

type Outcome = Result<String, String>;

fn budget() -> Budget {
    Budget::from_env()
}

fn e2s(e: Error) -> String {
    e.to_string()
}

fn c1_small_program() -> Outcome {
    let p = parse("a :- b.\nb :- a.\na.\nb.\n").map_err(e2s)?;
    let ab: BTreeSet<_> = ["a", "b"].iter().map(|s| parse_literal(s).unwrap()).collect();
    let direct: Vec<_> = brute_force(&p).map_err(e2s)?.into_iter().map(|s| s.literals).collect();
    if direct != vec![ab.clone()] {
        return Err(format!("program answer sets {direct:?}"));
    }
    let sets = solve_meta(&tr(&p, &TransformOptions::NONE).map_err(e2s)?, budget()).map_err(e2s)?;
    if sets.len() != 2 {
        return Err(format!("{} answer sets of the meta program", sets.len()));
    }
    for s in &sets {
        if project(s).map_err(e2s)? != ab {
            return Err("projection differs from {a, b}".into());
        }
    }
    let (fwd, back) = (parse_literal(r#"phi("a","b")"#).unwrap(), parse_literal(r#"phi("b","a")"#).unwrap());
    let orders: BTreeSet<(bool, bool)> = sets.iter().map(|s| (s.contains(&fwd), s.contains(&back))).collect();
    if orders != BTreeSet::from([(true, false), (false, true)]) {
        return Err(format!("phi pattern {orders:?}"));
    }
    Ok("2 meta answer sets, one per ordering of a and b".into())
}

fn c2_transformation() -> Outcome {
    let shape = ProgramShape::default();
    let mut checked = 0;
    for seed in 0..TRANSFORM_SEEDS {
        let p = random_hcf_program(seed, &shape);
        for o in TransformOptions::combinations() {
            if let Some(d) = check_transformation(&p, &o, budget()).map_err(e2s)? {
                return Err(format!("seed {seed} opts {o}: {d}\n{p}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{TRANSFORM_SEEDS} programs, {checked} checks"))
}

fn c3_integration() -> Outcome {
    let shape = PairShape::default();
    let mut checked = 0;
    for seed in 0..PAIR_SEEDS {
        let pair = random_pair(seed, &shape);
        for o in TransformOptions::combinations() {
            if let Some(d) = check_integration(&pair, &o, budget()).map_err(e2s)? {
                return Err(format!("seed {seed} opts {o}: {d}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{PAIR_SEEDS} pairs, {checked} checks"))
}

fn qbf_agree(q: &QbfInstance, opts: &[TransformOptions]) -> Result<(), String> {
    let truth = qbf::eval_qbf(q).map_err(e2s)?;
    let adhoc_sets = solve_program(&qbf::encode_qbf_adhoc(q).map_err(e2s)?, &SolveConfig::all().with_budget(budget())).map_err(e2s)?.0;
    let adhoc = qbf::witnesses_adhoc(q, &adhoc_sets);
    if adhoc != truth {
        return Err(format!("ad hoc {adhoc:?} vs truth table {truth:?} on {q:?}"));
    }
    let pair = qbf::encode_qbf(q);
    for o in opts {
        let got = qbf::witnesses_integrated(q, &solve_meta(&integrate(&pair, o).map_err(e2s)?, budget()).map_err(e2s)?);
        if got != truth {
            return Err(format!("integrated ({o}) {got:?} vs truth table {truth:?} on {q:?}"));
        }
    }
    Ok(())
}

// Literal k over variables x0 x1 y0 y1: variable k / 2, negative when k is odd.
fn qbf_terms() -> Vec<u8> {
    (1u8..=255)
        .filter(|m| {
            let lits = m.count_ones();
            let clash = (0..4).any(|v| m >> (2 * v) & 3 == 3);
            (1..=3).contains(&lits) && !clash
        })
        .collect()
}

// Renaming within a quantifier block and flipping polarities.
fn qbf_symmetry(m: u8, swap_x: bool, swap_y: bool, flips: u8) -> u8 {
    let mut out = 0u8;
    for k in 0..8 {
        if m >> k & 1 == 1 {
            let (mut v, neg) = (k / 2, (k % 2 == 1) ^ (flips >> (k / 2) & 1 == 1));
            if swap_x && v < 2 || swap_y && v >= 2 {
                v ^= 1;
            }
            out |= 1 << (2 * v + neg as usize);
        }
    }
    out
}

fn qbf_from_masks(terms: &[u8]) -> QbfInstance {
    const VARS: [&str; 4] = ["x0", "x1", "y0", "y1"];
    let terms = terms
        .iter()
        .map(|m| (0..8).filter(|k| m >> k & 1 == 1).map(|k| QbfLit { var: VARS[k / 2].into(), positive: k % 2 == 0 }).collect())
        .collect();
    QbfInstance::new(vec!["x0".into(), "x1".into()], vec!["y0".into(), "y1".into()], terms).expect("well formed")
}

fn is_orbit_representative(set: &[u8]) -> bool {
    for g in 0..64u8 {
        let mut img: Vec<u8> = set.iter().map(|&m| qbf_symmetry(m, g & 1 == 1, g & 2 == 2, g >> 2)).collect();
        img.sort();
        if img.as_slice() < set {
            return false;
        }
    }
    true
}

fn c4_qbf() -> Outcome {
    let all = TransformOptions::combinations();
    let example = QbfInstance::worked_example();
    let expected: BTreeSet<qbf::Assignment> = [false, true]
        .iter()
        .map(|&x1| [("x0".to_string(), false), ("x1".to_string(), x1)].into_iter().collect())
        .collect();
    if qbf::eval_qbf(&example).map_err(e2s)? != expected {
        return Err("worked instance truth table".into());
    }
    qbf_agree(&example, &all)?;

    let terms = qbf_terms();
    let n = terms.len();
    let mut exhaustive = 0;
    let mut sets: Vec<Vec<u8>> = vec![vec![]];
    for a in 0..n {
        sets.push(vec![terms[a]]);
        for b in a + 1..n {
            sets.push(vec![terms[a], terms[b]]);
            for c in b + 1..n {
                sets.push(vec![terms[a], terms[b], terms[c]]);
                for d in c + 1..n {
                    sets.push(vec![terms[a], terms[b], terms[c], terms[d]]);
                }
            }
        }
    }
    let total = sets.len();
    let one = [TransformOptions::ALL];
    for set in sets.iter().filter(|s| is_orbit_representative(s)) {
        qbf_agree(&qbf_from_masks(set), &one)?;
        exhaustive += 1;
    }
    // Up to two terms, every formula without symmetry reduction.
    let mut small = 0;
    for set in sets.iter().filter(|s| s.len() <= 2) {
        qbf_agree(&qbf_from_masks(set), &one)?;
        small += 1;
    }
    for seed in 0..QBF3_SEEDS {
        let q = qbf::gen_qbf(3, 3, 9, 3, seed).map_err(e2s)?;
        qbf_agree(&q, &all)?;
    }
    Ok(format!(
        "worked instance, {exhaustive} symmetry classes covering {total} formulas of up to 4 terms, {small} formulas of up to 2 terms, {QBF3_SEEDS} QBF-3"
    ))
}

fn c5_strategic() -> Outcome {
    let inst = ScInstance::worked_example();
    let pair = sc::encode_sc(&inst).map_err(e2s)?;
    let expected: BTreeSet<sc::CompanySet> = [vec!["barilla", "saiwa", "frutto"], vec!["barilla", "panino"]]
        .iter()
        .map(|v| v.iter().map(|s| s.to_string()).collect())
        .collect();
    for o in TransformOptions::combinations() {
        let got = sc::strat_sets(&solve_meta(&integrate(&pair, &o).map_err(e2s)?, budget()).map_err(e2s)?);
        if got != expected {
            return Err(format!("tabled instance ({o}): {got:?}"));
        }
    }
    let mut instances = 0;
    for n in 4..=8 {
        for seed in 0..4 {
            let inst = sc_instance(n, seed).map_err(e2s)?;
            let truth = sc::strategic_oracle(&inst).map_err(e2s)?;
            let solve = |p: &Program| solve_program(p, &SolveConfig::all().with_budget(budget())).map(|r| sc::strat_sets(&r.0)).map_err(e2s);
            let a1 = solve(&sc::encode_sc_adhoc1(&inst).map_err(e2s)?)?;
            let a2 = solve(&sc::encode_sc_adhoc2(&inst).map_err(e2s)?)?;
            let int = sc::strat_sets(&solve_meta(&integrate(&sc::encode_sc(&inst).map_err(e2s)?, &TransformOptions::ALL).map_err(e2s)?, budget()).map_err(e2s)?);
            if a1 != truth || a2 != truth || int != truth {
                return Err(format!("SC-{n} seed {seed}: oracle {truth:?}, integrated {int:?}, ad hoc {a1:?} / {a2:?}"));
            }
            instances += 1;
        }
    }
    Ok(format!("tabled instance under 8 option sets, {instances} generated instances"))
}

fn c6_planning() -> Outcome {
    let inst = BombInstance::worked_example();
    let pair = bomb::encode_bomb(&inst).map_err(e2s)?;
    let want: BTreeSet<_> = ["dunk(0)", "flush(1)", "-dunk(1)", "-flush(0)"].iter().map(|s| parse_literal(s).unwrap()).collect();
    for o in TransformOptions::combinations() {
        let sets = solve_meta(&integrate(&pair, &o).map_err(e2s)?, budget()).map_err(e2s)?;
        if sets.len() != 1 {
            return Err(format!("{} answer sets ({o})", sets.len()));
        }
        let actions: BTreeSet<_> = sets[0].restrict_to_predicates(&["dunk", "flush"]);
        if actions != want {
            return Err(format!("actions {actions:?} ({o})"));
        }
    }
    let mut runs = 0;
    for v in [BombVariant::Btc, BombVariant::Btuc] {
        for h in 1..=3 {
            let inst = BombInstance::new(v, 1, h).map_err(e2s)?;
            let oracle = bomb::conformant_plans(&inst).map_err(e2s)?;
            let pair = bomb::encode_bomb(&inst).map_err(e2s)?;
            for o in TransformOptions::combinations() {
                let got = bomb::extract_plans(&inst, &solve_meta(&integrate(&pair, &o).map_err(e2s)?, budget()).map_err(e2s)?);
                if got != oracle {
                    return Err(format!("{v}(1) horizon {h} ({o}): {got:?} vs {oracle:?}"));
                }
                runs += 1;
            }
        }
    }
    Ok(format!("single plan dunk(0), flush(1); {runs} BTC/BTUC runs equal the simulated plans"))
}

fn corpus(name: &str) -> Result<Program, String> {
    let path = format!("{}/../core/tests/corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    parse(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?).map_err(e2s)
}

fn c7_golden() -> Outcome {
    let opts = |s: &str| TransformOptions::parse(s).unwrap();
    let fig = integrate(&qbf::encode_qbf(&QbfInstance::worked_example()), &opts("mod,dep")).map_err(e2s)?;
    let d = compare(&fig, &corpus("qbf_integrated.dl")?, None);
    if !d.is_empty() {
        return Err(format!("QBF listing\n{d}"));
    }
    let inst = BombInstance::worked_example();
    let guess = parse(&bomb::bomb_source(&inst).0).map_err(e2s)?;
    let check = build_check_prime(&bomb::encode_bomb(&inst).map_err(e2s)?, &opts("mod")).map_err(e2s)?;
    let d = compare(&guess.concat(&check).map_err(e2s)?, &corpus("bomb_integrated.dl")?, Some(&opts("mod")));
    if !d.is_empty() {
        return Err(format!("bomb listing\n{d}"));
    }
    let inst = ScInstance::worked_example();
    let guess = sc::sc_programs(&inst).map_err(e2s)?.0;
    let check = build_check_prime(&sc::encode_sc(&inst).map_err(e2s)?, &opts("mod")).map_err(e2s)?;
    let d = compare(&guess.concat(&check).map_err(e2s)?, &corpus("sc_integrated.dl")?, Some(&opts("mod")));
    if !d.is_empty() {
        return Err(format!("SC listing\n{d}"));
    }
    Ok("QBF, bomb and SC listings match".into())
}

fn c8_trend() -> Outcome {
    let matrix = [TransformOptions::NONE, TransformOptions::ALL];
    let mut details = Vec::new();
    for (family, sizes) in [(BenchFamily::Qbf, vec![2, 3, 4]), (BenchFamily::Sc, vec![4, 5, 6, 7, 8])] {
        let rows = run_bench(family, &sizes, &[0, 1, 2], &matrix, budget(), None).map_err(e2s)?;
        let means = mean_by_opts(&rows);
        let (none, all) = (means[&TransformOptions::NONE.label()], means[&TransformOptions::ALL.label()]);
        let timeouts = rows.iter().filter(|r| r.answersets.is_none()).count();
        if rows.iter().any(|r| r.answersets.is_none() && r.opts == TransformOptions::ALL.label()) {
            return Err(format!("{}: budget exceeded with all optimizations", family.name()));
        }
        if all > none {
            return Err(format!("{}: mean {all:.4}s with all > {none:.4}s with none", family.name()));
        }
        details.push(format!("{} none {none:.4}s all {all:.4}s ({timeouts} timeouts)", family.name()));
    }
    // Projections under every option set, on runs that finish in budget.
    let mut skipped = 0;
    let mut compared = 0;
    for n in 2..=4 {
        for seed in 0..3 {
            let q = qbf::gen_qbf(n, n, 3 * n, 3.min(2 * n), seed).map_err(e2s)?;
            let pair = qbf::encode_qbf(&q);
            let mut seen = BTreeSet::new();
            for o in TransformOptions::combinations() {
                seen.insert(qbf::witnesses_integrated(&q, &solve_meta(&integrate(&pair, &o).map_err(e2s)?, budget()).map_err(e2s)?));
            }
            if seen.len() != 1 {
                return Err(format!("QBF-{n} seed {seed}: option sets disagree"));
            }
            compared += 1;
        }
    }
    for n in 4..=8 {
        for seed in 0..3 {
            let inst = sc_instance(n, seed).map_err(e2s)?;
            let pair = sc::encode_sc(&inst).map_err(e2s)?;
            let mut seen = BTreeSet::new();
            for o in TransformOptions::combinations() {
                match solve_meta(&integrate(&pair, &o).map_err(e2s)?, budget()) {
                    Ok(sets) => {
                        seen.insert(sc::strat_sets(&sets));
                    }
                    Err(Error::BudgetExceeded { .. }) => skipped += 1,
                    Err(e) => return Err(e.to_string()),
                }
            }
            if seen.len() != 1 {
                return Err(format!("SC-{n} seed {seed}: option sets disagree"));
            }
            compared += 1;
        }
    }
    details.push(format!("{compared} instances agree across option sets ({skipped} runs out of budget)"));
    Ok(details.join("; "))
}

fn c9_solver() -> Outcome {
    let shape = ProgramShape::default();
    let mut hcf = 0;
    for seed in 0..TRANSFORM_SEEDS {
        let p = random_program(seed, &shape);
        hcf += p.flags().hcf as usize;
        if let Some(d) = check_solver(&p, budget()).map_err(e2s)? {
            return Err(format!("seed {seed}: {d}\n{p}"));
        }
    }
    let out = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-mutant");
    let _ = std::fs::remove_dir_all(&out);
    let res = std::process::Command::new(env!("CARGO_BIN_EXE_gcmeta"))
        .args(["verify", "--family", "random", "--sizes", "4", "--seeds", "0..30", "--opt", "none", "--omit-line", "17", "--out"])
        .arg(&out)
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&res.stdout);
    if res.status.code() != Some(1) || !stdout.contains("FAIL random/transformation") {
        return Err(format!("mutant not caught: exit {:?}\n{stdout}", res.status.code()));
    }
    let cx = std::fs::read_to_string(out.join("random-transformation.dl")).map_err(|e| e.to_string())?;
    parse(&cx).map_err(e2s)?;
    Ok(format!("{TRANSFORM_SEEDS} programs ({hcf} HCF) agree with brute force; mutant without the consistency rule caught"))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome, Option<u64>); 9] = [
        (1, "small-program", c1_small_program, Some(5)),
        (2, "transformation-suite", c2_transformation, Some(600)),
        (3, "integration-suite", c3_integration, None),
        (4, "qbf-agreement", c4_qbf, Some(300)),
        (5, "strategic-companies", c5_strategic, None),
        (6, "conformant-planning", c6_planning, None),
        (7, "golden-listings", c7_golden, None),
        (8, "optimization-trend", c8_trend, None),
        (9, "solver-self-check", c9_solver, None),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (n, name, f, limit) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let t = Instant::now();
        let mut outcome = f();
        let took = t.elapsed();
        if let (Ok(_), Some(s)) = (&outcome, limit) {
            if took > Duration::from_secs(s) {
                outcome = Err(format!("took {:.1}s, limit {s}s", took.as_secs_f64()));
            }
        }
        match outcome {
            Ok(d) => println!("PASS {n} {name}: {d} [{:.1}s]", took.as_secs_f64()),
            Err(d) => {
                failed += 1;
                println!("FAIL {n} {name}: {d} [{:.1}s]", took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

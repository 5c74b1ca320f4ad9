//! Random program generators and the oracle-based property checks used by
//! the test suites and the `verify` subcommand.

use crate::error::Result;
use crate::integrate::{check_with, integrate, integrate_np, project_onto, GuessCheckPair};
use crate::program::{Atom, Literal, Program, Rule};
use crate::solve::{brute_force, hcf_check, is_consistent, solve_with, AnswerSet, Budget, SolveConfig};
use crate::transform::{ground_meta, notok, omega_with, project_literals, tr, TransformOptions};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Shape of random ground programs.
#[derive(Clone, Copy, Debug)]
pub struct ProgramShape {
    pub atoms: usize,
    pub max_rules: usize,
    pub max_head: usize,
    pub max_pbody: usize,
    pub max_nbody: usize,
    /// Probability that a literal is strongly negated.
    pub strong_neg: f64,
}

impl Default for ProgramShape {
    fn default() -> Self {
        ProgramShape { atoms: 6, max_rules: 8, max_head: 3, max_pbody: 2, max_nbody: 2, strong_neg: 0.2 }
    }
}

fn atom_name(i: usize) -> String {
    ((b'a' + i as u8) as char).to_string()
}

fn random_literal(rng: &mut ChaCha8Rng, names: &[String], strong_neg: f64) -> Literal {
    let a = Atom::prop(names.choose(rng).expect("non-empty").clone());
    if rng.gen_bool(strong_neg) {
        Literal::neg(a)
    } else {
        Literal::pos(a)
    }
}

fn random_rule(rng: &mut ChaCha8Rng, head_names: &[String], body_names: &[String], shape: &ProgramShape) -> Rule {
    // Mostly non-empty heads; constraints now and then.
    let nh = if rng.gen_bool(0.12) { 0 } else { rng.gen_range(1..=shape.max_head) };
    let head: Vec<Literal> = (0..nh).map(|_| random_literal(rng, head_names, shape.strong_neg)).collect();
    let np = rng.gen_range(0..=shape.max_pbody);
    let nn = rng.gen_range(0..=shape.max_nbody);
    let mut pos: Vec<Literal> = (0..np).map(|_| random_literal(rng, body_names, shape.strong_neg)).collect();
    let neg: Vec<Literal> = (0..nn).map(|_| random_literal(rng, body_names, shape.strong_neg)).collect();
    if head.is_empty() && pos.is_empty() && neg.is_empty() {
        pos.push(random_literal(rng, body_names, shape.strong_neg));
    }
    Rule::from_parts(head, pos, neg)
}

/// A random ground program, not necessarily HCF.
pub fn random_program(seed: u64, shape: &ProgramShape) -> Program {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..shape.atoms.max(1)).map(atom_name).collect();
    let n = rng.gen_range(1..=shape.max_rules.max(1));
    let rules = (0..n).map(|_| random_rule(&mut rng, &names, &names, shape)).collect();
    Program::new(rules).expect("fresh names")
}

/// A random head-cycle-free program; seeds producing non-HCF programs are
/// skipped deterministically.
pub fn random_hcf_program(seed: u64, shape: &ProgramShape) -> Program {
    let mut k = 0u64;
    loop {
        let p = random_program(seed.wrapping_mul(1_000_003).wrapping_add(k), shape);
        if p.flags().hcf {
            return p;
        }
        k += 1;
    }
}

/// Shape of random guess/check pairs.
#[derive(Clone, Copy, Debug)]
pub struct PairShape {
    pub guess_atoms: usize,
    pub check_atoms: usize,
    pub max_guess_rules: usize,
    pub max_check_rules: usize,
}

impl Default for PairShape {
    fn default() -> Self {
        PairShape { guess_atoms: 5, check_atoms: 4, max_guess_rules: 4, max_check_rules: 6 }
    }
}

/// A random pair with Lit(guess) a splitting set and an HCF check.
pub fn random_pair(seed: u64, shape: &PairShape) -> GuessCheckPair {
    let mut k = 0u64;
    loop {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_033).wrapping_add(k));
        k += 1;
        let gnames: Vec<String> = (0..shape.guess_atoms).map(|i| format!("g{i}")).collect();
        let cnames: Vec<String> = (0..shape.check_atoms).map(|i| format!("c{i}")).collect();
        let gshape = ProgramShape { max_head: 2, max_pbody: 1, max_nbody: 1, strong_neg: 0.3, ..ProgramShape::default() };
        let ng = rng.gen_range(1..=shape.max_guess_rules);
        let mut grules: Vec<Rule> = Vec::new();
        for _ in 0..ng {
            if rng.gen_bool(0.6) {
                // a choice `g v -g.` or `g v h.`
                let a = Atom::prop(gnames.choose(&mut rng).expect("names").clone());
                let other = if rng.gen_bool(0.5) {
                    Literal::neg(a.clone())
                } else {
                    Literal::pos(Atom::prop(gnames.choose(&mut rng).expect("names").clone()))
                };
                grules.push(Rule::from_parts(vec![Literal::pos(a), other], vec![], vec![]));
            } else {
                grules.push(random_rule(&mut rng, &gnames, &gnames, &gshape));
            }
        }
        let cshape = ProgramShape { max_head: 2, max_pbody: 2, max_nbody: 2, strong_neg: 0.25, ..ProgramShape::default() };
        let body_names: Vec<String> = gnames.iter().chain(&cnames).cloned().collect();
        let nc = rng.gen_range(1..=shape.max_check_rules);
        let crules: Vec<Rule> = (0..nc).map(|_| random_rule(&mut rng, &cnames, &body_names, &cshape)).collect();
        let guess = Program::new(grules).expect("names");
        let check = Program::new(crules).expect("names");
        if !check.flags().hcf {
            continue;
        }
        let pair = GuessCheckPair::new(guess, check).expect("ground");
        if pair.violations().is_empty() {
            return pair;
        }
    }
}

/// Solves a meta-level (non-ground) program.
pub fn solve_meta(p: &Program, budget: Budget) -> Result<Vec<AnswerSet>> {
    let g = ground_meta(p)?;
    Ok(solve_with(&g, &SolveConfig::all().with_budget(budget))?.0)
}

/// Checks the correspondence between tr(p) and p for one option set.
/// Returns a description of the first violated property.
pub fn check_transformation(p: &Program, opts: &TransformOptions, budget: Budget) -> Result<Option<String>> {
    let expected: BTreeSet<BTreeSet<Literal>> = brute_force(p)?.into_iter().map(|s| s.literals).collect();
    let sets = solve_meta(&tr(p, opts)?, budget)?;
    if sets.is_empty() {
        return Ok(Some("tr(p) has no answer set".into()));
    }
    let omega = omega_with(p, opts)?;
    if let Some(s) = sets.iter().find(|s| !s.literals.is_subset(&omega.literals)) {
        let extra: Vec<String> = s.literals.difference(&omega.literals).take(3).map(ToString::to_string).collect();
        return Ok(Some(format!("answer set not contained in omega (e.g. {})", extra.join(", "))));
    }
    let nk = notok();
    let mut got = BTreeSet::new();
    for s in sets.iter().filter(|s| !s.contains(&nk)) {
        got.insert(project_literals(&s.literals)?);
    }
    if got != expected {
        return Ok(Some(format!("projections {} differ from answer sets {}", show(&got), show(&expected))));
    }
    if expected.is_empty() && (sets.len() != 1 || sets[0] != omega) {
        return Ok(Some(format!("inconsistent program but tr(p) has {} answer sets other than omega", sets.len())));
    }
    Ok(None)
}

fn show(family: &BTreeSet<BTreeSet<Literal>>) -> String {
    let parts: Vec<String> = family
        .iter()
        .map(|s| format!("{{{}}}", s.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", parts.join(" "))
}

/// The guesses S with no answer set for check ∪ S (brute force on both sides).
pub fn surviving_guesses(pair: &GuessCheckPair) -> Result<BTreeSet<BTreeSet<Literal>>> {
    let mut out = BTreeSet::new();
    for s in brute_force(&pair.guess)? {
        if brute_force(&check_with(&pair.check, &s.literals)?)?.is_empty() {
            out.insert(s.literals);
        }
    }
    Ok(out)
}

/// Guesses S for which check ∪ S has some answer set.
pub fn accepted_guesses(pair: &GuessCheckPair) -> Result<BTreeSet<BTreeSet<Literal>>> {
    let mut out = BTreeSet::new();
    for s in brute_force(&pair.guess)? {
        if !brute_force(&check_with(&pair.check, &s.literals)?)?.is_empty() {
            out.insert(s.literals);
        }
    }
    Ok(out)
}

/// Checks integration against the brute-force guess filter for one pair and option set, including
/// that every surviving guess extends to exactly one answer set.
pub fn check_integration(pair: &GuessCheckPair, opts: &TransformOptions, budget: Budget) -> Result<Option<String>> {
    let expected = surviving_guesses(pair)?;
    let sets = solve_meta(&integrate(pair, opts)?, budget)?;
    let onto = pair.guess_literals();
    let mut got = BTreeSet::new();
    for s in &sets {
        if !got.insert(project_onto(&s.literals, &onto)) {
            return Ok(Some("a guess extends to more than one answer set".into()));
        }
    }
    if got != expected {
        return Ok(Some(format!("projections {} differ from surviving guesses {}", show(&got), show(&expected))));
    }
    Ok(None)
}

pub fn check_integration_np(pair: &GuessCheckPair, budget: Budget) -> Result<Option<String>> {
    let expected = accepted_guesses(pair)?;
    let p = integrate_np(pair)?;
    let g = crate::ground::Grounder::new(crate::ground::GroundMode::Relevant).ground(&p)?.0;
    let sets = solve_with(&g, &SolveConfig::all().with_budget(budget))?.0;
    let onto = pair.guess_literals();
    let got: BTreeSet<_> = sets.iter().map(|s| project_onto(&s.literals, &onto)).collect();
    if got != expected {
        return Ok(Some(format!("projections {} differ from accepted guesses {}", show(&got), show(&expected))));
    }
    Ok(None)
}

/// Solver against brute force, plus the HCF characterization on HCF input.
pub fn check_solver(p: &Program, budget: Budget) -> Result<Option<String>> {
    let expected = brute_force(p)?;
    let (got, _) = solve_with(p, &SolveConfig::all().with_budget(budget))?;
    if got != expected {
        return Ok(Some("solver differs from brute force".into()));
    }
    for s in &got {
        if !crate::solve::satisfies(p, &s.literals) {
            return Ok(Some("answer set violates a rule".into()));
        }
    }
    if p.flags().hcf {
        let lits: Vec<Literal> = p.literals().into_iter().collect();
        if lits.len() <= 16 {
            let mut by_hcf = Vec::new();
            for mask in 0u32..(1 << lits.len()) {
                let s: BTreeSet<Literal> = (0..lits.len()).filter(|i| mask >> i & 1 == 1).map(|i| lits[i].clone()).collect();
                if is_consistent(&s) && hcf_check(p, &s)? {
                    by_hcf.push(s);
                }
            }
            by_hcf.sort();
            let want: Vec<BTreeSet<Literal>> = expected.iter().map(|s| s.literals.clone()).collect();
            if by_hcf != want {
                return Ok(Some("hcf_check differs from brute force".into()));
            }
        }
    }
    Ok(None)
}

/// Greedy shrinking: removes rules, then body and head literals, while
/// `fails` keeps holding.
pub fn minimize(p: &Program, fails: &dyn Fn(&Program) -> bool) -> Program {
    let mut cur: Vec<Rule> = p.rules().to_vec();
    let build = |rules: &[Rule]| Program::with_names(rules.to_vec()).ok();
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < cur.len() {
            let mut cand = cur.clone();
            cand.remove(i);
            if build(&cand).is_some_and(|q| fails(&q)) {
                cur = cand;
                changed = true;
            } else {
                i += 1;
            }
        }
        for ri in 0..cur.len() {
            let mut j = 0;
            while j < cur[ri].body.len() {
                let mut cand = cur.clone();
                cand[ri].body.remove(j);
                if build(&cand).is_some_and(|q| fails(&q)) {
                    cur = cand;
                    changed = true;
                } else {
                    j += 1;
                }
            }
            let mut j = 0;
            while cur[ri].head.len() > 1 && j < cur[ri].head.len() {
                let mut cand = cur.clone();
                cand[ri].head.remove(j);
                if build(&cand).is_some_and(|q| fails(&q)) {
                    cur = cand;
                    changed = true;
                } else {
                    j += 1;
                }
            }
        }
        if !changed {
            return build(&cur).expect("names stay unique");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let s = ProgramShape::default();
        assert_eq!(random_hcf_program(7, &s), random_hcf_program(7, &s));
        assert!(random_hcf_program(7, &s).flags().hcf);
        let ps = PairShape::default();
        let p = random_pair(3, &ps);
        assert_eq!(p, random_pair(3, &ps));
        assert!(p.violations().is_empty());
    }

    #[test]
    fn small_transformation_sample() {
        let s = ProgramShape::default();
        for seed in 0..40 {
            let p = random_hcf_program(seed, &s);
            for opts in TransformOptions::combinations() {
                assert_eq!(check_transformation(&p, &opts, Budget::default()).unwrap(), None, "seed {seed} {opts}\n{p}");
            }
        }
    }

    #[test]
    fn small_integration_sample() {
        let s = PairShape::default();
        for seed in 0..40 {
            let pair = random_pair(seed, &s);
            for opts in TransformOptions::combinations() {
                assert_eq!(check_integration(&pair, &opts, Budget::default()).unwrap(), None, "seed {seed} {opts}");
            }
            assert_eq!(check_integration_np(&pair, Budget::default()).unwrap(), None);
        }
    }

    #[test]
    fn minimize_shrinks() {
        let p = crate::text::parse("a. b :- a. c v d :- b, not e. :- c, d.").unwrap();
        let m = minimize(&p, &|q| q.literals().contains(&Literal::prop("d")));
        assert_eq!(m.len(), 1);
    }
}

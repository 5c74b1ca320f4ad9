use gcmeta::program::splitting_violations;
use gcmeta::solve::satisfies;
use gcmeta::verify::{random_hcf_program, random_pair, random_program, PairShape, ProgramShape};
use gcmeta::{
    brute_force, classify, ground, parse, reduct, solve_program, stratified_eval, tr, Literal, Program, SolveConfig,
    TransformOptions,
};
use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

fn shape(atoms: usize) -> ProgramShape {
    ProgramShape { atoms, ..ProgramShape::default() }
}

fn rule_set(p: &Program) -> BTreeSet<String> {
    p.rules().iter().map(|r| r.to_string()).collect()
}

fn reorder(p: &Program, rotate: usize, reverse: bool) -> Program {
    let mut rules = p.rules().to_vec();
    let k = rotate % rules.len().max(1);
    rules.rotate_left(k);
    if reverse {
        rules.reverse();
    }
    Program::with_names(rules).unwrap()
}

// Head-cycle-freeness straight from the definition: no rule has two head
// literals that reach each other in the positive dependency graph.
fn hcf_by_definition(p: &Program) -> bool {
    let mut succ: BTreeMap<&Literal, BTreeSet<&Literal>> = BTreeMap::new();
    for r in p.rules() {
        for b in r.pbody() {
            succ.entry(b).or_default().extend(r.head.iter());
        }
    }
    let reaches = |from: &Literal, to: &Literal| {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<&Literal> = succ.get(from).map(|s| s.iter().copied().collect()).unwrap_or_default();
        while let Some(l) = stack.pop() {
            if l == to {
                return true;
            }
            if seen.insert(l) {
                stack.extend(succ.get(l).into_iter().flatten().copied());
            }
        }
        false
    };
    p.rules().iter().all(|r| {
        r.head.iter().all(|a| r.head.iter().all(|b| a == b || !(reaches(a, b) && reaches(b, a))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_fixpoint(seed in any::<u64>(), atoms in 1usize..7) {
        let p = random_program(seed, &shape(atoms));
        let once = parse(&p.to_string()).unwrap();
        let twice = parse(&once.to_string()).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(rule_set(&once), rule_set(&p));
    }

    #[test]
    fn reduct_is_positive_and_smaller(seed in any::<u64>(), mask in any::<u16>()) {
        let p = random_program(seed, &shape(5));
        let lits: Vec<Literal> = p.literals().into_iter().collect();
        let s: BTreeSet<Literal> = lits.iter().enumerate().filter(|(i, _)| mask >> (i % 16) & 1 == 1).map(|(_, l)| l.clone()).collect();
        let r = reduct(&p, &s).unwrap();
        prop_assert!(r.flags().positive);
        prop_assert!(r.len() <= p.len());
    }

    #[test]
    fn classify_is_stable(seed in any::<u64>(), rotate in 0usize..8, reverse in any::<bool>()) {
        let p = random_program(seed, &shape(5));
        prop_assert_eq!(classify(&p), classify(&p));
        prop_assert_eq!(classify(&p), classify(&reorder(&p, rotate, reverse)));
    }

    #[test]
    fn hcf_flag_matches_definition(seed in any::<u64>(), atoms in 1usize..=4) {
        let p = random_program(seed, &ProgramShape { max_pbody: 3, ..shape(atoms) });
        prop_assert_eq!(p.flags().hcf, hcf_by_definition(&p), "{}", p);
    }

    #[test]
    fn splitting_survives_smaller_checks(seed in any::<u64>(), keep in any::<u8>()) {
        let pair = random_pair(seed, &PairShape::default());
        prop_assert!(splitting_violations(&pair.guess, &pair.check).is_empty());
        let sub: Vec<_> = pair.check.rules().iter().enumerate().filter(|(i, _)| keep >> (i % 8) & 1 == 1).map(|(_, r)| r.clone()).collect();
        let sub = Program::with_names(sub).unwrap();
        prop_assert!(splitting_violations(&pair.guess, &sub).is_empty());
    }

    #[test]
    fn grounding_ground_input_is_identity(seed in any::<u64>()) {
        let p = random_program(seed, &shape(5));
        let (g, _) = ground(&p).unwrap();
        prop_assert_eq!(rule_set(&g), rule_set(&p));
    }

    #[test]
    fn solver_ignores_rule_order(seed in any::<u64>(), rotate in 0usize..8, reverse in any::<bool>()) {
        let p = random_program(seed, &shape(5));
        let a = solve_program(&p, &SolveConfig::all()).unwrap().0;
        let b = solve_program(&reorder(&p, rotate, reverse), &SolveConfig::all()).unwrap().0;
        let fam = |v: &[gcmeta::AnswerSet]| v.iter().map(|s| s.literals.clone()).collect::<BTreeSet<_>>();
        prop_assert_eq!(fam(&a), fam(&b));
        for s in &a {
            prop_assert!(satisfies(&p, &s.literals));
        }
    }

    #[test]
    fn stratified_programs_have_one_answer_set(seed in any::<u64>()) {
        let p = random_program(seed, &ProgramShape { max_head: 1, strong_neg: 0.0, ..shape(5) });
        prop_assume!(p.flags().stratified && !p.has_constraints());
        let sets = solve_program(&p, &SolveConfig::all()).unwrap().0;
        prop_assert_eq!(sets.len(), 1);
        prop_assert_eq!(&stratified_eval(&p).unwrap().literals, &sets[0].literals);
    }

    #[test]
    fn meta_program_shape(seed in any::<u64>(), opt in 0usize..8) {
        let p = random_hcf_program(seed, &shape(5));
        let o = TransformOptions::combinations()[opt];
        let t = tr(&p, &o).unwrap();
        prop_assert!(!t.has_strong_negation());
        prop_assert!(!t.has_constraints());
        if o == TransformOptions::NONE {
            let occurrences: usize = p.rules().iter().map(|r| r.head.len() + r.body.len()).sum();
            prop_assert!(t.len() <= 42 + 2 * occurrences);
        }
    }

    #[test]
    fn base_transformation_is_modular(seed in any::<u64>(), cut in 0usize..8) {
        let p = random_hcf_program(seed, &shape(5));
        let cut = cut.min(p.len());
        let (a, b) = p.rules().split_at(cut);
        let (a, b) = (Program::with_names(a.to_vec()).unwrap(), Program::with_names(b.to_vec()).unwrap());
        let whole = rule_set(&tr(&p, &TransformOptions::NONE).unwrap());
        let mut parts = rule_set(&tr(&a, &TransformOptions::NONE).unwrap());
        parts.extend(rule_set(&tr(&b, &TransformOptions::NONE).unwrap()));
        prop_assert_eq!(whole, parts);
    }
}

#[test]
fn solver_matches_brute_force_on_fixed_cases() {
    for (text, n) in [("a v b.", 2), ("a :- not b. b :- not a.", 2), ("a :- not a.", 0), ("a v -a. :- a.", 1), ("a :- b. b :- a. a.", 1)] {
        let p = parse(text).unwrap();
        assert_eq!(brute_force(&p).unwrap().len(), n, "{text}");
        assert_eq!(solve_program(&p, &SolveConfig::all()).unwrap().0.len(), n, "{text}");
    }
}

#[test]
fn listings_parse_and_round_trip() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/corpus");
    let mut texts: Vec<String> = std::fs::read_dir(dir).unwrap().map(|e| std::fs::read_to_string(e.unwrap().path()).unwrap()).collect();
    texts.extend([gcmeta::bench::sc::SC_GUESS, gcmeta::bench::sc::SC_CHECK].map(String::from));
    for t in texts {
        let p = parse(&t).unwrap();
        assert_eq!(parse(&p.to_string()).unwrap(), p);
    }
}

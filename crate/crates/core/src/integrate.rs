//! Combining a guess program with a check program into one program whose
//! answer sets are the guesses for which the check has no answer set.

use crate::error::{Error, Result};
use crate::program::{splitting_violations, Atom, BodyItem, Literal, Program, Rule, Term};
use crate::transform::{check_vocabulary, meta_lines, meta_lit, notok, pa_rule, reify_rule, satisfaction_rule, strip_critical, TransformOptions};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuessCheckPair {
    pub guess: Program,
    pub check: Program,
}

impl GuessCheckPair {
    pub fn new(guess: Program, check: Program) -> Result<GuessCheckPair> {
        guess.require_ground()?;
        check.require_ground()?;
        Ok(GuessCheckPair { guess, check })
    }

    /// Lit(guess).
    pub fn guess_literals(&self) -> BTreeSet<Literal> {
        self.guess.literals()
    }

    pub fn violations(&self) -> Vec<Literal> {
        splitting_violations(&self.guess, &self.check)
    }

    /// Predicates whose body occurrences in check rules count as guess
    /// conditions: they occur in guess and in no check head.
    pub fn guess_predicates(&self) -> BTreeSet<String> {
        let check_heads = self.check.head_predicates();
        self.guess.predicates().into_iter().filter(|p| !check_heads.contains(p)).collect()
    }
}

/// The body of a check rule partitioned into its check part and its guess
/// part `body_guess(r)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BodySplit {
    pub rule: Term,
    pub check_pos: Vec<Literal>,
    pub check_neg: Vec<Literal>,
    pub guess_pos: Vec<Literal>,
    pub guess_neg: Vec<Literal>,
}

impl BodySplit {
    /// `body_guess(r)` as body items.
    pub fn guard(&self) -> Vec<BodyItem> {
        self.guess_pos.iter().cloned().map(BodyItem::Pos).chain(self.guess_neg.iter().cloned().map(BodyItem::Neg)).collect()
    }

    /// The rule with its guess part removed.
    fn check_rule(&self, r: &Rule) -> Rule {
        let mut c = Rule::from_parts(r.head.clone(), self.check_pos.clone(), self.check_neg.clone());
        c.name = r.name.clone();
        c.labelled = r.labelled;
        c
    }
}

pub fn split_bodies(pair: &GuessCheckPair) -> Vec<BodySplit> {
    let gp = pair.guess_predicates();
    pair.check
        .rules()
        .iter()
        .map(|r| {
            let (guess_pos, check_pos) = r.pbody().cloned().partition(|l: &Literal| gp.contains(&l.atom.pred));
            let (guess_neg, check_neg) = r.nbody().cloned().partition(|l: &Literal| gp.contains(&l.atom.pred));
            BodySplit { rule: r.name.clone(), check_pos, check_neg, guess_pos, guess_neg }
        })
        .collect()
}

/// Renames every check-head predicate that also occurs in guess to a fresh
/// `p_` and adds bridge rules `p_(t) :- p(t)` for the guess literals of `p`.
/// Returns the new pair and the renaming.
pub fn enforce_splitting(pair: &GuessCheckPair) -> Result<(GuessCheckPair, BTreeMap<String, String>)> {
    let guess_preds = pair.guess.predicates();
    let clash: Vec<String> = pair.check.head_predicates().into_iter().filter(|p| guess_preds.contains(p)).collect();
    if clash.is_empty() {
        return Ok((pair.clone(), BTreeMap::new()));
    }
    let mut used: HashSet<String> = guess_preds.iter().cloned().collect();
    used.extend(pair.check.predicates());
    let mut map = BTreeMap::new();
    for p in clash {
        let mut fresh = format!("{p}_");
        while used.contains(&fresh) {
            fresh.push('_');
        }
        used.insert(fresh.clone());
        map.insert(p, fresh);
    }
    let rename = |l: &Literal| -> Literal {
        match map.get(&l.atom.pred) {
            Some(n) => Literal { neg: l.neg, atom: Atom::new(n.clone(), l.atom.args.clone()) },
            None => l.clone(),
        }
    };
    let mut rules: Vec<Rule> = pair
        .check
        .rules()
        .iter()
        .map(|r| {
            let mut r2 = r.clone();
            r2.head = r.head.iter().map(rename).collect();
            r2.body = r
                .body
                .iter()
                .map(|b| match b {
                    BodyItem::Pos(l) => BodyItem::Pos(rename(l)),
                    BodyItem::Neg(l) => BodyItem::Neg(rename(l)),
                    other => other.clone(),
                })
                .collect();
            r2
        })
        .collect();
    let mut taken: HashSet<Term> = rules.iter().map(|r| r.name.clone()).collect();
    let mut next = rules.len() as i64;
    for l in pair.guess_literals() {
        if map.contains_key(&l.atom.pred) {
            let mut b = Rule::from_parts(vec![rename(&l)], vec![l.clone()], Vec::new());
            loop {
                next += 1;
                if taken.insert(Term::Int(next)) {
                    break;
                }
            }
            b.name = Term::Int(next);
            rules.push(b);
        }
    }
    let check = Program::with_names(rules)?;
    Ok((GuessCheckPair { guess: pair.guess.clone(), check }, map))
}

/// Literals certain to be true in every answer set of `guess`: its facts.
fn guess_facts(guess: &Program) -> BTreeSet<Literal> {
    guess.rules().iter().filter(|r| r.is_fact()).map(|r| r.head[0].clone()).collect()
}

fn guard_certain(s: &BodySplit, facts: &BTreeSet<Literal>, guess_heads: &BTreeSet<Literal>) -> bool {
    s.guess_pos.iter().all(|l| facts.contains(l)) && s.guess_neg.iter().all(|l| !guess_heads.contains(l))
}

/// Check′: guarded facts, the meta program (with guarded per-rule rules
/// under `opt_mod`) and `:- not notok.`
pub fn build_check_prime(pair: &GuessCheckPair, opts: &TransformOptions) -> Result<Program> {
    let v = pair.violations();
    if !v.is_empty() {
        let names: Vec<String> = v.iter().map(ToString::to_string).collect();
        return Err(Error::Precondition(format!("guess literals occur in check heads: {}", names.join(", "))));
    }
    check_vocabulary(&pair.guess)?;
    check_vocabulary(&pair.check)?;
    let splits = split_bodies(pair);
    let live: Vec<(&Rule, &BodySplit)> = pair.check.rules().iter().zip(&splits).filter(|(r, _)| !r.is_tautology()).collect();
    let heads: BTreeSet<Literal> = live.iter().flat_map(|(r, _)| r.head.iter().cloned()).collect();
    let facts = guess_facts(&pair.guess);
    let guess_heads = pair.guess.head_literals();
    let unconditional: BTreeSet<Literal> = live
        .iter()
        .filter(|(_, s)| guard_certain(s, &facts, &guess_heads))
        .flat_map(|(r, _)| r.head.iter().cloned())
        .collect();

    let mut rules = Vec::new();
    let mut atoms = HashSet::new();
    for &(r, s) in &live {
        let c = s.check_rule(r);
        let guard = s.guard();
        if opts.opt_mod && r.is_constraint() {
            for l in &s.check_neg {
                if heads.contains(l) && !unconditional.contains(l) {
                    rules.push(Rule::new(vec![meta_lit("n", l, &r.name)], guard.clone()));
                }
            }
        } else if c.head.is_empty() && c.body.is_empty() {
            // Nothing left to reify: the constraint is violated exactly when its guard holds.
            rules.push(Rule::new(vec![notok()], guard));
        } else {
            reify_rule(&c, &guard, true, &mut atoms, &mut rules);
        }
    }
    if opts.opt_mod {
        for &(r, s) in &live {
            let c = s.check_rule(r);
            let c = if c.is_constraint() { strip_critical(&c, &heads) } else { c };
            rules.push(satisfaction_rule(&c, &s.guard()));
        }
    }
    if opts.opt_pa {
        for &(r, s) in &live {
            if !r.is_constraint() {
                rules.push(pa_rule(&s.check_rule(r)));
            }
        }
    }
    rules.extend(meta_lines(opts).into_iter().map(|(_, r)| r));
    rules.push(Rule::new(Vec::new(), vec![BodyItem::Neg(notok())]));
    Program::new(rules)
}

/// guess ∪ check′.
pub fn integrate(pair: &GuessCheckPair, opts: &TransformOptions) -> Result<Program> {
    let prime = build_check_prime(pair, opts)?;
    pair.guess.concat(&prime)
}

/// guess ∪ check, for checks that must succeed rather than fail.
pub fn integrate_np(pair: &GuessCheckPair) -> Result<Program> {
    let v = pair.violations();
    if !v.is_empty() {
        return Err(Error::Precondition("splitting property violated".into()));
    }
    pair.guess.concat(&pair.check)
}

/// Output of [`integrate_programs`].
#[derive(Clone, Debug)]
pub struct Integration {
    pub program: Program,
    pub renames: BTreeMap<String, String>,
    pub hcf: bool,
    pub warnings: Vec<String>,
}

/// Enforces the splitting property, then integrates.
pub fn integrate_programs(guess: &Program, check: &Program, opts: &TransformOptions) -> Result<Integration> {
    let (pair, renames) = enforce_splitting(&GuessCheckPair::new(guess.clone(), check.clone())?)?;
    let hcf = pair.check.flags().hcf;
    let mut warnings = Vec::new();
    if !hcf {
        warnings.push("unsound: not HCF".to_string());
    }
    Ok(Integration { program: integrate(&pair, opts)?, renames, hcf, warnings })
}

/// Restricts a set to the given literals.
pub fn project_onto(s: &BTreeSet<Literal>, onto: &BTreeSet<Literal>) -> BTreeSet<Literal> {
    s.intersection(onto).cloned().collect()
}

/// The check program plus the guess answer set `s` as facts.
pub fn check_with(check: &Program, s: &BTreeSet<Literal>) -> Result<Program> {
    let mut rules: Vec<Rule> = check.rules().to_vec();
    let mut taken: HashSet<Term> = rules.iter().map(|r| r.name.clone()).collect();
    let mut k = 0;
    for l in s {
        let mut f = Rule::fact(l.clone());
        loop {
            k += 1;
            let n = Term::sym(format!("s{k}"));
            if taken.insert(n.clone()) {
                f.name = n;
                f.labelled = true;
                break;
            }
        }
        rules.push(f);
    }
    Program::with_names(rules)
}

pub fn notok_literal() -> Literal {
    notok()
}

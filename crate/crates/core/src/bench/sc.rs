//! Strategic companies.

use crate::error::{Error, Result};
use crate::ground::{ground_pair, GroundMode};
use crate::integrate::GuessCheckPair;
use crate::program::{Atom, Literal, Program, Rule, Term};
use crate::solve::AnswerSet;
use crate::text::parse;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Largest company count the exhaustive oracles accept.
pub const ORACLE_CAP: usize = 16;

pub type CompanySet = BTreeSet<String>;

/// Fixed-arity instance: void slots repeat a filled one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScInstance {
    pub companies: Vec<String>,
    /// `(product, producer, producer)`
    pub prod_by: Vec<[String; 3]>,
    /// `(controlled, controller, controller, controller)`
    pub contr_by: Vec<[String; 4]>,
}

impl ScInstance {
    pub fn new(companies: Vec<String>, prod_by: Vec<[String; 3]>, contr_by: Vec<[String; 4]>) -> Result<ScInstance> {
        let known: BTreeSet<&String> = companies.iter().collect();
        if known.len() != companies.len() {
            return Err(Error::InvalidInstance("company listed twice".into()));
        }
        let unknown = prod_by
            .iter()
            .flat_map(|p| &p[1..])
            .chain(contr_by.iter().flat_map(|c| c.iter()))
            .find(|c| !known.contains(c));
        if let Some(c) = unknown {
            return Err(Error::InvalidInstance(format!("unknown company {c}")));
        }
        Ok(ScInstance { companies, prod_by, contr_by })
    }

    /// Four companies, four products, Frutto controlled by Barilla and Saiwa.
    pub fn worked_example() -> ScInstance {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let p = |v: [&str; 3]| v.map(String::from);
        ScInstance::new(
            s(&["barilla", "saiwa", "frutto", "panino"]),
            vec![
                p(["pasta", "barilla", "saiwa"]),
                p(["tomatoes", "frutto", "barilla"]),
                p(["wine", "barilla", "barilla"]),
                p(["bread", "saiwa", "panino"]),
            ],
            vec![["frutto", "barilla", "saiwa", "saiwa"].map(String::from)],
        )
        .expect("well formed")
    }

    pub fn facts(&self) -> Vec<Rule> {
        let sym = |s: &String| Term::sym(s.clone());
        let mut out: Vec<Rule> =
            self.companies.iter().map(|c| fact("company", vec![sym(c)])).collect();
        out.extend(self.prod_by.iter().map(|p| fact("prod_by", p.iter().map(sym).collect())));
        out.extend(self.contr_by.iter().map(|c| fact("contr_by", c.iter().map(sym).collect())));
        out
    }

    /// The same holding as unbounded `produces/2` and `controls/3` facts.
    pub fn to_general(&self) -> ScGeneral {
        let mut produces = BTreeSet::new();
        for [p, a, b] in &self.prod_by {
            produces.insert((a.clone(), p.clone()));
            produces.insert((b.clone(), p.clone()));
        }
        let mut controls = BTreeSet::new();
        for (i, [w, x, y, z]) in self.contr_by.iter().enumerate() {
            for c in [x, y, z] {
                controls.insert((c.clone(), format!("g{i}"), w.clone()));
            }
        }
        ScGeneral {
            companies: self.companies.clone(),
            produces: produces.into_iter().collect(),
            controls: controls.into_iter().collect(),
        }
    }
}

fn fact(pred: &str, args: Vec<Term>) -> Rule {
    Rule::fact(Literal::pos(Atom::new(pred, args)))
}

/// Random holding. Each product gets one or two distinct producers; each of
/// `n_controls` distinct companies gets one to three controllers other than
/// itself. Void slots repeat the last filled one.
pub fn gen_sc(n_companies: usize, n_products: usize, n_controls: usize, seed: u64) -> Result<ScInstance> {
    if n_companies == 0 {
        return Err(Error::InvalidInstance("no companies".into()));
    }
    if n_controls > 0 && (n_controls > n_companies || n_companies < 2) {
        return Err(Error::InvalidInstance(format!("{n_controls} controls over {n_companies} companies")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let companies: Vec<String> = (0..n_companies).map(|i| format!("c{i}")).collect();
    let mut prod_by = Vec::new();
    for i in 0..n_products {
        let k = if n_companies > 1 { rng.gen_range(1..=2) } else { 1 };
        let mut who: Vec<String> = companies.choose_multiple(&mut rng, k).cloned().collect();
        while who.len() < 2 {
            who.push(who[0].clone());
        }
        prod_by.push([format!("g{i}"), who[0].clone(), who[1].clone()]);
    }
    let mut contr_by = Vec::new();
    for w in companies.choose_multiple(&mut rng, n_controls).cloned().collect::<Vec<_>>() {
        let others: Vec<&String> = companies.iter().filter(|c| **c != w).collect();
        let k = rng.gen_range(1..=others.len().min(3));
        let mut who: Vec<String> = others.choose_multiple(&mut rng, k).map(|c| (*c).clone()).collect();
        while who.len() < 3 {
            who.push(who[who.len() - 1].clone());
        }
        contr_by.push([w, who[0].clone(), who[1].clone(), who[2].clone()]);
    }
    ScInstance::new(companies, prod_by, contr_by)
}

pub const SC_GUESS: &str = "strat(X) v -strat(X) :- company(X).
:- prod_by(X,Y,Z), not strat(Y), not strat(Z).
:- contr_by(W,X,Y,Z), not strat(W), strat(X), strat(Y), strat(Z).";

pub const SC_CHECK: &str = "strat1(X) v -strat1(X) :- strat(X).
:- prod_by(X,Y,Z), not strat1(Y), not strat1(Z).
:- contr_by(W,X,Y,Z), not strat1(W), strat1(X), strat1(Y), strat1(Z).
smaller :- -strat1(X).
:- not smaller.";

const ADHOC1: &str = "strat(Y) v strat(Z) :- prod_by(X,Y,Z).
strat(W) :- contr_by(W,X,Y,Z), strat(X), strat(Y), strat(Z).";

const ADHOC2: &str = "strat(X) v -strat(X) :- company(X).
:- prod_by(X,Y,Z), not strat(Y), not strat(Z).
:- contr_by(W,X,Y,Z), not strat(W), strat(X), strat(Y), strat(Z).
:- not min(X), strat(X).
:- strat'(X,Y), -strat(Y).
:- strat'(X,X).
min(X) v strat'(X,Y) v strat'(X,Z) :- prod_by(G,Y,Z), strat(X).
min(X) v strat'(X,C) :- contr_by(C,W,Y,Z), strat(X), strat'(X,W), strat'(X,Y), strat'(X,Z).
strat'(X,Y) :- min(X), strat(X), strat(Y), X != Y.";

fn with_facts(facts: Vec<Rule>, src: &str) -> Result<Program> {
    let mut rules = facts;
    rules.extend(parse(src)?.into_rules());
    Program::new(rules)
}

/// Non-ground guess (facts included) and check programs.
pub fn sc_programs(inst: &ScInstance) -> Result<(Program, Program)> {
    Ok((with_facts(inst.facts(), SC_GUESS)?, parse(SC_CHECK)?))
}

/// Ground guess/check pair.
pub fn encode_sc(inst: &ScInstance) -> Result<GuessCheckPair> {
    let (g, c) = sc_programs(inst)?;
    let (g, c) = ground_pair(&g, &c, GroundMode::Relevant)?;
    GuessCheckPair::new(g, c)
}

pub fn encode_sc_adhoc1(inst: &ScInstance) -> Result<Program> {
    with_facts(inst.facts(), ADHOC1)
}

pub fn encode_sc_adhoc2(inst: &ScInstance) -> Result<Program> {
    with_facts(inst.facts(), ADHOC2)
}

/// Companies `c` with `strat(c)` in each answer set.
pub fn strat_sets(sets: &[AnswerSet]) -> BTreeSet<CompanySet> {
    sets.iter()
        .map(|s| {
            s.literals
                .iter()
                .filter(|l| !l.neg && l.atom.pred == "strat" && l.atom.args.len() == 1)
                .map(|l| l.atom.args[0].to_string())
                .collect()
        })
        .collect()
}

/// Minimal masks among those accepted by `ok`, over `n` companies.
fn minimal_masks(n: usize, ok: impl Fn(u32) -> bool) -> Result<Vec<u32>> {
    if n > ORACLE_CAP {
        return Err(Error::CapExceeded { what: "companies".into(), size: n, cap: ORACLE_CAP });
    }
    let good: Vec<bool> = (0..1u32 << n).map(&ok).collect();
    let mut out = Vec::new();
    for m in 0..1u32 << n {
        if !good[m as usize] {
            continue;
        }
        // Walk the proper submasks of m.
        let mut s = m;
        let mut minimal = true;
        while s != 0 {
            s = (s - 1) & m;
            if good[s as usize] {
                minimal = false;
                break;
            }
        }
        if minimal {
            out.push(m);
        }
    }
    Ok(out)
}

fn to_sets(companies: &[String], masks: Vec<u32>) -> BTreeSet<CompanySet> {
    masks
        .into_iter()
        .map(|m| companies.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, c)| c.clone()).collect())
        .collect()
}

/// All strategic sets, by exhaustive subset enumeration.
pub fn strategic_oracle(inst: &ScInstance) -> Result<BTreeSet<CompanySet>> {
    let idx: BTreeMap<&str, usize> = inst.companies.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let bit = |m: u32, c: &String| m >> idx[c.as_str()] & 1 == 1;
    let masks = minimal_masks(inst.companies.len(), |m| {
        inst.prod_by.iter().all(|[_, y, z]| bit(m, y) || bit(m, z))
            && inst.contr_by.iter().all(|[w, x, y, z]| bit(m, w) || !(bit(m, x) && bit(m, y) && bit(m, z)))
    })?;
    Ok(to_sets(&inst.companies, masks))
}

/// Holding with unbounded producers per product and controllers per group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScGeneral {
    pub companies: Vec<String>,
    /// `(company, product)`
    pub produces: Vec<(String, String)>,
    /// `(controller, group, controlled)`
    pub controls: Vec<(String, String, String)>,
}

impl ScGeneral {
    pub fn facts(&self) -> Vec<Rule> {
        let sym = |s: &String| Term::sym(s.clone());
        let mut out: Vec<Rule> =
            self.companies.iter().map(|c| fact("company", vec![sym(c)])).collect();
        out.extend(self.produces.iter().map(|(c, p)| fact("produces", vec![sym(c), sym(p)])));
        out.extend(self.controls.iter().map(|(a, g, c)| fact("controls", vec![sym(a), sym(g), sym(c)])));
        out
    }
}

pub const SC_GENERAL_GUESS: &str = "strat(X) v -strat(X) :- company(X).
no_control(G,C) :- controls(C1,G,C), not strat(C1).
:- controls(C1,G,C), not no_control(G,C), not strat(C).
produced(P) :- produces(C,P), strat(C).
:- produces(C,P), not produced(P).";

pub const SC_GENERAL_CHECK: &str = "strat1(X) v -strat1(X) :- strat(X).
no_control1(G,C) :- controls(C1,G,C), not strat1(C1).
:- controls(C1,G,C), not no_control1(G,C), not strat1(C).
produced1(P) :- produces(C,P), strat1(C).
:- produces(C,P), not produced1(P).
smaller :- -strat1(X).
:- not smaller.";

pub fn encode_sc_general(inst: &ScGeneral) -> Result<GuessCheckPair> {
    let g = with_facts(inst.facts(), SC_GENERAL_GUESS)?;
    let (g, c) = ground_pair(&g, &parse(SC_GENERAL_CHECK)?, GroundMode::Relevant)?;
    GuessCheckPair::new(g, c)
}

pub fn strategic_oracle_general(inst: &ScGeneral) -> Result<BTreeSet<CompanySet>> {
    let idx: BTreeMap<&str, usize> = inst.companies.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let mut producers: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (c, p) in &inst.produces {
        producers.entry(p).or_default().push(idx[c.as_str()]);
    }
    let mut groups: BTreeMap<(&str, &str), Vec<usize>> = BTreeMap::new();
    for (a, g, c) in &inst.controls {
        groups.entry((g, c)).or_default().push(idx[a.as_str()]);
    }
    let masks = minimal_masks(inst.companies.len(), |m| {
        producers.values().all(|cs| cs.iter().any(|i| m >> i & 1 == 1))
            && groups
                .iter()
                .all(|((_, c), cs)| m >> idx[c] & 1 == 1 || cs.iter().any(|i| m >> i & 1 == 0))
    })?;
    Ok(to_sets(&inst.companies, masks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[&str]) -> CompanySet {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn worked_example_oracle() {
        let want: BTreeSet<CompanySet> =
            [set(&["barilla", "saiwa", "frutto"]), set(&["barilla", "panino"])].into_iter().collect();
        let inst = ScInstance::worked_example();
        assert_eq!(strategic_oracle(&inst).unwrap(), want);
        assert_eq!(strategic_oracle_general(&inst.to_general()).unwrap(), want);
    }

    #[test]
    fn production_only() {
        let mut inst = ScInstance::worked_example();
        inst.contr_by.clear();
        let got = strategic_oracle(&inst).unwrap();
        assert!(got.contains(&set(&["barilla", "saiwa"])));
        assert!(got.iter().all(|s| !s.contains("frutto")));
        let single = ScInstance::new(
            vec!["a".into(), "b".into()],
            vec![["x", "a", "a"].map(String::from), ["y", "b", "b"].map(String::from)],
            vec![],
        )
        .unwrap();
        assert_eq!(strategic_oracle(&single).unwrap(), [set(&["a", "b"])].into_iter().collect());
    }

    #[test]
    fn generator() {
        let a = gen_sc(6, 8, 3, 11).unwrap();
        assert_eq!(a, gen_sc(6, 8, 3, 11).unwrap());
        assert_eq!(a.contr_by.len(), 3);
        for [w, x, y, z] in &a.contr_by {
            assert!(w != x && w != y && w != z);
        }
        assert!(gen_sc(2, 1, 3, 0).is_err());
    }

    #[test]
    fn general_three_producers() {
        let g = ScGeneral {
            companies: vec!["a".into(), "b".into(), "c".into()],
            produces: vec![("a".into(), "x".into()), ("b".into(), "x".into()), ("c".into(), "x".into())],
            controls: vec![],
        };
        assert_eq!(strategic_oracle_general(&g).unwrap().len(), 3);
        assert!(encode_sc_general(&g).is_ok());
    }

    #[test]
    fn encodings_build() {
        let inst = ScInstance::worked_example();
        let pair = encode_sc(&inst).unwrap();
        assert!(pair.violations().is_empty());
        assert!(encode_sc_adhoc1(&inst).unwrap().to_string().contains("strat(Y) v strat(Z) :- prod_by(X,Y,Z)."));
        assert!(encode_sc_adhoc2(&inst).unwrap().to_string().contains("X!=Y"));
    }
}

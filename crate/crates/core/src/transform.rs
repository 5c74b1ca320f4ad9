//! Reification of ground programs and the disjunctive meta-interpreter.
//!
//! `tr(p)` is a program over the meta vocabulary whose answer sets either
//! name an answer set of `p` through `inS/1`, or (exactly when `p` is
//! inconsistent) are the single saturated set `omega(p)`.

use crate::error::{Error, Result};
use crate::ground::{GroundMode, Grounder};
use crate::program::{Atom, BodyItem, Literal, Program, Rule, Term};
use crate::solve::{stratified_eval, AnswerSet};
use crate::text::{parse, parse_literal};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet};

/// Reserved predicates of the meta program.
pub const META_VOCABULARY: &[&str] = &[
    "rule", "ruleBefore", "ruleAfter", "ruleBetween", "firstRule", "lastRule", "nextRule", "before", "after",
    "between", "next", "first", "last", "hlit", "inS", "ninS", "notok", "phi", "allInSUpto", "allInS",
    "allNinSUpto", "allNinS", "hasHead", "hasPBody", "hasNBody", "failsToProve", "allFailUpto", "lit", "atom",
    "pa", "dep", "cyclic",
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TransformOptions {
    pub opt_mod: bool,
    pub opt_pa: bool,
    pub opt_dep: bool,
    /// Drops the meta rule with this line number (1..=42). Only meant for
    /// mutation testing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omit_line: Option<u32>,
}

impl TransformOptions {
    pub const NONE: TransformOptions = TransformOptions { opt_mod: false, opt_pa: false, opt_dep: false, omit_line: None };
    pub const ALL: TransformOptions = TransformOptions { opt_mod: true, opt_pa: true, opt_dep: true, omit_line: None };

    /// All eight combinations of the three switches.
    pub fn combinations() -> Vec<TransformOptions> {
        (0..8u8)
            .map(|m| TransformOptions { opt_mod: m & 1 != 0, opt_pa: m & 2 != 0, opt_dep: m & 4 != 0, omit_line: None })
            .collect()
    }

    /// Parses `none`, `all` or a comma list of `mod`, `pa`, `dep`.
    pub fn parse(spec: &str) -> Result<TransformOptions> {
        let mut o = TransformOptions::NONE;
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match part {
                "none" => {}
                "all" | "opt" => o = TransformOptions { omit_line: o.omit_line, ..TransformOptions::ALL },
                "mod" => o.opt_mod = true,
                "pa" => o.opt_pa = true,
                "dep" => o.opt_dep = true,
                other => return Err(Error::Precondition(format!("unknown optimization `{other}`"))),
            }
        }
        Ok(o)
    }

    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.opt_mod {
            parts.push("mod");
        }
        if self.opt_pa {
            parts.push("pa");
        }
        if self.opt_dep {
            parts.push("dep");
        }
        if parts.is_empty() {
            "none".into()
        } else {
            parts.join(",")
        }
    }
}

impl std::fmt::Display for TransformOptions {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

/// The reified name of a literal: its printed form as a string constant.
pub fn lit_name(l: &Literal) -> Term {
    Term::Str(l.to_string())
}

fn atom_name(l: &Literal) -> Term {
    Term::Str(l.atom.to_string())
}

pub(crate) fn meta_lit(kind: &str, l: &Literal, rule: &Term) -> Literal {
    Literal::pos(Atom::new("lit", vec![Term::sym(kind), lit_name(l), rule.clone()]))
}

pub(crate) fn meta_atom(l: &Literal) -> Literal {
    Literal::pos(Atom::new("atom", vec![lit_name(l), atom_name(l)]))
}

pub(crate) fn unary(pred: &str, l: &Literal) -> Literal {
    Literal::pos(Atom::new(pred, vec![lit_name(l)]))
}

pub(crate) fn notok() -> Literal {
    Literal::pos(Atom::prop("notok"))
}

/// Rejects programs using a reserved predicate.
pub fn check_vocabulary(p: &Program) -> Result<()> {
    for pred in p.predicates() {
        if META_VOCABULARY.contains(&pred.as_str()) {
            return Err(Error::MetaCollision { predicate: pred });
        }
    }
    Ok(())
}

/// F(p): `lit(h|p|n, l, r)` facts for every rule and `atom(l, |l|)` for
/// every head literal (once per literal).
pub fn factual_rep(p: &Program) -> Result<Program> {
    p.require_ground()?;
    check_vocabulary(p)?;
    let mut out = Vec::new();
    let mut atoms = HashSet::new();
    for r in p.rules().iter().filter(|r| !r.is_tautology()) {
        reify_rule(r, &[], true, &mut atoms, &mut out);
    }
    Program::new(out)
}

/// Appends the (possibly guarded) reification of `r`.
pub(crate) fn reify_rule(r: &Rule, guard: &[BodyItem], with_pbody: bool, atoms: &mut HashSet<Literal>, out: &mut Vec<Rule>) {
    for l in &r.head {
        out.push(Rule::new(vec![meta_lit("h", l, &r.name)], guard.to_vec()));
        if atoms.insert(l.clone()) {
            out.push(Rule::fact(meta_atom(l)));
        }
    }
    if with_pbody {
        for l in r.pbody() {
            out.push(Rule::new(vec![meta_lit("p", l, &r.name)], guard.to_vec()));
        }
    }
    for l in r.nbody() {
        out.push(Rule::new(vec![meta_lit("n", l, &r.name)], guard.to_vec()));
    }
}

/// Text of meta rule `line` under `opts`, or `None` when the line is not
/// part of that variant.
fn line_text(line: u32, opts: &TransformOptions) -> Option<&'static str> {
    let dep = opts.opt_dep;
    Some(match line {
        1 if opts.opt_pa => "rule(L,R) :- lit(h,L,R), not lit(p,L,R), not lit(n,L,R), pa(R).",
        1 => "rule(L,R) :- lit(h,L,R), not lit(p,L,R), not lit(n,L,R).",
        2 => "ruleBefore(L,R) :- rule(L,R), rule(L,R1), R1 < R.",
        3 => "ruleAfter(L,R) :- rule(L,R), rule(L,R1), R < R1.",
        4 => "ruleBetween(L,R1,R2) :- rule(L,R1), rule(L,R2), rule(L,R3), R1 < R3, R3 < R2.",
        5 => "firstRule(L,R) :- rule(L,R), not ruleBefore(L,R).",
        6 => "lastRule(L,R) :- rule(L,R), not ruleAfter(L,R).",
        7 => "nextRule(L,R1,R2) :- rule(L,R1), rule(L,R2), R1 < R2, not ruleBetween(L,R1,R2).",
        8..=13 if opts.opt_mod => return None,
        8 => "before(HPN,L,R) :- lit(HPN,L,R), lit(HPN,L1,R), L1 < L.",
        9 => "after(HPN,L,R) :- lit(HPN,L,R), lit(HPN,L1,R), L < L1.",
        10 => "between(HPN,L,L2,R) :- lit(HPN,L,R), lit(HPN,L1,R), lit(HPN,L2,R), L < L1, L1 < L2.",
        11 => "next(HPN,L,L1,R) :- lit(HPN,L,R), lit(HPN,L1,R), L < L1, not between(HPN,L,L1,R).",
        12 => "first(HPN,L,R) :- lit(HPN,L,R), not before(HPN,L,R).",
        13 => "last(HPN,L,R) :- lit(HPN,L,R), not after(HPN,L,R).",
        14 => "hlit(L) :- rule(L,R).",
        15 => "inS(L) v ninS(L) :- hlit(L).",
        16 => "ninS(L) :- lit(HPN,L,R), not hlit(L).",
        17 => "notok :- inS(L), inS(NL), L != NL, atom(L,A), atom(NL,A).",
        18 if dep => "phi(L,L1) v phi(L1,L) :- dep(L,L1), dep(L1,L), L < L1, cyclic.",
        18 => "phi(L,L1) v phi(L1,L) :- inS(L), inS(L1), L < L1.",
        19 if dep => "phi(L,L2) :- phi(L,L1), phi(L1,L2), cyclic.",
        19 => "phi(L,L2) :- phi(L,L1), phi(L1,L2).",
        20..=32 if opts.opt_mod => return None,
        20 => "allInSUpto(p,Min,R) :- inS(Min), first(p,Min,R).",
        21 => "allInSUpto(p,L1,R) :- inS(L1), allInSUpto(p,L,R), next(p,L,L1,R).",
        22 => "allInS(p,R) :- allInSUpto(p,Max,R), last(p,Max,R).",
        23 => "allNinSUpto(HN,Min,R) :- ninS(Min), first(HN,Min,R), HN != p.",
        24 => "allNinSUpto(HN,L1,R) :- ninS(L1), allNinSUpto(HN,L,R), next(HN,L,L1,R).",
        25 => "allNinS(HN,R) :- allNinSUpto(HN,Max,R), last(HN,Max,R).",
        26 => "hasHead(R) :- lit(h,L,R).",
        27 => "hasPBody(R) :- lit(p,L,R).",
        28 => "hasNBody(R) :- lit(n,L,R).",
        29 => "allNinS(h,R) :- lit(HPN,L,R), not hasHead(R).",
        30 => "allInS(p,R) :- lit(HPN,L,R), not hasPBody(R).",
        31 => "allNinS(n,R) :- lit(HPN,L,R), not hasNBody(R).",
        32 => "notok :- allNinS(h,R), allInS(p,R), allNinS(n,R), lit(HPN,L,R).",
        33 => "failsToProve(L,R) :- rule(L,R), lit(p,L1,R), ninS(L1).",
        34 => "failsToProve(L,R) :- rule(L,R), lit(n,L1,R), inS(L1).",
        35 => "failsToProve(L,R) :- rule(L,R), rule(L1,R), inS(L1), L1 != L.",
        36 if dep => "failsToProve(L,R) :- rule(L,R), lit(p,L1,R), phi(L1,L), cyclic.",
        36 => "failsToProve(L,R) :- rule(L,R), lit(p,L1,R), phi(L1,L).",
        37 => "allFailUpto(L,R) :- failsToProve(L,R), firstRule(L,R).",
        38 => "allFailUpto(L,R1) :- failsToProve(L,R1), allFailUpto(L,R), nextRule(L,R,R1).",
        39 => "notok :- allFailUpto(L,R), lastRule(L,R), inS(L).",
        40 if dep => "phi(L,L1) :- notok, hlit(L), hlit(L1), cyclic.",
        40 => "phi(L,L1) :- notok, hlit(L), hlit(L1).",
        41 => "inS(L) :- notok, hlit(L).",
        42 => "ninS(L) :- notok, hlit(L).",
        _ => return None,
    })
}

const DEP_RULES: &str = "dep(L,L1) :- rule(L,R), lit(p,L1,R), inS(L1), inS(L).
dep(L,L2) :- rule(L,R), lit(p,L1,R), dep(L1,L2), inS(L).
cyclic :- dep(L,L1), dep(L1,L).";

/// The input-independent part of the meta program, as (line, rule) pairs.
/// Dependency rules carry line 0 and sit just before line 18.
pub fn meta_lines(opts: &TransformOptions) -> Vec<(u32, Rule)> {
    let mut out = Vec::new();
    for line in 1..=42 {
        if line == 18 && opts.opt_dep {
            for r in parse(DEP_RULES).expect("dependency rules parse").into_rules() {
                out.push((0, unnamed(r)));
            }
        }
        if opts.omit_line == Some(line) {
            continue;
        }
        if let Some(text) = line_text(line, opts) {
            let r = parse(text).expect("meta rule parses").into_rules().remove(0);
            out.push((line, unnamed(r)));
        }
    }
    out
}

fn unnamed(mut r: Rule) -> Rule {
    r.name = Term::Int(0);
    r.labelled = false;
    r.span = None;
    r
}

/// Per-rule replacements of the satisfaction check: `inS(h) :- body` for
/// normal rules whose head is not in their own body, `notok :- ...`
/// otherwise. `guard` is appended to every body.
pub(crate) fn satisfaction_rule(r: &Rule, guard: &[BodyItem]) -> Rule {
    let mut body: Vec<BodyItem> = Vec::new();
    let forced = r.head.len() == 1 && !r.pbody().chain(r.nbody()).any(|l| l == &r.head[0]);
    if !forced {
        body.extend(r.head.iter().map(|h| BodyItem::Pos(unary("ninS", h))));
    }
    body.extend(r.pbody().map(|l| BodyItem::Pos(unary("inS", l))));
    body.extend(r.nbody().map(|l| BodyItem::Pos(unary("ninS", l))));
    body.extend(guard.iter().cloned());
    let head = if forced { vec![unary("inS", &r.head[0])] } else { vec![notok()] };
    Rule::new(head, body)
}

/// `pa(r) :- lit(h,b1,R1), pa(R1), ...` for a rule with a non-empty head.
pub(crate) fn pa_rule(r: &Rule) -> Rule {
    let mut body = Vec::new();
    for (i, b) in r.pbody().enumerate() {
        let v = Term::var(format!("R{}", i + 1));
        body.push(BodyItem::Pos(Literal::pos(Atom::new("lit", vec![Term::sym("h"), lit_name(b), v.clone()]))));
        body.push(BodyItem::Pos(Literal::pos(Atom::new("pa", vec![v]))));
    }
    Rule::new(vec![Literal::pos(Atom::new("pa", vec![r.name.clone()]))], body)
}

/// Drops negative constraint literals that occur in no head of `p`.
pub(crate) fn strip_critical(c: &Rule, heads: &BTreeSet<Literal>) -> Rule {
    let mut c2 = c.clone();
    c2.body.retain(|b| match b {
        BodyItem::Neg(l) => heads.contains(l),
        _ => true,
    });
    c2
}

/// The input-dependent rules for `opt_mod` and `opt_pa` (no guards).
fn input_rules(opts: &TransformOptions, p: &Program) -> Vec<Rule> {
    let mut out = Vec::new();
    if opts.opt_mod {
        let heads: BTreeSet<Literal> = p.rules().iter().filter(|r| !r.is_tautology()).flat_map(|r| r.head.iter().cloned()).collect();
        for r in p.rules().iter().filter(|r| !r.is_tautology()) {
            let r = if r.is_constraint() { strip_critical(r, &heads) } else { r.clone() };
            out.push(satisfaction_rule(&r, &[]));
        }
    }
    if opts.opt_pa {
        out.extend(p.rules().iter().filter(|r| !r.is_constraint() && !r.is_tautology()).map(pa_rule));
    }
    out
}

/// The meta program for `opts`: input-dependent rules (if any) followed
/// by the fixed lines.
pub fn meta_rules(opts: &TransformOptions, p: &Program) -> Result<Program> {
    let mut rules = input_rules(opts, p);
    rules.extend(meta_lines(opts).into_iter().map(|(_, r)| r));
    Program::new(rules)
}

/// Result of [`transform`]: the program plus metadata.
#[derive(Clone, Debug)]
pub struct Transformation {
    pub program: Program,
    pub options: TransformOptions,
    /// False when the input is not head-cycle free; the output is then
    /// emitted anyway but carries no correctness guarantee.
    pub hcf: bool,
    pub warnings: Vec<String>,
    /// Rule name to printed rule, for the input program.
    pub rule_names: BTreeMap<String, String>,
}

/// `tr(p) = F(p) ∪ meta`. With `opt_mod`, constraints contribute no facts.
pub fn transform(p: &Program, opts: &TransformOptions) -> Result<Transformation> {
    p.require_ground()?;
    check_vocabulary(p)?;
    let hcf = p.flags().hcf;
    let mut warnings = Vec::new();
    if !hcf {
        warnings.push("unsound: not HCF".to_string());
    }
    let mut rules = Vec::new();
    let mut atoms = HashSet::new();
    // Rules with a head literal in the positive body always hold and
    // cannot support anything; the meta rules assume none are present.
    for r in p.rules().iter().filter(|r| !r.is_tautology()) {
        if opts.opt_mod && r.is_constraint() {
            continue;
        }
        reify_rule(r, &[], true, &mut atoms, &mut rules);
    }
    rules.extend(input_rules(opts, p));
    rules.extend(meta_lines(opts).into_iter().map(|(_, r)| r));
    let rule_names = p.rules().iter().map(|r| (r.display_name(), r.to_string())).collect();
    Ok(Transformation { program: Program::new(rules)?, options: *opts, hcf, warnings, rule_names })
}

pub fn tr(p: &Program, opts: &TransformOptions) -> Result<Program> {
    Ok(transform(p, opts)?.program)
}

/// Grounds a meta-level program (relevant instantiation).
pub fn ground_meta(p: &Program) -> Result<Program> {
    Ok(Grounder::new(GroundMode::Relevant).ground(p)?.0)
}

/// Ω for the base options.
pub fn omega(p: &Program) -> Result<AnswerSet> {
    omega_with(p, &TransformOptions::NONE)
}

/// The saturated candidate: the least model of tr(p) without its
/// disjunctive rules, plus `notok`.
pub fn omega_with(p: &Program, opts: &TransformOptions) -> Result<AnswerSet> {
    let t = tr(p, opts)?;
    let mut rules: Vec<Rule> = t.into_rules().into_iter().filter(|r| r.head.len() <= 1 && !r.is_constraint()).collect();
    rules.push(Rule::fact(notok()));
    let g = ground_meta(&Program::new(rules)?)?;
    stratified_eval(&g)
}

/// Object-level literals named by the `inS` atoms of `s`.
pub fn project(s: &AnswerSet) -> Result<BTreeSet<Literal>> {
    project_literals(&s.literals)
}

pub fn project_literals(s: &BTreeSet<Literal>) -> Result<BTreeSet<Literal>> {
    let mut out = BTreeSet::new();
    for l in s {
        if l.neg || l.atom.pred != "inS" || l.atom.args.len() != 1 {
            continue;
        }
        match &l.atom.args[0] {
            Term::Str(name) => {
                let parsed = parse_literal(name).map_err(|_| Error::BadLiteralName { name: name.clone() })?;
                out.insert(parsed);
            }
            other => return Err(Error::BadLiteralName { name: other.to_string() }),
        }
    }
    Ok(out)
}

/// Names of the potentially applicable rules: the least fixpoint of
/// "every positive body literal is a head literal of an already added rule".
pub fn pa_closure(p: &Program) -> Result<BTreeSet<Term>> {
    p.require_ground()?;
    let mut derivable: HashSet<&Literal> = HashSet::new();
    let mut names = BTreeSet::new();
    let mut added = vec![false; p.len()];
    loop {
        let mut grew = false;
        for (i, r) in p.rules().iter().enumerate() {
            if !added[i] && r.pbody().all(|l| derivable.contains(l)) {
                added[i] = true;
                grew = true;
                names.insert(r.name.clone());
                derivable.extend(r.head.iter());
            }
        }
        if !grew {
            return Ok(names);
        }
    }
}

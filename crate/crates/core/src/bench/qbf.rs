//! 2QBF instances ∃X∀Y Φ with Φ in DNF.

use crate::error::{Error, Result};
use crate::integrate::GuessCheckPair;
use crate::program::{Atom, Literal, Program, Rule, Term};
use crate::solve::AnswerSet;
use crate::text::parse;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Cap on |X| + |Y| for truth-table evaluation.
pub const EVAL_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QbfLit {
    pub var: String,
    pub positive: bool,
}

impl QbfLit {
    pub fn pos(v: &str) -> QbfLit {
        QbfLit { var: v.into(), positive: true }
    }

    pub fn neg(v: &str) -> QbfLit {
        QbfLit { var: v.into(), positive: false }
    }

    fn literal(&self) -> Literal {
        let a = Atom::prop(self.var.clone());
        if self.positive {
            Literal::pos(a)
        } else {
            Literal::neg(a)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QbfInstance {
    pub xs: Vec<String>,
    pub ys: Vec<String>,
    /// Disjuncts, each a conjunction of literals.
    pub terms: Vec<Vec<QbfLit>>,
}

/// A truth assignment to the existential variables.
pub type Assignment = BTreeMap<String, bool>;

impl QbfInstance {
    pub fn new(xs: Vec<String>, ys: Vec<String>, terms: Vec<Vec<QbfLit>>) -> Result<QbfInstance> {
        let declared: BTreeSet<&String> = xs.iter().chain(&ys).collect();
        if declared.len() != xs.len() + ys.len() {
            return Err(Error::InvalidInstance("variable declared twice".into()));
        }
        for t in &terms {
            for l in t {
                if !declared.contains(&l.var) {
                    return Err(Error::InvalidInstance(format!("undeclared variable {}", l.var)));
                }
            }
        }
        Ok(QbfInstance { xs, ys, terms })
    }

    /// ∃x0x1∀y0y1 (¬x0∧¬y0) ∨ (y0∧¬x0) ∨ (y1∧x0∧¬y0) ∨ (y0∧¬x1∧¬y0).
    pub fn worked_example() -> QbfInstance {
        use QbfLit as L;
        QbfInstance::new(
            vec!["x0".into(), "x1".into()],
            vec!["y0".into(), "y1".into()],
            vec![
                vec![L::neg("x0"), L::neg("y0")],
                vec![L::pos("y0"), L::neg("x0")],
                vec![L::pos("y1"), L::pos("x0"), L::neg("y0")],
                vec![L::pos("y0"), L::neg("x1"), L::neg("y0")],
            ],
        )
        .expect("well formed")
    }
}

/// Random instance: each term draws `term_len` distinct variables from
/// X ∪ Y uniformly, each with a fair-coin polarity.
pub fn gen_qbf(n_x: usize, n_y: usize, n_terms: usize, term_len: usize, seed: u64) -> Result<QbfInstance> {
    if term_len == 0 || term_len > n_x + n_y {
        return Err(Error::InvalidInstance(format!("term length {term_len} with {} variables", n_x + n_y)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<String> = (0..n_x).map(|i| format!("x{i}")).collect();
    let ys: Vec<String> = (0..n_y).map(|i| format!("y{i}")).collect();
    let all: Vec<&String> = xs.iter().chain(&ys).collect();
    let terms = (0..n_terms)
        .map(|_| {
            all.choose_multiple(&mut rng, term_len)
                .map(|v| QbfLit { var: (*v).clone(), positive: rng.gen_bool(0.5) })
                .collect()
        })
        .collect();
    QbfInstance::new(xs, ys, terms)
}

/// Guess `xi v -xi.`; check `yj v -yj.` plus one constraint per term.
pub fn encode_qbf(q: &QbfInstance) -> GuessCheckPair {
    let choice = |v: &String| {
        let a = Atom::prop(v.clone());
        Rule::from_parts(vec![Literal::pos(a.clone()), Literal::neg(a)], vec![], vec![])
    };
    let guess: Vec<Rule> = q.xs.iter().map(choice).collect();
    let mut check: Vec<Rule> = q.ys.iter().map(choice).collect();
    for t in &q.terms {
        check.push(Rule::from_parts(vec![], t.iter().map(QbfLit::literal).collect(), vec![]));
    }
    GuessCheckPair::new(Program::new(guess).expect("names"), Program::new(check).expect("names")).expect("ground")
}

const ADHOC_RULES: &str = "t(true). f(false).
t(X) v f(X) :- exists(X).
t(Y) v f(Y) :- forall(Y).
w :- term(X,Y,Z,Na,Nb,Nc), t(X), t(Y), t(Z), f(Na), f(Nb), f(Nc).
t(Y) :- w, forall(Y).
f(Y) :- w, forall(Y).
:- not w.";

/// The `term/6` argument list: positive variables first, padded with
/// `true`, then negated variables, padded with `false`.
pub fn adhoc_term_args(t: &[QbfLit]) -> Result<Vec<Term>> {
    if t.len() > 3 {
        return Err(Error::InvalidInstance(format!("term with {} literals is not 3DNF", t.len())));
    }
    let mut p: Vec<Term> = t.iter().filter(|l| l.positive).map(|l| Term::sym(l.var.clone())).collect();
    let mut n: Vec<Term> = t.iter().filter(|l| !l.positive).map(|l| Term::sym(l.var.clone())).collect();
    p.resize(3, Term::sym("true"));
    n.resize(3, Term::sym("false"));
    p.extend(n);
    Ok(p)
}

/// The saturation-based encoding for 3DNF (shorter terms are padded).
pub fn encode_qbf_adhoc(q: &QbfInstance) -> Result<Program> {
    let mut rules = Vec::new();
    for x in &q.xs {
        rules.push(Rule::fact(Literal::pos(Atom::new("exists", vec![Term::sym(x.clone())]))));
    }
    for y in &q.ys {
        rules.push(Rule::fact(Literal::pos(Atom::new("forall", vec![Term::sym(y.clone())]))));
    }
    for t in &q.terms {
        rules.push(Rule::fact(Literal::pos(Atom::new("term", adhoc_term_args(t)?))));
    }
    rules.extend(parse(ADHOC_RULES).expect("fixed rules parse").into_rules());
    Program::new(rules)
}

fn holds(t: &[QbfLit], val: &BTreeMap<&str, bool>) -> bool {
    t.iter().all(|l| val[l.var.as_str()] == l.positive)
}

/// All assignments σ to X such that Φ[σ] holds for every assignment to Y.
pub fn eval_qbf(q: &QbfInstance) -> Result<BTreeSet<Assignment>> {
    let n = q.xs.len() + q.ys.len();
    if n > EVAL_CAP {
        return Err(Error::CapExceeded { what: "QBF variables".into(), size: n, cap: EVAL_CAP });
    }
    let mut out = BTreeSet::new();
    for xm in 0u64..(1 << q.xs.len()) {
        let mut val: BTreeMap<&str, bool> = q.xs.iter().enumerate().map(|(i, x)| (x.as_str(), xm >> i & 1 == 1)).collect();
        let taut = (0u64..(1 << q.ys.len())).all(|ym| {
            for (j, y) in q.ys.iter().enumerate() {
                val.insert(y.as_str(), ym >> j & 1 == 1);
            }
            q.terms.iter().any(|t| holds(t, &val))
        });
        if taut {
            out.insert(q.xs.iter().enumerate().map(|(i, x)| (x.clone(), xm >> i & 1 == 1)).collect());
        }
    }
    Ok(out)
}

/// X-assignments named by answer sets of the integrated encoding.
pub fn witnesses_integrated(q: &QbfInstance, sets: &[AnswerSet]) -> BTreeSet<Assignment> {
    sets.iter()
        .map(|s| q.xs.iter().map(|x| (x.clone(), s.contains(&Literal::prop(x)))).collect())
        .collect()
}

/// X-assignments named by answer sets of the ad hoc encoding.
pub fn witnesses_adhoc(q: &QbfInstance, sets: &[AnswerSet]) -> BTreeSet<Assignment> {
    let w = Literal::prop("w");
    sets.iter()
        .filter(|s| s.contains(&w))
        .map(|s| {
            q.xs.iter()
                .map(|x| (x.clone(), s.contains(&Literal::pos(Atom::new("t", vec![Term::sym(x.clone())])))))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_witnesses() {
        let w = eval_qbf(&QbfInstance::worked_example()).unwrap();
        let shown: Vec<Vec<bool>> = w.iter().map(|a| a.values().copied().collect()).collect();
        assert_eq!(shown, vec![vec![false, false], vec![false, true]]);
    }

    #[test]
    fn encodings() {
        let p = encode_qbf(&QbfInstance::worked_example());
        assert_eq!(p.guess.to_string(), "x0 v -x0.\nx1 v -x1.");
        assert_eq!(p.check.rules()[2].to_string(), ":- -x0, -y0.");
        let one = QbfInstance::new(vec!["x1".into()], vec![], vec![vec![QbfLit::pos("x1")]]).unwrap();
        assert_eq!(encode_qbf(&one).check.to_string(), ":- x1.");
        assert_eq!(eval_qbf(&one).unwrap().len(), 1);
    }

    #[test]
    fn adhoc_padding() {
        let show = |t: Vec<QbfLit>| adhoc_term_args(&t).unwrap().iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        assert_eq!(show(vec![QbfLit::pos("x1"), QbfLit::pos("x2"), QbfLit::pos("x3")]), "x1,x2,x3,false,false,false");
        assert_eq!(show(vec![QbfLit::neg("y1"), QbfLit::neg("y2"), QbfLit::neg("y3")]), "true,true,true,y1,y2,y3");
        let facts = encode_qbf_adhoc(&QbfInstance::worked_example()).unwrap().to_string();
        for t in [
            "term(true,true,true,x0,y0,false).",
            "term(y0,true,true,x0,false,false).",
            "term(y1,x0,true,y0,false,false).",
            "term(y0,true,true,x1,y0,false).",
        ] {
            assert!(facts.contains(t), "{t}");
        }
        let long = QbfInstance::new(vec!["a".into(), "b".into(), "c".into(), "d".into()], vec![], vec![
            ["a", "b", "c", "d"].iter().map(|v| QbfLit::pos(v)).collect(),
        ])
        .unwrap();
        assert!(encode_qbf_adhoc(&long).is_err());
    }

    #[test]
    fn generator() {
        assert_eq!(gen_qbf(2, 2, 4, 3, 9).unwrap(), gen_qbf(2, 2, 4, 3, 9).unwrap());
        assert!(gen_qbf(1, 1, 2, 3, 0).is_err());
        assert!(eval_qbf(&gen_qbf(2, 2, 0, 1, 0).unwrap()).unwrap().is_empty());
    }
}

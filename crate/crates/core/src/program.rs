//! Program data model: terms, literals, rules, programs and their
//! classification.

use crate::error::{Error, Result};
use crate::graph;
use crate::text::SourceSpan;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

/// A constant, integer or variable.
///
/// The derived order puts integers first (numerically), then symbols, then
/// quoted strings, then variables. Ground terms are therefore totally
/// ordered the way the built-in `<` expects.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Int(i64),
    Sym(String),
    Str(String),
    Var(String),
}

impl Term {
    pub fn sym(s: impl Into<String>) -> Term {
        Term::Sym(s.into())
    }

    pub fn str(s: impl Into<String>) -> Term {
        Term::Str(s.into())
    }

    pub fn var(s: impl Into<String>) -> Term {
        Term::Var(s.into())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Term::Int(i) => Some(*i),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(i) => write!(f, "{i}"),
            Term::Sym(s) | Term::Var(s) => f.write_str(s),
            Term::Str(s) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Atom {
        Atom { pred: pred.into(), args }
    }

    pub fn prop(pred: impl Into<String>) -> Atom {
        Atom::new(pred, Vec::new())
    }

    pub fn is_ground(&self) -> bool {
        !self.args.iter().any(Term::is_var)
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// An atom, possibly under strong negation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub neg: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal { neg: false, atom }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal { neg: true, atom }
    }

    /// Shorthand for a propositional literal; a leading `-` means strong negation.
    pub fn prop(name: &str) -> Literal {
        match name.strip_prefix('-') {
            Some(rest) => Literal::neg(Atom::prop(rest)),
            None => Literal::pos(Atom::prop(name)),
        }
    }

    pub fn complement(&self) -> Literal {
        Literal { neg: !self.neg, atom: self.atom.clone() }
    }

    pub fn is_ground(&self) -> bool {
        self.atom.is_ground()
    }

    pub fn pred(&self) -> &str {
        &self.atom.pred
    }
}

// Strong negation sorts first, mirroring the printed form where `-` precedes letters.
impl Ord for Literal {
    fn cmp(&self, other: &Self) -> Ordering {
        other.neg.cmp(&self.neg).then_with(|| self.atom.cmp(&other.atom))
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.neg {
            f.write_str("-")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
        }
    }

    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            CmpOp::Lt => ord == Ordering::Less,
            CmpOp::Le => ord != Ordering::Greater,
            CmpOp::Gt => ord == Ordering::Greater,
            CmpOp::Ge => ord != Ordering::Less,
            CmpOp::Eq => ord == Ordering::Equal,
            CmpOp::Ne => ord != Ordering::Equal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArithOp {
    Add,
    Sub,
}

/// Right-hand side of a built-in: a term or `term (+|-) term`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Expr {
    Term(Term),
    Arith(Term, ArithOp, Term),
}

impl Expr {
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Expr::Term(t) => vec![t],
            Expr::Arith(a, _, b) => vec![a, b],
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Term(t) => write!(f, "{t}"),
            Expr::Arith(a, ArithOp::Add, b) => write!(f, "{a}+{b}"),
            Expr::Arith(a, ArithOp::Sub, b) => write!(f, "{a}-{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Builtin {
    pub lhs: Term,
    pub op: CmpOp,
    pub rhs: Expr,
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.lhs, self.op.symbol(), self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BodyItem {
    Pos(Literal),
    Neg(Literal),
    Builtin(Builtin),
}

impl fmt::Display for BodyItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyItem::Pos(l) => write!(f, "{l}"),
            BodyItem::Neg(l) => write!(f, "not {l}"),
            BodyItem::Builtin(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleKind {
    Fact,
    Constraint,
    Rule,
}

/// A rule `h1 v ... v hl :- body.` with a program-unique name.
///
/// Head and body are kept in source order without duplicates; semantically
/// they are sets.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Rule {
    pub name: Term,
    /// True when the name was given explicitly as a `name:` label.
    pub labelled: bool,
    pub head: Vec<Literal>,
    pub body: Vec<BodyItem>,
    #[serde(skip)]
    pub span: Option<SourceSpan>,
}

impl PartialEq for Rule {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.labelled == other.labelled
            && self.head == other.head
            && self.body == other.body
    }
}

impl Eq for Rule {}

impl Rule {
    /// An unlabelled rule; its name is assigned when it joins a program.
    pub fn new(head: Vec<Literal>, body: Vec<BodyItem>) -> Rule {
        let mut r = Rule { name: Term::Int(0), labelled: false, head, body, span: None };
        r.dedup();
        r
    }

    pub fn fact(l: Literal) -> Rule {
        Rule::new(vec![l], Vec::new())
    }

    pub fn labelled(name: impl Into<String>, head: Vec<Literal>, body: Vec<BodyItem>) -> Rule {
        let mut r = Rule::new(head, body);
        r.name = Term::Sym(name.into());
        r.labelled = true;
        r
    }

    pub fn from_parts(head: Vec<Literal>, pos: Vec<Literal>, neg: Vec<Literal>) -> Rule {
        let body = pos.into_iter().map(BodyItem::Pos).chain(neg.into_iter().map(BodyItem::Neg)).collect();
        Rule::new(head, body)
    }

    pub(crate) fn dedup(&mut self) {
        let mut seen = HashSet::new();
        self.head.retain(|l| seen.insert(l.clone()));
        let mut seen = HashSet::new();
        self.body.retain(|b| seen.insert(b.clone()));
    }

    pub fn pbody(&self) -> impl Iterator<Item = &Literal> {
        self.body.iter().filter_map(|b| match b {
            BodyItem::Pos(l) => Some(l),
            _ => None,
        })
    }

    pub fn nbody(&self) -> impl Iterator<Item = &Literal> {
        self.body.iter().filter_map(|b| match b {
            BodyItem::Neg(l) => Some(l),
            _ => None,
        })
    }

    pub fn builtins(&self) -> impl Iterator<Item = &Builtin> {
        self.body.iter().filter_map(|b| match b {
            BodyItem::Builtin(x) => Some(x),
            _ => None,
        })
    }

    pub fn has_builtins(&self) -> bool {
        self.builtins().next().is_some()
    }

    pub fn kind(&self) -> RuleKind {
        if self.head.is_empty() {
            RuleKind::Constraint
        } else if self.head.len() == 1 && self.body.is_empty() {
            RuleKind::Fact
        } else {
            RuleKind::Rule
        }
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn is_fact(&self) -> bool {
        self.kind() == RuleKind::Fact
    }

    /// A head literal also occurs in the positive body, so every
    /// interpretation satisfies the rule.
    pub fn is_tautology(&self) -> bool {
        self.pbody().any(|l| self.head.contains(l))
    }

    pub fn is_ground(&self) -> bool {
        self.head.iter().all(Literal::is_ground)
            && self.body.iter().all(|b| match b {
                BodyItem::Pos(l) | BodyItem::Neg(l) => l.is_ground(),
                BodyItem::Builtin(x) => !x.lhs.is_var() && x.rhs.terms().iter().all(|t| !t.is_var()),
            })
    }

    /// Every literal of the rule, head first.
    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.head.iter().chain(self.body.iter().filter_map(|b| match b {
            BodyItem::Pos(l) | BodyItem::Neg(l) => Some(l),
            BodyItem::Builtin(_) => None,
        }))
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut push = |t: &Term| {
            if let Term::Var(v) = t {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        };
        for l in &self.head {
            l.atom.args.iter().for_each(&mut push);
        }
        for b in &self.body {
            match b {
                BodyItem::Pos(l) | BodyItem::Neg(l) => l.atom.args.iter().for_each(&mut push),
                BodyItem::Builtin(x) => {
                    push(&x.lhs);
                    x.rhs.terms().into_iter().for_each(&mut push);
                }
            }
        }
        out
    }

    pub fn display_name(&self) -> String {
        self.name.to_string()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.labelled {
            write!(f, "{}: ", self.name)?;
        }
        for (i, l) in self.head.iter().enumerate() {
            if i > 0 {
                f.write_str(" v ")?;
            }
            write!(f, "{l}")?;
        }
        if !self.body.is_empty() {
            if self.head.is_empty() {
                f.write_str(":- ")?;
            } else {
                f.write_str(" :- ")?;
            }
            for (i, b) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{b}")?;
            }
        }
        f.write_str(".")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub ground: bool,
    pub positive: bool,
    pub normal: bool,
    pub hcf: bool,
    pub stratified: bool,
}

/// An ordered collection of uniquely named rules.
#[derive(Clone, Debug, Default)]
pub struct Program {
    rules: Vec<Rule>,
    flags: OnceLock<Flags>,
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules
    }
}

impl Eq for Program {}

impl Program {
    /// Builds a program, numbering unlabelled rules 1, 2, ... by position.
    pub fn new(mut rules: Vec<Rule>) -> Result<Program> {
        for (i, r) in rules.iter_mut().enumerate() {
            if !r.labelled {
                r.name = Term::Int(i as i64 + 1);
            }
        }
        Program::with_names(rules)
    }

    /// Builds a program keeping the names already carried by the rules.
    pub fn with_names(rules: Vec<Rule>) -> Result<Program> {
        let mut seen = HashSet::new();
        for r in &rules {
            if !seen.insert(&r.name) {
                return Err(Error::DuplicateRuleName { name: r.name.to_string(), span: r.span });
            }
        }
        Ok(Program { rules, flags: OnceLock::new() })
    }

    pub fn empty() -> Program {
        Program::default()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn into_rules(self) -> Vec<Rule> {
        self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rule(&self, name: &Term) -> Option<&Rule> {
        self.rules.iter().find(|r| &r.name == name)
    }

    /// Concatenation, renumbering unlabelled rules of the result.
    pub fn concat(&self, other: &Program) -> Result<Program> {
        let mut rules = self.rules.clone();
        rules.extend(other.rules.iter().cloned());
        Program::new(rules)
    }

    pub fn is_ground(&self) -> bool {
        self.rules.iter().all(Rule::is_ground)
    }

    pub fn has_builtins(&self) -> bool {
        self.rules.iter().any(Rule::has_builtins)
    }

    pub fn has_constraints(&self) -> bool {
        self.rules.iter().any(Rule::is_constraint)
    }

    pub fn has_strong_negation(&self) -> bool {
        self.rules.iter().any(|r| r.literals().any(|l| l.neg))
    }

    /// Lit(P): every literal occurring in the program.
    pub fn literals(&self) -> BTreeSet<Literal> {
        self.rules.iter().flat_map(|r| r.literals().cloned()).collect()
    }

    pub fn head_literals(&self) -> BTreeSet<Literal> {
        self.rules.iter().flat_map(|r| r.head.iter().cloned()).collect()
    }

    pub fn predicates(&self) -> BTreeSet<String> {
        self.rules.iter().flat_map(|r| r.literals().map(|l| l.atom.pred.clone())).collect()
    }

    pub fn head_predicates(&self) -> BTreeSet<String> {
        self.rules.iter().flat_map(|r| r.head.iter().map(|l| l.atom.pred.clone())).collect()
    }

    pub fn flags(&self) -> Flags {
        *self.flags.get_or_init(|| classify(self))
    }

    /// Fails with [`Error::NonGround`] or [`Error::BuiltinPresent`] unless
    /// the program is ground and free of built-ins.
    pub fn require_ground(&self) -> Result<()> {
        for r in &self.rules {
            if !r.is_ground() {
                return Err(Error::NonGround { rule: r.display_name() });
            }
            if r.has_builtins() {
                return Err(Error::BuiltinPresent { rule: r.display_name() });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Dependency graph over literals (or predicate-level nodes for
/// non-ground programs).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DependencyGraph {
    pub nodes: Vec<Literal>,
    pub positive: BTreeSet<(usize, usize)>,
    pub negative: BTreeSet<(usize, usize)>,
    pub disjunctive: BTreeSet<(usize, usize)>,
}

impl DependencyGraph {
    fn build(p: &Program, abstract_node: impl Fn(&Literal) -> Literal, with_neg: bool) -> DependencyGraph {
        let mut g = DependencyGraph::default();
        let mut index: HashMap<Literal, usize> = HashMap::new();
        let mut id = |g: &mut DependencyGraph, l: &Literal| -> usize {
            let key = abstract_node(l);
            *index.entry(key.clone()).or_insert_with(|| {
                g.nodes.push(key);
                g.nodes.len() - 1
            })
        };
        for r in p.rules() {
            let heads: Vec<usize> = r.head.iter().map(|l| id(&mut g, l)).collect();
            let pos: Vec<usize> = r.pbody().map(|l| id(&mut g, l)).collect();
            let neg: Vec<usize> = r.nbody().map(|l| id(&mut g, l)).collect();
            for &h in &heads {
                for &b in &pos {
                    g.positive.insert((h, b));
                }
                if with_neg {
                    for &b in &neg {
                        g.negative.insert((h, b));
                    }
                    for &h2 in &heads {
                        if h != h2 {
                            g.disjunctive.insert((h, h2));
                        }
                    }
                }
            }
        }
        g
    }

    pub fn node(&self, l: &Literal) -> Option<usize> {
        self.nodes.iter().position(|n| n == l)
    }

    pub fn has_edge(&self, from: &Literal, to: &Literal) -> bool {
        match (self.node(from), self.node(to)) {
            (Some(a), Some(b)) => self.positive.contains(&(a, b)),
            _ => false,
        }
    }

    fn adjacency(&self, edges: &[&BTreeSet<(usize, usize)>]) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for set in edges {
            for &(a, b) in set.iter() {
                adj[a].push(b);
            }
        }
        adj
    }
}

/// Positive dependency graph: an edge h -> b for every h in a head and b in
/// the positive body of the same rule.
pub fn positive_dependency_graph(p: &Program) -> DependencyGraph {
    DependencyGraph::build(p, Literal::clone, false)
}

/// Full dependency graph (positive, negative and co-head edges).
pub fn dependency_graph(p: &Program) -> DependencyGraph {
    if p.is_ground() {
        DependencyGraph::build(p, Literal::clone, true)
    } else {
        DependencyGraph::build(p, predicate_node, true)
    }
}

fn predicate_node(l: &Literal) -> Literal {
    Literal { neg: l.neg, atom: Atom { pred: format!("{}/{}", l.atom.pred, l.atom.arity()), args: Vec::new() } }
}

/// Computes all classification flags. Non-ground programs are classified
/// on their predicate-level abstraction, which is conservative for `hcf`
/// and `stratified`.
pub fn classify(p: &Program) -> Flags {
    let ground = p.is_ground();
    let positive = p.rules().iter().all(|r| r.nbody().next().is_none());
    let normal = p.rules().iter().all(|r| r.head.len() <= 1);
    let g = dependency_graph(p);

    let pos_adj = g.adjacency(&[&g.positive]);
    let pos_comp = graph::scc(&pos_adj);
    let mut hcf = true;
    let node_of: HashMap<&Literal, usize> = g.nodes.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let abstract_lit = |l: &Literal| if ground { l.clone() } else { predicate_node(l) };
    'outer: for r in p.rules() {
        let ids: Vec<usize> = r.head.iter().map(|l| node_of[&abstract_lit(l)]).collect();
        for i in 0..ids.len() {
            for j in i + 1..ids.len() {
                if ids[i] != ids[j] && pos_comp[ids[i]] == pos_comp[ids[j]] {
                    hcf = false;
                    break 'outer;
                }
                if ids[i] == ids[j] && !ground {
                    // Two head atoms of one predicate: recursion through it breaks HCF.
                    if pos_adj[ids[i]].iter().any(|&b| pos_comp[b] == pos_comp[ids[i]]) {
                        hcf = false;
                        break 'outer;
                    }
                }
            }
        }
    }

    let all_adj = g.adjacency(&[&g.positive, &g.negative, &g.disjunctive]);
    let comp = graph::scc(&all_adj);
    let stratified = g.negative.iter().all(|&(a, b)| comp[a] != comp[b]);

    Flags { ground, positive, normal, hcf, stratified }
}

/// Gelfond-Lifschitz reduct of a ground program.
pub fn reduct(p: &Program, s: &BTreeSet<Literal>) -> Result<Program> {
    p.require_ground()?;
    let rules = p
        .rules()
        .iter()
        .filter(|r| r.nbody().all(|l| !s.contains(l)))
        .map(|r| {
            let mut r = r.clone();
            r.body.retain(|b| !matches!(b, BodyItem::Neg(_)));
            r
        })
        .collect();
    Program::with_names(rules)
}

/// Head literals of `check` whose atom occurs in `guess` (under either
/// sign). Empty means Lit(guess) splits guess ∪ check.
pub fn splitting_violations(guess: &Program, check: &Program) -> Vec<Literal> {
    let guess_atoms: HashSet<&Atom> = guess.rules().iter().flat_map(|r| r.literals().map(|l| &l.atom)).collect();
    let out: BTreeSet<Literal> =
        check.rules().iter().flat_map(|r| r.head.iter()).filter(|l| guess_atoms.contains(&l.atom)).cloned().collect();
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;

    fn p(s: &str) -> Program {
        parse(s).unwrap()
    }

    #[test]
    fn hcf_examples() {
        assert!(p("a v b :- c.").flags().hcf);
        assert!(!p("a v b. a :- b. b :- a.").flags().hcf);
        assert!(!p("a :- not b. b :- not a.").flags().stratified);
        assert!(p("a :- not b. b :- c.").flags().stratified);
    }

    #[test]
    fn disjunction_counts_as_recursion() {
        // a depends negatively on b, b co-heads with a.
        assert!(!p("a v b. a :- not b.").flags().stratified);
    }

    #[test]
    fn reduct_examples() {
        let prog = p("a :- not b.");
        assert_eq!(reduct(&prog, &BTreeSet::new()).unwrap().to_string(), "a.");
        let s: BTreeSet<_> = [Literal::prop("b")].into();
        assert!(reduct(&prog, &s).unwrap().is_empty());
        let prog = p("a v b :- c, not d. d.");
        let s: BTreeSet<_> = [Literal::prop("d")].into();
        assert_eq!(reduct(&prog, &s).unwrap().to_string(), "d.");
        assert!(reduct(&p("p(X) :- q(X)."), &s).is_err());
    }

    #[test]
    fn splitting_examples() {
        assert!(splitting_violations(&p("g v -g."), &p("x :- g.")).is_empty());
        assert_eq!(splitting_violations(&p("a."), &p("a :- b.")), vec![Literal::prop("a")]);
        let v = splitting_violations(&p("p(1)."), &p("q :- p(1). p(1) :- q."));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].to_string(), "p(1)");
    }

    #[test]
    fn positive_graph_edges() {
        let g = positive_dependency_graph(&p("a v b :- c."));
        assert!(g.has_edge(&Literal::prop("a"), &Literal::prop("c")));
        assert!(g.has_edge(&Literal::prop("b"), &Literal::prop("c")));
        assert!(!g.has_edge(&Literal::prop("c"), &Literal::prop("a")));
        assert!(positive_dependency_graph(&Program::empty()).nodes.is_empty());
    }

    #[test]
    fn literal_order_and_kinds() {
        assert!(Literal::prop("-a") < Literal::prop("a"));
        assert!(Term::Int(10) < Term::sym("a"));
        assert!(Term::Int(2) < Term::Int(10));
        let r = p("a. :- b. c :- d.");
        let kinds: Vec<_> = r.rules().iter().map(Rule::kind).collect();
        assert_eq!(kinds, vec![RuleKind::Fact, RuleKind::Constraint, RuleKind::Rule]);
    }

    #[test]
    fn auto_names_are_positional() {
        let r = p("a. r: b. c.");
        let names: Vec<String> = r.rules().iter().map(|r| r.name.to_string()).collect();
        assert_eq!(names, vec!["1", "r", "3"]);
    }
}

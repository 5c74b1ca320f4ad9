//! Instantiation of non-ground programs.
//!
//! Two modes share one rule compiler:
//! * `Naive` substitutes universe constants for every variable occurring in
//!   a positive body literal, in all possible ways.
//! * `Relevant` only builds instances whose positive body literals are
//!   possibly derivable (a bottom-up, semi-naive join). It yields a subset
//!   of the naive instances with the same answer sets.
//!
//! Both evaluate built-ins and drop falsified instances. The result of an
//! assignment `X = Y + k` must lie in the universe, otherwise the instance is
//! dropped.

use crate::error::{Error, Result};
use crate::graph;
use crate::program::{ArithOp, Atom, BodyItem, Builtin, CmpOp, Expr, Literal, Program, Rule, Term};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum GroundMode {
    #[default]
    Naive,
    Relevant,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundingReport {
    pub input_rules: usize,
    pub output_rules: usize,
    pub universe_size: usize,
    /// Instances discarded because a built-in evaluated to false (or an
    /// assignment left the universe).
    pub dropped: usize,
}

/// Constants of `p` in canonical order: integers numerically, then symbols,
/// then quoted strings. Operands of `+`/`-` are not part of the universe.
pub fn universe(p: &Program) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    for r in p.rules() {
        for l in r.literals() {
            out.extend(l.atom.args.iter().filter(|t| !t.is_var()).cloned());
        }
        for b in r.builtins() {
            if !b.lhs.is_var() {
                out.insert(b.lhs.clone());
            }
            if let Expr::Term(t) = &b.rhs {
                if !t.is_var() {
                    out.insert(t.clone());
                }
            }
        }
    }
    out
}

/// Naive grounding over the program's own universe.
pub fn ground(p: &Program) -> Result<(Program, GroundingReport)> {
    Grounder::new(GroundMode::Naive).ground(p)
}

/// Configurable grounder.
#[derive(Clone, Debug, Default)]
pub struct Grounder {
    pub mode: GroundMode,
    /// Constants added to the universe (e.g. those of a companion program).
    pub extra_constants: BTreeSet<Term>,
    /// Relevant mode: literals assumed possibly derivable from outside.
    pub seeds: Vec<Literal>,
    /// Relevant mode: remove `not l` when `l` can never be derived.
    pub simplify: bool,
}

impl Grounder {
    pub fn new(mode: GroundMode) -> Grounder {
        Grounder { mode, ..Grounder::default() }
    }

    pub fn with_constants(mut self, c: impl IntoIterator<Item = Term>) -> Grounder {
        self.extra_constants.extend(c);
        self
    }

    pub fn with_seeds(mut self, s: impl IntoIterator<Item = Literal>) -> Grounder {
        self.seeds.extend(s);
        self
    }

    pub fn simplified(mut self) -> Grounder {
        self.simplify = true;
        self
    }

    pub fn ground(&self, p: &Program) -> Result<(Program, GroundingReport)> {
        let mut uni = universe(p);
        uni.extend(self.extra_constants.iter().cloned());
        let compiled: Vec<CRule> = p.rules().iter().map(compile).collect::<Result<_>>()?;
        let mut ctx = Ctx { universe: uni, dropped: 0, out: Vec::new(), seen: HashSet::new() };
        match self.mode {
            GroundMode::Naive => {
                let uvec: Vec<Term> = ctx.universe.iter().cloned().collect();
                for (i, cr) in compiled.iter().enumerate() {
                    naive_rule(i, cr, &uvec, &mut ctx);
                }
            }
            GroundMode::Relevant => relevant(&compiled, &self.seeds, self.simplify, &mut ctx),
        }
        let universe_size = ctx.universe.len();
        let dropped = ctx.dropped;
        let mut items = ctx.out;
        items.sort_by_key(|i| (i.rule, i.seq));
        let mut counters: HashMap<usize, usize> = HashMap::new();
        let rules: Vec<Rule> = items
            .into_iter()
            .map(|i| {
                let src = &p.rules()[i.rule];
                let mut r = i.rule_out;
                if src.labelled {
                    r.labelled = true;
                    r.name = if compiled[i.rule].vars.is_empty() {
                        src.name.clone()
                    } else {
                        let k = counters.entry(i.rule).or_insert(0);
                        *k += 1;
                        Term::Sym(format!("{}_{}", src.name, k))
                    };
                }
                r.span = src.span;
                r
            })
            .collect();
        let out = Program::new(rules)?;
        let report = GroundingReport { input_rules: p.len(), output_rules: out.len(), universe_size, dropped };
        Ok((out, report))
    }
}

/// Grounds a guess/check pair: both share one universe, and in relevant
/// mode the check program is seeded with everything the guess may derive.
pub fn ground_pair(guess: &Program, check: &Program, mode: GroundMode) -> Result<(Program, Program)> {
    let mut constants = universe(guess);
    constants.extend(universe(check));
    let g = Grounder { mode, extra_constants: constants.clone(), ..Grounder::default() };
    let (gg, _) = g.ground(guess)?;
    let c = Grounder { mode, extra_constants: constants, seeds: gg.head_literals().into_iter().collect(), simplify: false };
    let (cg, _) = c.ground(check)?;
    Ok((gg, cg))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum PT {
    C(Term),
    V(usize),
}

#[derive(Clone, Debug)]
struct Pat {
    neg: bool,
    pred: String,
    args: Vec<PT>,
}

impl Pat {
    fn key(&self) -> RelKey {
        (self.neg, self.pred.clone(), self.args.len())
    }

    fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.args.iter().filter_map(|a| match a {
            PT::V(v) => Some(*v),
            PT::C(_) => None,
        })
    }

    fn instantiate(&self, b: &[Option<Term>]) -> Literal {
        let args = self
            .args
            .iter()
            .map(|a| match a {
                PT::C(t) => t.clone(),
                PT::V(v) => b[*v].clone().expect("bound variable"),
            })
            .collect();
        Literal { neg: self.neg, atom: Atom { pred: self.pred.clone(), args } }
    }
}

#[derive(Clone, Debug)]
enum CExpr {
    T(PT),
    A(PT, ArithOp, PT),
}

#[derive(Clone, Debug)]
struct CBuiltin {
    lhs: PT,
    op: CmpOp,
    rhs: CExpr,
}

impl CBuiltin {
    fn vars(&self) -> Vec<usize> {
        let mut v = Vec::new();
        let mut push = |p: &PT| {
            if let PT::V(x) = p {
                v.push(*x)
            }
        };
        push(&self.lhs);
        match &self.rhs {
            CExpr::T(a) => push(a),
            CExpr::A(a, _, b) => {
                push(a);
                push(b)
            }
        }
        v
    }
}

#[derive(Clone, Debug)]
enum BodyPat {
    Pos(usize),
    Neg(usize),
}

#[derive(Clone, Debug)]
struct CRule {
    vars: Vec<String>,
    head: Vec<Pat>,
    pos: Vec<Pat>,
    neg: Vec<Pat>,
    /// Body order of positive/negative literals as written.
    order: Vec<BodyPat>,
    builtins: Vec<CBuiltin>,
    /// Variables bound by positive literals, in first-occurrence order.
    domain_vars: Vec<usize>,
    name: String,
}

enum Step {
    /// Check a built-in whose variables are all bound.
    Test(usize),
    /// Bind variable from the expression on the other side.
    AssignLhs(usize),
    AssignRhs(usize),
}

fn compile(r: &Rule) -> Result<CRule> {
    let vars = r.variables();
    let vid = |t: &Term| -> PT {
        match t {
            Term::Var(v) => PT::V(vars.iter().position(|x| x == v).expect("collected")),
            c => PT::C(c.clone()),
        }
    };
    let pat = |l: &Literal| Pat { neg: l.neg, pred: l.atom.pred.clone(), args: l.atom.args.iter().map(vid).collect() };
    let head: Vec<Pat> = r.head.iter().map(pat).collect();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut order = Vec::new();
    let mut builtins = Vec::new();
    for b in &r.body {
        match b {
            BodyItem::Pos(l) => {
                order.push(BodyPat::Pos(pos.len()));
                pos.push(pat(l));
            }
            BodyItem::Neg(l) => {
                order.push(BodyPat::Neg(neg.len()));
                neg.push(pat(l));
            }
            BodyItem::Builtin(Builtin { lhs, op, rhs }) => {
                let rhs = match rhs {
                    Expr::Term(t) => CExpr::T(vid(t)),
                    Expr::Arith(a, o, b) => {
                        for t in [a, b] {
                            if !t.is_var() && t.as_int().is_none() {
                                return Err(Error::Arithmetic { constant: t.to_string(), rule: r.display_name() });
                            }
                        }
                        CExpr::A(vid(a), *o, vid(b))
                    }
                };
                builtins.push(CBuiltin { lhs: vid(lhs), op: *op, rhs });
            }
        }
    }
    let mut domain_vars = Vec::new();
    for p in &pos {
        for v in p.vars() {
            if !domain_vars.contains(&v) {
                domain_vars.push(v);
            }
        }
    }
    let cr = CRule { vars, head, pos, neg, order, builtins, domain_vars, name: r.display_name() };
    // Safety: everything must be bound by positive literals or assignments.
    let mut bound = vec![false; cr.vars.len()];
    for &v in &cr.domain_vars {
        bound[v] = true;
    }
    schedule(&cr, &mut bound);
    if let Some(v) = bound.iter().position(|b| !b) {
        return Err(Error::UnsafeRule { variable: cr.vars[v].clone(), rule: cr.name.clone(), span: r.span });
    }
    Ok(cr)
}

/// Steps enabled by the current bound set (updated in place), in a fixed
/// order. Assignments are applied as soon as their source side is bound.
fn schedule_from(cr: &CRule, bound: &mut [bool], done: &mut [bool]) -> Vec<Step> {
    let mut steps = Vec::new();
    loop {
        let mut progress = false;
        for (i, b) in cr.builtins.iter().enumerate() {
            if done[i] {
                continue;
            }
            let unbound: Vec<usize> = b.vars().into_iter().filter(|&v| !bound[v]).collect();
            if unbound.is_empty() {
                steps.push(Step::Test(i));
                done[i] = true;
                progress = true;
            } else if b.op == CmpOp::Eq {
                let lhs_unbound = matches!(b.lhs, PT::V(v) if !bound[v]);
                let rhs_vars: Vec<usize> = match &b.rhs {
                    CExpr::T(PT::V(v)) => vec![*v],
                    CExpr::A(a, _, c) => [a, c].iter().filter_map(|p| if let PT::V(v) = p { Some(*v) } else { None }).collect(),
                    _ => vec![],
                };
                if lhs_unbound && rhs_vars.iter().all(|&v| bound[v]) {
                    if let PT::V(v) = b.lhs {
                        bound[v] = true;
                    }
                    steps.push(Step::AssignLhs(i));
                    done[i] = true;
                    progress = true;
                } else if let (CExpr::T(PT::V(v)), false) = (&b.rhs, lhs_unbound) {
                    if !bound[*v] {
                        bound[*v] = true;
                        steps.push(Step::AssignRhs(i));
                        done[i] = true;
                        progress = true;
                    }
                }
            }
        }
        if !progress {
            return steps;
        }
    }
}

fn schedule(cr: &CRule, bound: &mut [bool]) -> Vec<Step> {
    let mut done = vec![false; cr.builtins.len()];
    schedule_from(cr, bound, &mut done)
}

fn value(p: &PT, b: &[Option<Term>]) -> Term {
    match p {
        PT::C(t) => t.clone(),
        PT::V(v) => b[*v].clone().expect("scheduled after binding"),
    }
}

/// `None` means the instance is dropped.
fn eval(e: &CExpr, b: &[Option<Term>]) -> Option<Term> {
    match e {
        CExpr::T(p) => Some(value(p, b)),
        CExpr::A(x, op, y) => {
            let (x, y) = (value(x, b).as_int()?, value(y, b).as_int()?);
            let r = match op {
                ArithOp::Add => x.checked_add(y)?,
                ArithOp::Sub => x.checked_sub(y)?,
            };
            Some(Term::Int(r))
        }
    }
}

/// Runs steps; returns false if the instance must be dropped.
fn run_steps(cr: &CRule, steps: &[Step], b: &mut [Option<Term>], universe: &BTreeSet<Term>) -> bool {
    for s in steps {
        match *s {
            Step::Test(i) => {
                let bi = &cr.builtins[i];
                let l = value(&bi.lhs, b);
                let Some(r) = eval(&bi.rhs, b) else { return false };
                if !bi.op.holds(l.cmp(&r)) {
                    return false;
                }
            }
            Step::AssignLhs(i) => {
                let bi = &cr.builtins[i];
                let Some(r) = eval(&bi.rhs, b) else { return false };
                if !universe.contains(&r) {
                    return false;
                }
                if let PT::V(v) = bi.lhs {
                    b[v] = Some(r);
                }
            }
            Step::AssignRhs(i) => {
                let bi = &cr.builtins[i];
                let l = value(&bi.lhs, b);
                if !universe.contains(&l) {
                    return false;
                }
                if let CExpr::T(PT::V(v)) = bi.rhs {
                    b[v] = Some(l);
                }
            }
        }
    }
    true
}

struct Item {
    rule: usize,
    seq: usize,
    rule_out: Rule,
}

struct Ctx {
    universe: BTreeSet<Term>,
    dropped: usize,
    out: Vec<Item>,
    seen: HashSet<(Vec<Literal>, Vec<BodyItem>)>,
}

impl Ctx {
    /// Records an instance; returns it if new.
    fn emit(&mut self, idx: usize, cr: &CRule, b: &[Option<Term>], drop_neg: Option<&dyn Fn(&Literal) -> bool>) -> Option<&Rule> {
        let head: Vec<Literal> = cr.head.iter().map(|p| p.instantiate(b)).collect();
        let mut body = Vec::new();
        for o in &cr.order {
            match o {
                BodyPat::Pos(i) => body.push(BodyItem::Pos(cr.pos[*i].instantiate(b))),
                BodyPat::Neg(i) => {
                    let l = cr.neg[*i].instantiate(b);
                    if drop_neg.is_some_and(|f| f(&l)) {
                        continue;
                    }
                    body.push(BodyItem::Neg(l));
                }
            }
        }
        let mut r = Rule::new(head, body);
        r.dedup();
        if !self.seen.insert((r.head.clone(), r.body.clone())) {
            return None;
        }
        let seq = self.out.len();
        self.out.push(Item { rule: idx, seq, rule_out: r });
        self.out.last().map(|i| &i.rule_out)
    }
}

fn naive_rule(rule_idx: usize, cr: &CRule, uvec: &[Term], ctx: &mut Ctx) {
    let n = cr.domain_vars.len();
    let mut bound = vec![false; cr.vars.len()];
    for &v in &cr.domain_vars {
        bound[v] = true;
    }
    let steps = schedule(cr, &mut bound);
    if n > 0 && uvec.is_empty() {
        return;
    }
    let mut digits = vec![0usize; n];
    loop {
        let mut b: Vec<Option<Term>> = vec![None; cr.vars.len()];
        for (k, &v) in cr.domain_vars.iter().enumerate() {
            b[v] = Some(uvec[digits[k]].clone());
        }
        if run_steps(cr, &steps, &mut b, &ctx.universe) {
            ctx.emit(rule_idx, cr, &b, None);
        } else {
            ctx.dropped += 1;
        }
        // odometer, last variable fastest
        let mut k = n;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < uvec.len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

type RelKey = (bool, String, usize);

#[derive(Default)]
struct Rel {
    tuples: Vec<Vec<Term>>,
    members: HashSet<Vec<Term>>,
    index: HashMap<(usize, Term), Vec<u32>>,
}

impl Rel {
    fn insert(&mut self, t: Vec<Term>) -> bool {
        if self.members.contains(&t) {
            return false;
        }
        let id = self.tuples.len() as u32;
        for (i, a) in t.iter().enumerate() {
            self.index.entry((i, a.clone())).or_default().push(id);
        }
        self.members.insert(t.clone());
        self.tuples.push(t);
        true
    }
}

#[derive(Default)]
struct Store {
    rels: HashMap<RelKey, Rel>,
}

impl Store {
    fn insert(&mut self, l: &Literal) -> bool {
        self.rels.entry((l.neg, l.atom.pred.clone(), l.atom.args.len())).or_default().insert(l.atom.args.clone())
    }

    fn contains(&self, l: &Literal) -> bool {
        self.rels.get(&(l.neg, l.atom.pred.clone(), l.atom.args.len())).is_some_and(|r| r.members.contains(&l.atom.args))
    }

    fn len(&self, k: &RelKey) -> usize {
        self.rels.get(k).map_or(0, |r| r.tuples.len())
    }
}

/// Join plan for one rule with one designated delta literal.
struct Plan {
    order: Vec<usize>,
    /// steps[k] runs after binding order[k]; steps before any literal in `pre`.
    pre: Vec<Step>,
    steps: Vec<Vec<Step>>,
}

fn plan(cr: &CRule, first: Option<usize>) -> Plan {
    let mut bound = vec![false; cr.vars.len()];
    let mut done = vec![false; cr.builtins.len()];
    let pre = schedule_from(cr, &mut bound, &mut done);
    let mut order = Vec::new();
    let mut steps = Vec::new();
    let mut remaining: Vec<usize> = (0..cr.pos.len()).collect();
    if let Some(f) = first {
        remaining.retain(|&i| i != f);
        order.push(f);
        for v in cr.pos[f].vars() {
            bound[v] = true;
        }
        steps.push(schedule_from(cr, &mut bound, &mut done));
    }
    while !remaining.is_empty() {
        let score = |i: usize| {
            let p = &cr.pos[i];
            let b = p.args.iter().filter(|a| matches!(a, PT::C(_)) || matches!(a, PT::V(v) if bound[*v])).count();
            (b == p.args.len(), b)
        };
        let (pos, _) = remaining.iter().enumerate().max_by(|a, b| score(*a.1).cmp(&score(*b.1)).then(b.0.cmp(&a.0))).expect("non-empty");
        let i = remaining.remove(pos);
        order.push(i);
        for v in cr.pos[i].vars() {
            bound[v] = true;
        }
        steps.push(schedule_from(cr, &mut bound, &mut done));
    }
    Plan { order, pre, steps }
}

/// Ranges per positive literal index: tuples [lo, hi) of its relation.
type Ranges = Vec<(usize, usize)>;

#[allow(clippy::too_many_arguments)]
fn join(
    cr: &CRule,
    plan: &Plan,
    k: usize,
    ranges: &Ranges,
    store: &Store,
    b: &mut Vec<Option<Term>>,
    universe: &BTreeSet<Term>,
    out: &mut Vec<Vec<Option<Term>>>,
    dropped: &mut usize,
) {
    if k == plan.order.len() {
        out.push(b.clone());
        return;
    }
    let li = plan.order[k];
    let pat = &cr.pos[li];
    let Some(rel) = store.rels.get(&pat.key()) else { return };
    let (lo, hi) = ranges[li];
    if lo >= hi {
        return;
    }
    // Pick the most selective bound argument.
    let mut cands: Option<&Vec<u32>> = None;
    for (i, a) in pat.args.iter().enumerate() {
        let v = match a {
            PT::C(t) => Some(t),
            PT::V(x) => b[*x].as_ref(),
        };
        if let Some(v) = v {
            match rel.index.get(&(i, v.clone())) {
                None => return,
                Some(list) => {
                    if cands.is_none_or(|c| list.len() < c.len()) {
                        cands = Some(list);
                    }
                }
            }
        }
    }
    let mut try_tuple = |t: &Vec<Term>, b: &mut Vec<Option<Term>>| {
        let mut newly = Vec::new();
        let mut ok = true;
        for (a, val) in pat.args.iter().zip(t) {
            match a {
                PT::C(c) => {
                    if c != val {
                        ok = false;
                        break;
                    }
                }
                PT::V(x) => match &b[*x] {
                    Some(cur) => {
                        if cur != val {
                            ok = false;
                            break;
                        }
                    }
                    None => {
                        b[*x] = Some(val.clone());
                        newly.push(*x);
                    }
                },
            }
        }
        if ok {
            let before = b.clone();
            if run_steps(cr, &plan.steps[k], b, universe) {
                join(cr, plan, k + 1, ranges, store, b, universe, out, dropped);
            } else {
                *dropped += 1;
            }
            *b = before;
        }
        for x in newly {
            b[x] = None;
        }
    };
    match cands {
        Some(list) => {
            let start = list.partition_point(|&i| (i as usize) < lo);
            for &i in &list[start..] {
                if i as usize >= hi {
                    break;
                }
                try_tuple(&rel.tuples[i as usize], b);
            }
        }
        None => {
            for t in &rel.tuples[lo..hi] {
                try_tuple(t, b);
            }
        }
    }
}

fn relevant(rules: &[CRule], seeds: &[Literal], simplify: bool, ctx: &mut Ctx) {
    let mut store = Store::default();
    for s in seeds {
        store.insert(s);
    }
    // Predicate-level components, dependencies first.
    let mut keys: Vec<RelKey> = Vec::new();
    let mut kid: HashMap<RelKey, usize> = HashMap::new();
    let mut id = |k: RelKey, keys: &mut Vec<RelKey>| -> usize {
        *kid.entry(k.clone()).or_insert_with(|| {
            keys.push(k);
            keys.len() - 1
        })
    };
    let mut rule_heads: Vec<Vec<usize>> = Vec::new();
    let mut rule_pos: Vec<Vec<usize>> = Vec::new();
    for cr in rules {
        rule_heads.push(cr.head.iter().map(|p| id(p.key(), &mut keys)).collect());
        rule_pos.push(cr.pos.iter().map(|p| id(p.key(), &mut keys)).collect());
    }
    let mut adj = vec![Vec::new(); keys.len()];
    for (h, p) in rule_heads.iter().zip(&rule_pos) {
        for &a in h {
            adj[a].extend(p.iter().copied());
            // co-head keys are derived together
            adj[a].extend(h.iter().copied());
        }
    }
    let comp = graph::scc(&adj);
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
    // Constraints have no head; evaluate them after everything else.
    let mut by_comp: Vec<Vec<usize>> = vec![Vec::new(); ncomp + 1];
    for (ri, h) in rule_heads.iter().enumerate() {
        let c = h.first().map_or(ncomp, |&k| comp[k]);
        by_comp[c].push(ri);
    }

    let mut emitted: Vec<(usize, Vec<Option<Term>>)> = Vec::new();
    for (c, members) in by_comp.iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        let in_comp = |k: usize| c < ncomp && comp[k] == c;
        let recursive = members.iter().any(|&ri| rule_pos[ri].iter().any(|&k| in_comp(k)));
        // lengths at the start of the previous delta for component relations
        let comp_keys: Vec<usize> = (0..keys.len()).filter(|&k| in_comp(k)).collect();
        let mut prev: HashMap<usize, usize> = comp_keys.iter().map(|&k| (k, 0)).collect();
        let mut first_round = true;
        loop {
            let cur: HashMap<usize, usize> = comp_keys.iter().map(|&k| (k, store.len(&keys[k]))).collect();
            let mut new_bindings: Vec<(usize, Vec<Option<Term>>)> = Vec::new();
            for &ri in members {
                let cr = &rules[ri];
                let rec_lits: Vec<usize> = (0..cr.pos.len()).filter(|&i| in_comp(rule_pos[ri][i])).collect();
                let full = |i: usize| (0usize, store.len(&keys[rule_pos[ri][i]]));
                if rec_lits.is_empty() {
                    if !first_round {
                        continue;
                    }
                    let ranges: Ranges = (0..cr.pos.len()).map(full).collect();
                    let pl = plan(cr, None);
                    run_plan(cr, &pl, &ranges, &store, &ctx.universe, &mut new_bindings, ri, &mut ctx.dropped);
                } else {
                    for (n, &d) in rec_lits.iter().enumerate() {
                        let mut ranges: Ranges = (0..cr.pos.len()).map(full).collect();
                        for (m, &j) in rec_lits.iter().enumerate() {
                            let k = rule_pos[ri][j];
                            ranges[j] = match m.cmp(&n) {
                                std::cmp::Ordering::Less => (0, prev[&k]),
                                std::cmp::Ordering::Equal => (prev[&k], cur[&k]),
                                std::cmp::Ordering::Greater => (0, cur[&k]),
                            };
                        }
                        let pl = plan(cr, Some(d));
                        run_plan(cr, &pl, &ranges, &store, &ctx.universe, &mut new_bindings, ri, &mut ctx.dropped);
                    }
                }
            }
            let mut grew = false;
            for (ri, b) in new_bindings {
                for h in &rules[ri].head {
                    if store.insert(&h.instantiate(&b)) {
                        grew = true;
                    }
                }
                emitted.push((ri, b));
            }
            first_round = false;
            if !recursive || !grew {
                break;
            }
            prev = cur;
        }
    }
    // Emit in (rule, discovery) order; emit dedupes identical instances.
    let mut per_rule: Vec<Vec<Vec<Option<Term>>>> = vec![Vec::new(); rules.len()];
    for (ri, b) in emitted {
        per_rule[ri].push(b);
    }
    let drop_fn = |l: &Literal| !store.contains(l);
    for (ri, list) in per_rule.into_iter().enumerate() {
        for b in list {
            let f: Option<&dyn Fn(&Literal) -> bool> = if simplify { Some(&drop_fn) } else { None };
            ctx.emit(ri, &rules[ri], &b, f);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_plan(
    cr: &CRule,
    pl: &Plan,
    ranges: &Ranges,
    store: &Store,
    universe: &BTreeSet<Term>,
    out: &mut Vec<(usize, Vec<Option<Term>>)>,
    ri: usize,
    dropped: &mut usize,
) {
    let mut b = vec![None; cr.vars.len()];
    if !run_steps(cr, &pl.pre, &mut b, universe) {
        *dropped += 1;
        return;
    }
    let mut found = Vec::new();
    join(cr, pl, 0, ranges, store, &mut b, universe, &mut found, dropped);
    out.extend(found.into_iter().map(|b| (ri, b)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;

    fn g(src: &str) -> (Program, GroundingReport) {
        ground(&parse(src).unwrap()).unwrap()
    }

    #[test]
    fn substitution() {
        let (p, rep) = g("time(0). time(1). dunk(T) v -dunk(T) :- time(T).");
        assert_eq!(p.to_string(), "time(0).\ntime(1).\ndunk(0) v -dunk(0) :- time(0).\ndunk(1) v -dunk(1) :- time(1).");
        assert_eq!(rep.output_rules, 4);
    }

    #[test]
    fn comparison_filters() {
        let (p, rep) = g("num(1). num(2). p(X,Y) :- num(X), num(Y), X < Y.");
        assert_eq!(p.rules()[2].to_string(), "p(1,2) :- num(1), num(2).");
        assert_eq!(p.len(), 3);
        assert_eq!(rep.dropped, 3);
    }

    #[test]
    fn assignment_stays_in_universe() {
        let (p, _) = g("t(0). t(1). t(2). s(Y) :- t(X), Y = X + 1.");
        let heads: Vec<String> = p.rules()[3..].iter().map(|r| r.head[0].to_string()).collect();
        assert_eq!(heads, vec!["s(1)", "s(2)"]);
    }

    #[test]
    fn unsafe_and_arithmetic_errors() {
        assert!(matches!(ground(&parse("p(X) :- not q(X).").unwrap()), Err(Error::UnsafeRule { .. })));
        assert!(matches!(ground(&parse("p(X) :- q(X), Y = X + a.").unwrap()), Err(Error::Arithmetic { .. })));
        // variable bound to a symbol: instance silently dropped
        let (p, _) = g("q(a). q(1). p(Y) :- q(X), Y = X + 0.");
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn ground_program_unchanged() {
        let src = parse("a :- b, not c. b v d. :- a, d.").unwrap();
        assert_eq!(ground(&src).unwrap().0, src);
    }

    #[test]
    fn universe_order() {
        let u: Vec<String> = universe(&parse("p(a,b). q(1).").unwrap()).iter().map(ToString::to_string).collect();
        assert_eq!(u, vec!["1", "a", "b"]);
        assert!(universe(&Program::empty()).is_empty());
    }

    #[test]
    fn relevant_mode_follows_derivations() {
        let src = parse("e(1,2). e(2,3). e(3,1). p(X,Y) :- e(X,Y). p(X,Z) :- p(X,Y), e(Y,Z). q(X) :- p(X,X), not r(X).").unwrap();
        let (rel, _) = Grounder::new(GroundMode::Relevant).ground(&src).unwrap();
        let qs = rel.rules().iter().filter(|r| r.head.first().is_some_and(|h| h.pred() == "q")).count();
        assert_eq!(qs, 3);
        let (naive, _) = ground(&src).unwrap();
        assert!(rel.len() < naive.len());
        for r in rel.rules() {
            assert!(naive.rules().iter().any(|n| n.head == r.head && n.body == r.body));
        }
    }

    #[test]
    fn labelled_instances_get_suffixes() {
        let (p, _) = g("n(1). n(2). r: m(X) :- n(X).");
        let names: Vec<String> = p.rules().iter().map(|r| r.name.to_string()).collect();
        assert_eq!(names, vec!["1", "2", "r_1", "r_2"]);
    }
}

//! Answer-set computation: the search engine, a brute-force oracle, the
//! HCF characterization test and a stratified evaluator.

mod asp;
pub mod sat;

use crate::error::{Error, Result};
use crate::graph;
use crate::ground::{GroundMode, Grounder};
use crate::program::{dependency_graph, Literal, Program, Rule};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::Duration;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Producer {
    Solver,
    Brute,
    HcfOracle,
    Stratified,
}

/// A consistent set of ground literals. Equality and order ignore the
/// producer.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnswerSet {
    pub literals: BTreeSet<Literal>,
    pub producer: Producer,
}

impl AnswerSet {
    pub fn new(literals: BTreeSet<Literal>, producer: Producer) -> AnswerSet {
        debug_assert!(is_consistent(&literals));
        AnswerSet { literals, producer }
    }

    pub fn contains(&self, l: &Literal) -> bool {
        self.literals.contains(l)
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Literals whose predicate is in `preds`.
    pub fn restrict_to_predicates(&self, preds: &[&str]) -> BTreeSet<Literal> {
        self.literals.iter().filter(|l| preds.contains(&l.pred())).cloned().collect()
    }

    pub fn restrict_to(&self, lits: &BTreeSet<Literal>) -> BTreeSet<Literal> {
        self.literals.intersection(lits).cloned().collect()
    }
}

impl PartialEq for AnswerSet {
    fn eq(&self, other: &Self) -> bool {
        self.literals == other.literals
    }
}

impl Eq for AnswerSet {}

impl PartialOrd for AnswerSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AnswerSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.literals.iter().cmp(other.literals.iter())
    }
}

impl std::fmt::Display for AnswerSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.literals.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn is_consistent(s: &BTreeSet<Literal>) -> bool {
    s.iter().filter(|l| l.neg).all(|l| !s.contains(&l.complement()))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub stability_checks: u64,
    /// Candidate models that failed the stability check.
    pub rejected: u64,
    pub wall_ms: u64,
}

/// Resource budget per solve call. `None` means unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub decisions: Option<u64>,
    pub time: Option<Duration>,
}

impl Default for Budget {
    /// 10 s and 10^6 decisions.
    fn default() -> Self {
        Budget { decisions: Some(1_000_000), time: Some(Duration::from_secs(10)) }
    }
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget { decisions: None, time: None }
    }

    /// The default budget with the time limit taken from `GC_BUDGET_MS`
    /// when that variable holds a number.
    pub fn from_env() -> Budget {
        let mut b = Budget::default();
        if let Some(ms) = std::env::var("GC_BUDGET_MS").ok().and_then(|v| v.trim().parse::<u64>().ok()) {
            b.time = Some(Duration::from_millis(ms));
        }
        b
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveConfig {
    /// Stop after this many answer sets.
    pub limit: Option<usize>,
    /// Enumerate one answer set per distinct projection onto these literals.
    pub project: Option<BTreeSet<Literal>>,
    pub budget: Budget,
}

impl SolveConfig {
    pub fn all() -> SolveConfig {
        SolveConfig::default()
    }

    pub fn first(k: usize) -> SolveConfig {
        SolveConfig { limit: Some(k), ..SolveConfig::default() }
    }

    pub fn projected(mut self, lits: BTreeSet<Literal>) -> SolveConfig {
        self.project = Some(lits);
        self
    }

    pub fn with_budget(mut self, b: Budget) -> SolveConfig {
        self.budget = b;
        self
    }
}

/// Enumerates answer sets of a ground, built-in-free program, sorted
/// canonically.
pub fn solve(p: &Program, limit: Option<usize>) -> Result<(Vec<AnswerSet>, SearchStats)> {
    solve_with(p, &SolveConfig { limit, ..SolveConfig::default() })
}

pub fn solve_with(p: &Program, cfg: &SolveConfig) -> Result<(Vec<AnswerSet>, SearchStats)> {
    let mut stats = SearchStats::default();
    let mut eng = asp::Engine::new(p)?;
    let mut sets = eng.enumerate(cfg.limit, cfg.project.as_ref(), &cfg.budget, &mut stats)?;
    sets.sort();
    Ok((sets, stats))
}

/// Grounds `p` (relevant mode) when needed, then solves.
pub fn solve_program(p: &Program, cfg: &SolveConfig) -> Result<(Vec<AnswerSet>, SearchStats)> {
    if p.is_ground() && !p.has_builtins() {
        return solve_with(p, cfg);
    }
    let (g, _) = Grounder::new(GroundMode::Relevant).simplified().ground(p)?;
    solve_with(&g, cfg)
}

/// True iff body(r) holds in `s`.
fn body_true(r: &Rule, s: &BTreeSet<Literal>) -> bool {
    r.pbody().all(|l| s.contains(l)) && r.nbody().all(|l| !s.contains(l))
}

/// `s` satisfies every rule of `p` read classically.
pub fn satisfies(p: &Program, s: &BTreeSet<Literal>) -> bool {
    p.rules().iter().all(|r| !body_true(r, s) || r.head.iter().any(|h| s.contains(h)))
}

/// Direct test of the definition: `s` is a minimal model of the reduct.
///
/// Minimality is decided by a backtracking search over the atoms of `s`
/// (atoms outside `s` stay false).
pub fn is_answer_set(p: &Program, s: &BTreeSet<Literal>) -> bool {
    if !is_consistent(s) {
        return false;
    }
    // Reduct rules relevant inside s: negative body disjoint from s.
    let red: Vec<&Rule> = p.rules().iter().filter(|r| r.nbody().all(|l| !s.contains(l))).collect();
    for r in &red {
        if r.pbody().all(|l| s.contains(l)) && !r.head.iter().any(|h| s.contains(h)) {
            return false;
        }
    }
    let atoms: Vec<&Literal> = s.iter().collect();
    let pos: HashMap<&Literal, usize> = atoms.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    // Each reduct rule restricted to s: clause over atoms(s) (pbody outside s makes it vacuous).
    let mut clauses: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for r in &red {
        if !r.pbody().all(|l| s.contains(l)) {
            continue;
        }
        let body: Vec<usize> = r.pbody().map(|l| pos[l]).collect();
        let head: Vec<usize> = r.head.iter().filter_map(|h| pos.get(h).copied()).collect();
        clauses.push((body, head));
    }
    let mut assign: Vec<Option<bool>> = vec![None; atoms.len()];
    !smaller_model(&clauses, &mut assign, 0)
}

/// Is there a model of the clauses (body -> head) with some atom false?
fn smaller_model(clauses: &[(Vec<usize>, Vec<usize>)], assign: &mut Vec<Option<bool>>, k: usize) -> bool {
    // Prune: a clause whose body is all true and head all false is violated.
    for (b, h) in clauses {
        if b.iter().all(|&i| assign[i] == Some(true)) && h.iter().all(|&i| assign[i] == Some(false)) {
            return false;
        }
    }
    if k == assign.len() {
        return assign.iter().any(|a| *a == Some(false));
    }
    for val in [false, true] {
        assign[k] = Some(val);
        if smaller_model(clauses, assign, k + 1) {
            assign[k] = None;
            return true;
        }
    }
    assign[k] = None;
    false
}

pub const BRUTE_FORCE_CAP: usize = 22;

/// Exhaustive oracle: every consistent subset of Lit(p) is tested against
/// the definition, with minimality checked over all proper subsets.
pub fn brute_force(p: &Program) -> Result<Vec<AnswerSet>> {
    brute_force_capped(p, BRUTE_FORCE_CAP)
}

pub fn brute_force_capped(p: &Program, cap: usize) -> Result<Vec<AnswerSet>> {
    p.require_ground()?;
    let lits: Vec<Literal> = p.literals().into_iter().collect();
    if lits.len() > cap {
        return Err(Error::CapExceeded { what: "literals for brute force".into(), size: lits.len(), cap });
    }
    // Literals never occurring in a head cannot be in any answer set, so the
    // enumeration keeps them out.
    let heads = p.head_literals();
    let cand: Vec<&Literal> = lits.iter().filter(|l| heads.contains(*l)).collect();
    let mut out = Vec::new();
    let n = cand.len();
    for mask in 0u64..(1u64 << n) {
        let s: BTreeSet<Literal> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| cand[i].clone()).collect();
        if !is_consistent(&s) {
            continue;
        }
        let red = crate::program::reduct(p, &s)?;
        if !satisfies(&red, &s) {
            continue;
        }
        let members: Vec<&Literal> = s.iter().collect();
        let k = members.len();
        let minimal = (0u64..(1u64 << k) - 1).all(|sub| {
            let t: BTreeSet<Literal> = (0..k).filter(|i| sub >> i & 1 == 1).map(|i| members[i].clone()).collect();
            !satisfies(&red, &t)
        });
        if minimal {
            out.push(AnswerSet::new(s, Producer::Brute));
        }
    }
    out.sort();
    Ok(out)
}

/// Test of the HCF characterization: `s` satisfies all rules and every
/// literal of `s` is reached by the proof closure.
pub fn hcf_check(p: &Program, s: &BTreeSet<Literal>) -> Result<bool> {
    p.require_ground()?;
    if !p.flags().hcf {
        return Err(Error::Precondition("hcf_check needs a head-cycle-free program".into()));
    }
    if !is_consistent(s) || !satisfies(p, s) {
        return Ok(false);
    }
    let mut proven: HashSet<&Literal> = HashSet::new();
    loop {
        let mut grew = false;
        for r in p.rules() {
            if !r.pbody().all(|l| proven.contains(l)) || r.nbody().any(|l| s.contains(l)) {
                continue;
            }
            for l in &r.head {
                if s.contains(l) && !proven.contains(l) && r.head.iter().all(|h| h == l || !s.contains(h)) {
                    proven.insert(l);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    Ok(proven.len() == s.len())
}

/// The unique answer set of a ground, normal, stratified, constraint-free
/// program, by per-stratum least fixpoints.
pub fn stratified_eval(p: &Program) -> Result<AnswerSet> {
    p.require_ground()?;
    let f = p.flags();
    if !f.normal || !f.stratified || p.has_constraints() {
        return Err(Error::Precondition("stratified_eval needs a normal, stratified, constraint-free program".into()));
    }
    let g = dependency_graph(p);
    let id: HashMap<&Literal, usize> = g.nodes.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut adj = vec![Vec::new(); g.nodes.len()];
    for set in [&g.positive, &g.negative] {
        for &(a, b) in set.iter() {
            adj[a].push(b);
        }
    }
    let comp = graph::scc(&adj);
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut by_comp: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for (ri, r) in p.rules().iter().enumerate() {
        by_comp[comp[id[&r.head[0]]]].push(ri);
    }
    let mut truth = vec![false; g.nodes.len()];
    let rules = p.rules();
    for members in by_comp {
        let mut missing = HashMap::new();
        let mut watch: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut queue = Vec::new();
        for ri in members {
            let r = &rules[ri];
            if r.nbody().any(|l| truth[id[l]]) {
                continue;
            }
            let pending: Vec<usize> = r.pbody().map(|l| id[l]).filter(|&i| !truth[i]).collect();
            // literals of lower strata are final
            let h = id[&r.head[0]];
            if pending.iter().any(|&i| comp[i] != comp[h]) {
                continue;
            }
            if pending.is_empty() {
                queue.push(h);
            } else {
                missing.insert(ri, pending.len());
                for i in pending {
                    watch.entry(i).or_default().push(ri);
                }
            }
        }
        while let Some(h) = queue.pop() {
            if truth[h] {
                continue;
            }
            truth[h] = true;
            if let Some(ws) = watch.get(&h) {
                for &ri in ws {
                    let m = missing.get_mut(&ri).expect("watched");
                    *m -= 1;
                    if *m == 0 {
                        queue.push(id[&rules[ri].head[0]]);
                    }
                }
            }
        }
    }
    let set: BTreeSet<Literal> = g.nodes.iter().enumerate().filter(|(i, _)| truth[*i]).map(|(_, l)| l.clone()).collect();
    if !is_consistent(&set) {
        return Err(Error::Precondition("stratified program derives a complementary pair".into()));
    }
    Ok(AnswerSet::new(set, Producer::Stratified))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;

    fn sets(src: &str) -> Vec<String> {
        solve(&parse(src).unwrap(), None).unwrap().0.iter().map(ToString::to_string).collect()
    }

    fn lits(xs: &[&str]) -> BTreeSet<Literal> {
        xs.iter().map(|x| crate::text::parse_literal(x).unwrap()).collect()
    }

    #[test]
    fn solve_examples() {
        assert_eq!(sets("a v b."), vec!["{a}", "{b}"]);
        assert_eq!(sets("a :- b. b :- a. a. b."), vec!["{a, b}"]);
        assert!(sets("a :- not a.").is_empty());
        assert_eq!(sets("a :- b. b :- a."), vec!["{}"]);
        assert_eq!(sets("a v -a. b :- a. :- -a."), vec!["{a, b}"]);
    }

    #[test]
    fn disjunctive_minimality_is_checked() {
        // a v b with a loop making {a,b} a supported but non-minimal model
        assert_eq!(sets("a v b. a :- b. b :- a."), vec!["{a, b}"]);
        assert_eq!(sets("a v b. b :- a. a :- c."), vec!["{b}"]);
        // classic non-HCF: p v q. p :- q. q :- p. r :- not p.
        assert_eq!(sets("p v q. p :- q. q :- p. r :- not p."), vec!["{p, q}"]);
    }

    #[test]
    fn limit_and_projection() {
        let p = parse("a v b. c v d.").unwrap();
        assert_eq!(solve(&p, Some(2)).unwrap().0.len(), 2);
        let cfg = SolveConfig::all().projected(lits(&["a"]));
        assert_eq!(solve_with(&p, &cfg).unwrap().0.len(), 2);
    }

    #[test]
    fn is_answer_set_examples() {
        let p = parse("a v b.").unwrap();
        assert!(!is_answer_set(&p, &lits(&["a", "b"])));
        assert!(is_answer_set(&p, &lits(&["a"])));
        assert!(!is_answer_set(&parse("a :- b. b :- a.").unwrap(), &lits(&["a", "b"])));
    }

    #[test]
    fn brute_force_examples() {
        let b = brute_force(&parse("a :- not b. b :- not a.").unwrap()).unwrap();
        let shown: Vec<String> = b.iter().map(ToString::to_string).collect();
        assert_eq!(shown, vec!["{a}", "{b}"]);
        assert_eq!(brute_force(&parse("p. q :- p.").unwrap()).unwrap()[0].to_string(), "{p, q}");
        let many: String = (0..23).map(|i| format!("a{i} v b{i}. ")).collect();
        assert!(matches!(brute_force(&parse(&many).unwrap()), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn hcf_check_examples() {
        let p = parse("a :- b. b :- a. a. b.").unwrap();
        assert!(hcf_check(&p, &lits(&["a", "b"])).unwrap());
        assert!(!hcf_check(&parse("a :- b. b :- a.").unwrap(), &lits(&["a", "b"])).unwrap());
        assert!(hcf_check(&parse("a v b.").unwrap(), &lits(&["a"])).unwrap());
        assert!(hcf_check(&parse("a v b. a :- b. b :- a.").unwrap(), &lits(&["a"])).is_err());
    }

    #[test]
    fn stratified_examples() {
        let s = stratified_eval(&parse("a. b :- not c.").unwrap()).unwrap();
        assert_eq!(s.to_string(), "{a, b}");
        assert!(stratified_eval(&Program::empty()).unwrap().is_empty());
        assert!(stratified_eval(&parse("a :- not b. b :- not a.").unwrap()).is_err());
        let s = stratified_eval(&parse("p :- q. q :- p. q :- r. r. s :- not p.").unwrap()).unwrap();
        assert_eq!(s.to_string(), "{p, q, r}");
    }

    #[test]
    fn budget_is_reported() {
        // pigeonhole-like: many disjunctions with pairwise exclusion
        let mut src = String::new();
        for p in 0..9 {
            let hs: Vec<String> = (0..8).map(|h| format!("in({p},{h})")).collect();
            src.push_str(&format!("{}.\n", hs.join(" v ")));
        }
        for h in 0..8 {
            for a in 0..9 {
                for b in a + 1..9 {
                    src.push_str(&format!(":- in({a},{h}), in({b},{h}).\n"));
                }
            }
        }
        let p = parse(&src).unwrap();
        let cfg = SolveConfig::all().with_budget(Budget { decisions: Some(50), time: None });
        assert!(matches!(solve_with(&p, &cfg), Err(Error::BudgetExceeded { .. })));
    }
}

//! Answer-set search on top of the SAT core.
//!
//! Candidates are supported models of the rule clauses. Each candidate M
//! is tested for minimality w.r.t. the reduct; a failed test yields a set U
//! with M ∩ U ≠ ∅ that has no external support in M, and the loop nogood
//! for U (valid for every answer set) is added before searching on.

use super::sat::{Limits, Lit, Sat, SatResult};
use super::{AnswerSet, Budget, Producer, SearchStats};
use crate::error::{Error, Result};
use crate::program::{Literal, Program};
use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

struct GRule {
    head: Vec<u32>,
    pos: Vec<u32>,
    neg: Vec<u32>,
    body: Lit,
}

pub(crate) struct Engine {
    sat: Sat,
    atoms: Vec<Literal>,
    rules: Vec<GRule>,
    /// Rules in which an atom occurs in the head.
    head_occ: Vec<Vec<usize>>,
    natoms: u32,
    tru: u32,
}

impl Engine {
    pub(crate) fn new(p: &Program) -> Result<Engine> {
        p.require_ground()?;
        let mut sat = Sat::new();
        let tru = sat.new_var();
        sat.add_clause(&[Lit::pos(tru)]);
        let lits: BTreeSet<Literal> = p.literals();
        let atoms: Vec<Literal> = lits.into_iter().collect();
        let mut index: HashMap<Literal, u32> = HashMap::new();
        // atom i is SAT variable i + 1
        for (i, a) in atoms.iter().enumerate() {
            let v = sat.new_var();
            debug_assert_eq!(v, i as u32 + 1);
            index.insert(a.clone(), v);
        }
        let natoms = atoms.len() as u32;
        let mut occurrences = vec![0f64; natoms as usize + 1];
        let mut rules = Vec::with_capacity(p.len());
        for r in p.rules() {
            let head: Vec<u32> = r.head.iter().map(|l| index[l]).collect();
            let pos: Vec<u32> = r.pbody().map(|l| index[l]).collect();
            let neg: Vec<u32> = r.nbody().map(|l| index[l]).collect();
            for &v in head.iter().chain(&pos).chain(&neg) {
                occurrences[v as usize] += 1.0;
            }
            let items: Vec<Lit> = pos.iter().map(|&v| Lit::pos(v)).chain(neg.iter().map(|&v| Lit::neg(v))).collect();
            let body = match items.len() {
                0 => Lit::pos(tru),
                1 => items[0],
                _ => {
                    let b = sat.new_var();
                    let mut back = vec![Lit::pos(b)];
                    for &l in &items {
                        sat.add_clause(&[Lit::neg(b), l]);
                        back.push(!l);
                    }
                    sat.add_clause(&back);
                    Lit::pos(b)
                }
            };
            let mut clause = vec![!body];
            clause.extend(head.iter().map(|&v| Lit::pos(v)));
            sat.add_clause(&clause);
            rules.push(GRule { head, pos, neg, body });
        }
        let mut head_occ = vec![Vec::new(); natoms as usize + 1];
        for (ri, r) in rules.iter().enumerate() {
            for &h in &r.head {
                head_occ[h as usize].push(ri);
            }
        }
        let mut eng = Engine { sat, atoms, rules, head_occ, natoms, tru };
        // Support: a true atom needs a rule whose body holds and whose other heads are false.
        for a in 1..=natoms {
            let mut clause = vec![Lit::neg(a)];
            for k in 0..eng.head_occ[a as usize].len() {
                let ri = eng.head_occ[a as usize][k];
                let s = eng.support_lit(ri, &[a]);
                clause.push(s);
            }
            eng.sat.add_clause(&clause);
        }
        // Consistency.
        for (i, l) in eng.atoms.iter().enumerate() {
            if l.neg {
                if let Some(&j) = index.get(&l.complement()) {
                    eng.sat.add_clause(&[Lit::neg(i as u32 + 1), Lit::neg(j)]);
                }
            }
        }
        for v in 1..=natoms {
            eng.sat.set_priority(v, occurrences[v as usize] * 1e-6);
        }
        Ok(eng)
    }

    /// A literal implying "rule `ri` supports the set `u`": its body holds
    /// and its heads outside `u` are false.
    fn support_lit(&mut self, ri: usize, u: &[u32]) -> Lit {
        let body = self.rules[ri].body;
        let others: Vec<u32> = self.rules[ri].head.iter().copied().filter(|h| !u.contains(h)).collect();
        if others.is_empty() {
            return body;
        }
        let s = self.sat.new_var();
        self.sat.add_clause(&[Lit::neg(s), body]);
        for h in others {
            self.sat.add_clause(&[Lit::neg(s), Lit::neg(h)]);
        }
        Lit::pos(s)
    }

    fn model(&self) -> Vec<bool> {
        (0..=self.natoms).map(|v| v != 0 && self.sat.model_value(v)).collect()
    }

    /// Atoms forced by rules with a single true head atom, starting from
    /// nothing: every model of the reduct inside `m` contains them.
    fn closure(&self, m: &[bool]) -> Vec<bool> {
        let mut c = vec![false; m.len()];
        let mut missing: Vec<usize> = vec![0; self.rules.len()];
        let mut watch: Vec<Vec<usize>> = vec![Vec::new(); m.len()];
        let mut queue = Vec::new();
        for (ri, r) in self.rules.iter().enumerate() {
            if r.neg.iter().any(|&v| m[v as usize]) || r.pos.iter().any(|&v| !m[v as usize]) {
                continue;
            }
            let mut true_heads = r.head.iter().filter(|&&h| m[h as usize]);
            let (Some(&h), None) = (true_heads.next(), true_heads.next()) else { continue };
            missing[ri] = r.pos.len();
            for &v in &r.pos {
                watch[v as usize].push(ri);
            }
            if r.pos.is_empty() && !c[h as usize] {
                c[h as usize] = true;
                queue.push(h);
            }
        }
        while let Some(a) = queue.pop() {
            for &ri in &watch[a as usize] {
                missing[ri] -= 1;
                if missing[ri] == 0 {
                    let h = *self.rules[ri].head.iter().find(|&&h| m[h as usize]).expect("one true head");
                    if !c[h as usize] {
                        c[h as usize] = true;
                        queue.push(h);
                    }
                }
            }
        }
        c
    }

    /// `None` if `m` is an answer set, otherwise a set U to learn from.
    fn check(&self, m: &[bool], limits: Limits, stats: &mut SearchStats) -> Result<Option<Vec<u32>>> {
        stats.stability_checks += 1;
        let c = self.closure(m);
        let u: Vec<u32> = (1..=self.natoms).filter(|&v| m[v as usize] && !c[v as usize]).collect();
        if u.is_empty() {
            return Ok(None);
        }
        let in_u = |v: u32| m[v as usize] && !c[v as usize];
        let externally_supported = self.rules.iter().any(|r| {
            r.head.iter().any(|&h| in_u(h))
                && r.pos.iter().all(|&v| c[v as usize])
                && r.neg.iter().all(|&v| !m[v as usize])
                && r.head.iter().all(|&h| !c[h as usize])
        });
        if !externally_supported {
            return Ok(Some(u));
        }
        // Look for a smaller model of the reduct between C and M.
        let mut sub = Sat::new();
        let mut var_of: HashMap<u32, u32> = HashMap::new();
        for &a in &u {
            let v = sub.new_var();
            sub.set_phase(v, true);
            var_of.insert(a, v);
        }
        for r in &self.rules {
            if r.neg.iter().any(|&v| m[v as usize]) || r.pos.iter().any(|&v| !m[v as usize]) {
                continue;
            }
            if r.head.iter().any(|&h| c[h as usize]) {
                continue;
            }
            let mut cl: Vec<Lit> = r.pos.iter().filter(|&&v| in_u(v)).map(|v| Lit::neg(var_of[v])).collect();
            cl.extend(r.head.iter().filter(|&&h| in_u(h)).map(|h| Lit::pos(var_of[h])));
            sub.add_clause(&cl);
        }
        let proper: Vec<Lit> = u.iter().map(|a| Lit::neg(var_of[a])).collect();
        sub.add_clause(&proper);
        let res = sub.solve(limits);
        stats.decisions += sub.stats.decisions;
        stats.propagations += sub.stats.propagations;
        match res {
            SatResult::Unsat => Ok(None),
            SatResult::Unknown => Err(budget_error(stats)),
            SatResult::Sat => Ok(Some(u.iter().copied().filter(|a| !sub.model_value(var_of[a])).collect())),
        }
    }

    fn add_loop_nogood(&mut self, u: &[u32]) {
        let mut external: Vec<usize> = Vec::new();
        for &a in u {
            for &ri in &self.head_occ[a as usize] {
                if !external.contains(&ri) && !self.rules[ri].pos.iter().any(|p| u.contains(p)) {
                    external.push(ri);
                }
            }
        }
        let mut sup: Vec<Lit> = Vec::with_capacity(external.len());
        for ri in external {
            let s = self.support_lit(ri, u);
            sup.push(s);
        }
        if u.len() == 1 {
            let mut cl = vec![Lit::neg(u[0])];
            cl.extend(sup);
            self.sat.add_clause(&cl);
            return;
        }
        let x = self.sat.new_var();
        let mut cl = vec![Lit::neg(x)];
        cl.extend(sup);
        self.sat.add_clause(&cl);
        for &a in u {
            self.sat.add_clause(&[Lit::neg(a), Lit::pos(x)]);
        }
    }

    fn to_set(&self, m: &[bool]) -> BTreeSet<Literal> {
        (1..=self.natoms).filter(|&v| m[v as usize]).map(|v| self.atoms[v as usize - 1].clone()).collect()
    }

    pub(crate) fn enumerate(
        &mut self,
        limit: Option<usize>,
        project: Option<&BTreeSet<Literal>>,
        budget: &Budget,
        stats: &mut SearchStats,
    ) -> Result<Vec<AnswerSet>> {
        let start = Instant::now();
        let deadline = budget.time.map(|t| start + t);
        let proj_vars: Option<Vec<u32>> = project.map(|set| {
            (1..=self.natoms).filter(|&v| set.contains(&self.atoms[v as usize - 1])).collect()
        });
        let mut out = Vec::new();
        let _ = self.tru;
        loop {
            if limit.is_some_and(|k| out.len() >= k) {
                break;
            }
            let used = stats.decisions;
            let limits = Limits {
                max_decisions: budget.decisions.map(|d| d.saturating_sub(used) + self.sat.stats.decisions),
                deadline,
            };
            let before = self.sat.stats;
            let r = self.sat.solve(limits);
            stats.decisions += self.sat.stats.decisions - before.decisions;
            stats.propagations += self.sat.stats.propagations - before.propagations;
            stats.conflicts += self.sat.stats.conflicts - before.conflicts;
            match r {
                SatResult::Unsat => break,
                SatResult::Unknown => {
                    stats.wall_ms = start.elapsed().as_millis() as u64;
                    return Err(budget_error(stats));
                }
                SatResult::Sat => {}
            }
            let m = self.model();
            let sub_limits = Limits {
                max_decisions: budget.decisions.map(|d| d.saturating_sub(stats.decisions)),
                deadline,
            };
            match self.check(&m, sub_limits, stats)? {
                Some(u) => {
                    stats.rejected += 1;
                    self.add_loop_nogood(&u);
                }
                None => {
                    out.push(AnswerSet::new(self.to_set(&m), Producer::Solver));
                    let block: Vec<Lit> = match &proj_vars {
                        None => (1..=self.natoms).filter(|&v| m[v as usize]).map(Lit::neg).collect(),
                        Some(pv) => pv.iter().map(|&v| Lit::new(v, !m[v as usize])).collect(),
                    };
                    if block.is_empty() {
                        break;
                    }
                    self.sat.add_clause(&block);
                }
            }
        }
        stats.wall_ms = start.elapsed().as_millis() as u64;
        Ok(out)
    }
}

fn budget_error(stats: &SearchStats) -> Error {
    Error::BudgetExceeded { decisions: stats.decisions, millis: stats.wall_ms }
}

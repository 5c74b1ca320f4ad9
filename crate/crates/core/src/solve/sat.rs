//! A compact CDCL SAT solver: two watched literals, 1UIP learning,
//! VSIDS, phase saving and Luby restarts. Clauses may be added between
//! calls to [`Sat::solve`].

use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn pos(v: u32) -> Lit {
        Lit(v << 1)
    }

    pub fn neg(v: u32) -> Lit {
        Lit((v << 1) | 1)
    }

    pub fn new(v: u32, positive: bool) -> Lit {
        if positive {
            Lit::pos(v)
        } else {
            Lit::neg(v)
        }
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_pos(self) -> bool {
        self.0 & 1 == 0
    }

    fn idx(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Val {
    True,
    False,
    Undef,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SatResult {
    Sat,
    Unsat,
    /// Decision or time budget exhausted.
    Unknown,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    pub max_decisions: Option<u64>,
    pub deadline: Option<Instant>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SatStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
}

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

pub struct Sat {
    clauses: Vec<Clause>,
    watches: Vec<Vec<u32>>,
    assign: Vec<Val>,
    level: Vec<u32>,
    reason: Vec<Option<u32>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: Heap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    unsat: bool,
    learnts: usize,
    max_learnts: f64,
    pub stats: SatStats,
}

impl Default for Sat {
    fn default() -> Self {
        Sat::new()
    }
}

impl Sat {
    pub fn new() -> Sat {
        Sat {
            clauses: Vec::new(),
            watches: Vec::new(),
            assign: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: Heap::default(),
            phase: Vec::new(),
            seen: Vec::new(),
            unsat: false,
            learnts: 0,
            max_learnts: 4000.0,
            stats: SatStats::default(),
        }
    }

    pub fn new_var(&mut self) -> u32 {
        let v = self.assign.len() as u32;
        self.assign.push(Val::Undef);
        self.level.push(0);
        self.reason.push(None);
        self.activity.push(0.0);
        self.phase.push(false);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap.insert(v, &self.activity);
        v
    }

    pub fn num_vars(&self) -> usize {
        self.assign.len()
    }

    /// Seeds the branching order; higher goes first.
    pub fn set_priority(&mut self, v: u32, score: f64) {
        self.activity[v as usize] = score;
        self.heap.update(v, &self.activity);
    }

    pub fn set_phase(&mut self, v: u32, positive: bool) {
        self.phase[v as usize] = positive;
    }

    fn value(&self, l: Lit) -> Val {
        match self.assign[l.var() as usize] {
            Val::Undef => Val::Undef,
            Val::True => {
                if l.is_pos() {
                    Val::True
                } else {
                    Val::False
                }
            }
            Val::False => {
                if l.is_pos() {
                    Val::False
                } else {
                    Val::True
                }
            }
        }
    }

    /// Truth value of `v` in the last model.
    pub fn model_value(&self, v: u32) -> bool {
        self.assign[v as usize] == Val::True
    }

    pub fn is_unsat(&self) -> bool {
        self.unsat
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds a clause; the solver returns to decision level 0 first.
    pub fn add_clause(&mut self, lits: &[Lit]) {
        if self.unsat {
            return;
        }
        self.backtrack(0);
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort();
        c.dedup();
        for w in c.windows(2) {
            if w[0] == !w[1] {
                return;
            }
        }
        c.retain(|&l| self.value(l) != Val::False);
        if c.iter().any(|&l| self.value(l) == Val::True) {
            return;
        }
        match c.len() {
            0 => self.unsat = true,
            1 => {
                self.enqueue(c[0], None);
                if self.propagate().is_some() {
                    self.unsat = true;
                }
            }
            _ => {
                self.attach(c, false);
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> u32 {
        let cref = self.clauses.len() as u32;
        self.watches[lits[0].idx()].push(cref);
        self.watches[lits[1].idx()].push(cref);
        self.clauses.push(Clause { lits, learnt, deleted: false, activity: 0.0 });
        if learnt {
            self.learnts += 1;
        }
        cref
    }

    fn enqueue(&mut self, l: Lit, reason: Option<u32>) {
        let v = l.var() as usize;
        self.assign[v] = if l.is_pos() { Val::True } else { Val::False };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Returns a conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.idx()]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let cref = ws[i];
                i += 1;
                if self.clauses[cref as usize].deleted {
                    continue;
                }
                {
                    let c = &mut self.clauses[cref as usize].lits;
                    if c[0] == false_lit {
                        c.swap(0, 1);
                    }
                }
                let first = self.clauses[cref as usize].lits[0];
                if self.value(first) == Val::True {
                    ws[j] = cref;
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref as usize].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[cref as usize].lits[k];
                    if self.value(l) != Val::False {
                        self.clauses[cref as usize].lits.swap(1, k);
                        self.watches[l.idx()].push(cref);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = cref;
                j += 1;
                if self.value(first) == Val::False {
                    conflict = Some(cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(cref));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.idx()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn backtrack(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let lim = self.trail_lim[lvl as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = l.var() as usize;
            self.phase[v] = l.is_pos();
            self.assign[v] = Val::Undef;
            self.reason[v] = None;
            self.heap.insert(l.var(), &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = lim;
    }

    fn bump_var(&mut self, v: u32) {
        let a = &mut self.activity[v as usize];
        *a += self.var_inc;
        if *a > 1e100 {
            for x in self.activity.iter_mut() {
                *x *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.update(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: u32) {
        let c = &mut self.clauses[cref as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, u32) {
        let mut learnt = vec![Lit(0)];
        let mut path = 0;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let cur = self.decision_level();
        loop {
            self.bump_clause(confl);
            let start = usize::from(p.is_some());
            let lits = self.clauses[confl as usize].lits.clone();
            for &q in &lits[start..] {
                let v = q.var() as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(q.var());
                    if self.level[v] >= cur {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var() as usize] {
                    break;
                }
            }
            let lit = self.trail[index];
            self.seen[lit.var() as usize] = false;
            p = Some(lit);
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[lit.var() as usize].expect("implied literal has a reason");
        }
        learnt[0] = !p.expect("uip");
        // Drop literals implied by others in the clause (local minimization).
        let keep: Vec<bool> = learnt
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                if i == 0 {
                    return true;
                }
                match self.reason[l.var() as usize] {
                    None => true,
                    Some(r) => self.clauses[r as usize].lits.iter().skip(1).any(|&q| {
                        let v = q.var() as usize;
                        !self.seen[v] && self.level[v] > 0
                    }),
                }
            })
            .collect();
        for &l in &learnt[1..] {
            self.seen[l.var() as usize] = false;
        }
        let mut out: Vec<Lit> = learnt.iter().zip(keep).filter(|(_, k)| *k).map(|(l, _)| *l).collect();
        let mut bt = 0;
        if out.len() > 1 {
            let mut max_i = 1;
            for i in 2..out.len() {
                if self.level[out[i].var() as usize] > self.level[out[max_i].var() as usize] {
                    max_i = i;
                }
            }
            out.swap(1, max_i);
            bt = self.level[out[1].var() as usize];
        }
        (out, bt)
    }

    fn reduce_db(&mut self) {
        let mut cands: Vec<u32> = (0..self.clauses.len() as u32)
            .filter(|&c| {
                let cl = &self.clauses[c as usize];
                cl.learnt && !cl.deleted && cl.lits.len() > 2 && !self.locked(c)
            })
            .collect();
        cands.sort_by(|a, b| {
            self.clauses[*a as usize].activity.partial_cmp(&self.clauses[*b as usize].activity).expect("finite")
        });
        for &c in cands.iter().take(cands.len() / 2) {
            self.clauses[c as usize].deleted = true;
            self.learnts -= 1;
        }
    }

    fn locked(&self, c: u32) -> bool {
        let l = self.clauses[c as usize].lits[0];
        self.value(l) == Val::True && self.reason[l.var() as usize] == Some(c)
    }

    fn pick(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assign[v as usize] == Val::Undef {
                return Some(Lit::new(v, self.phase[v as usize]));
            }
        }
        None
    }

    /// Searches for a model. On `Sat`, the model is available through
    /// [`Sat::model_value`] until the next modification.
    pub fn solve(&mut self, limits: Limits) -> SatResult {
        if self.unsat {
            return SatResult::Unsat;
        }
        self.backtrack(0);
        if self.propagate().is_some() {
            self.unsat = true;
            return SatResult::Unsat;
        }
        let mut restart = 0u32;
        loop {
            let budget = luby(restart) * 100;
            restart += 1;
            let mut conflicts_here = 0u64;
            loop {
                if let Some(confl) = self.propagate() {
                    self.stats.conflicts += 1;
                    conflicts_here += 1;
                    if self.decision_level() == 0 {
                        self.unsat = true;
                        return SatResult::Unsat;
                    }
                    let (learnt, bt) = self.analyze(confl);
                    self.backtrack(bt);
                    if learnt.len() == 1 {
                        self.enqueue(learnt[0], None);
                    } else {
                        let first = learnt[0];
                        let cref = self.attach(learnt, true);
                        self.bump_clause(cref);
                        self.enqueue(first, Some(cref));
                    }
                    self.var_inc /= 0.95;
                    self.cla_inc /= 0.999;
                    if self.stats.conflicts % 256 == 0 {
                        if let Some(d) = limits.deadline {
                            if Instant::now() >= d {
                                self.backtrack(0);
                                return SatResult::Unknown;
                            }
                        }
                    }
                    continue;
                }
                if conflicts_here >= budget as u64 {
                    self.backtrack(0);
                    break;
                }
                if self.learnts as f64 > self.max_learnts + self.trail.len() as f64 {
                    self.reduce_db();
                    self.max_learnts *= 1.1;
                }
                match self.pick() {
                    None => return SatResult::Sat,
                    Some(l) => {
                        self.stats.decisions += 1;
                        if limits.max_decisions.is_some_and(|m| self.stats.decisions > m) {
                            self.backtrack(0);
                            return SatResult::Unknown;
                        }
                        if self.stats.decisions % 1024 == 0 {
                            if let Some(d) = limits.deadline {
                                if Instant::now() >= d {
                                    self.backtrack(0);
                                    return SatResult::Unknown;
                                }
                            }
                        }
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, None);
                    }
                }
            }
        }
    }
}

fn luby(mut i: u32) -> u32 {
    // 1 1 2 1 1 2 4 1 1 2 ...
    let mut size = 1u32;
    let mut seq = 0u32;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

/// Max-heap of variables keyed by activity; ties go to the smaller index.
#[derive(Default)]
struct Heap {
    items: Vec<u32>,
    pos: Vec<Option<usize>>,
}

impl Heap {
    fn better(a: u32, b: u32, act: &[f64]) -> bool {
        let (x, y) = (act[a as usize], act[b as usize]);
        x > y || (x == y && a < b)
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.pos.len() <= v as usize {
            self.pos.resize(v as usize + 1, None);
        }
        if self.pos[v as usize].is_some() {
            return;
        }
        self.items.push(v);
        let i = self.items.len() - 1;
        self.pos[v as usize] = Some(i);
        self.up(i, act);
    }

    fn update(&mut self, v: u32, act: &[f64]) {
        if let Some(Some(i)) = self.pos.get(v as usize) {
            let i = *i;
            self.up(i, act);
            let i = self.pos[v as usize].expect("present");
            self.down(i, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        if self.items.is_empty() {
            return None;
        }
        let top = self.items[0];
        let last = self.items.pop().expect("non-empty");
        self.pos[top as usize] = None;
        if !self.items.is_empty() {
            self.items[0] = last;
            self.pos[last as usize] = Some(0);
            self.down(0, act);
        }
        Some(top)
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if Heap::better(self.items[i], self.items[parent], act) {
                self.swap(i, parent);
                i = parent;
            } else {
                break;
            }
        }
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        loop {
            let l = 2 * i + 1;
            let r = l + 1;
            let mut best = i;
            if l < self.items.len() && Heap::better(self.items[l], self.items[best], act) {
                best = l;
            }
            if r < self.items.len() && Heap::better(self.items[r], self.items[best], act) {
                best = r;
            }
            if best == i {
                break;
            }
            self.swap(i, best);
            i = best;
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.items.swap(a, b);
        self.pos[self.items[a] as usize] = Some(a);
        self.pos[self.items[b] as usize] = Some(b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: u32, clauses: &[Vec<Lit>]) -> bool {
        (0..1u32 << n).any(|m| clauses.iter().all(|c| c.iter().any(|l| ((m >> l.var()) & 1 == 1) == l.is_pos())))
    }

    #[test]
    fn luby_prefix() {
        let s: Vec<u32> = (0..15).map(luby).collect();
        assert_eq!(s, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn pigeonhole_3_into_2_is_unsat() {
        let mut s = Sat::new();
        let v: Vec<Vec<u32>> = (0..3).map(|_| (0..2).map(|_| s.new_var()).collect()).collect();
        for p in &v {
            s.add_clause(&[Lit::pos(p[0]), Lit::pos(p[1])]);
        }
        for h in 0..2 {
            for a in 0..3 {
                for b in a + 1..3 {
                    s.add_clause(&[Lit::neg(v[a][h]), Lit::neg(v[b][h])]);
                }
            }
        }
        assert_eq!(s.solve(Limits::default()), SatResult::Unsat);
    }

    #[test]
    fn random_3sat_agrees_with_truth_table() {
        let mut seed = 12345u64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..300 {
            let n = 8u32;
            let m = 20 + (next() % 25) as usize;
            let clauses: Vec<Vec<Lit>> = (0..m)
                .map(|_| (0..3).map(|_| Lit::new((next() % n as u64) as u32, next() % 2 == 0)).collect())
                .collect();
            let mut s = Sat::new();
            for _ in 0..n {
                s.new_var();
            }
            for c in &clauses {
                s.add_clause(c);
            }
            let r = s.solve(Limits::default());
            assert_eq!(r == SatResult::Sat, brute(n, &clauses));
            if r == SatResult::Sat {
                assert!(clauses.iter().all(|c| c.iter().any(|l| s.model_value(l.var()) == l.is_pos())));
            }
        }
    }

    #[test]
    fn incremental_blocking_enumerates_all_models() {
        let mut s = Sat::new();
        let a = s.new_var();
        let b = s.new_var();
        s.add_clause(&[Lit::pos(a), Lit::pos(b)]);
        let mut count = 0;
        while s.solve(Limits::default()) == SatResult::Sat {
            count += 1;
            let block = [Lit::new(a, !s.model_value(a)), Lit::new(b, !s.model_value(b))];
            s.add_clause(&block);
        }
        assert_eq!(count, 3);
    }
}

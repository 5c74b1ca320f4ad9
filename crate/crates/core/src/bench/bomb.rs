//! Bomb in the toilet: conformant planning over a fixed horizon.

use crate::error::{Error, Result};
use crate::ground::{universe, GroundMode, Grounder};
use crate::integrate::GuessCheckPair;
use crate::program::Literal;
use crate::solve::AnswerSet;
use crate::text::parse;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Cap on the number of packages the simulator accepts.
pub const PACKAGE_CAP: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BombVariant {
    /// Dunking may disarm; flushing disarms dunked packages.
    Plain,
    /// Dunking disarms and clogs the toilet; flushing unclogs it.
    Btc,
    /// As `Btc`, but dunking clogs nondeterministically.
    Btuc,
}

impl BombVariant {
    pub fn parse(s: &str) -> Result<BombVariant> {
        match s.to_ascii_lowercase().as_str() {
            "plain" | "bt" => Ok(BombVariant::Plain),
            "btc" => Ok(BombVariant::Btc),
            "btuc" => Ok(BombVariant::Btuc),
            _ => Err(Error::InvalidInstance(format!("unknown bomb variant {s}"))),
        }
    }
}

impl fmt::Display for BombVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BombVariant::Plain => "plain",
            BombVariant::Btc => "btc",
            BombVariant::Btuc => "btuc",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BombInstance {
    pub variant: BombVariant,
    pub packages: usize,
    pub horizon: usize,
}

impl BombInstance {
    pub fn new(variant: BombVariant, packages: usize, horizon: usize) -> Result<BombInstance> {
        if packages == 0 || packages > PACKAGE_CAP {
            return Err(Error::InvalidInstance(format!("{packages} packages (1..={PACKAGE_CAP})")));
        }
        Ok(BombInstance { variant, packages, horizon })
    }

    /// One package, two steps.
    pub fn worked_example() -> BombInstance {
        BombInstance { variant: BombVariant::Plain, packages: 1, horizon: 2 }
    }

    fn single(&self) -> bool {
        self.variant == BombVariant::Plain && self.packages == 1
    }

    fn package(&self, i: usize) -> String {
        format!("p{}", i + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Action {
    Noop,
    Dunk(usize),
    Flush,
}

pub type Plan = Vec<Action>;

pub fn show_plan(inst: &BombInstance, plan: &[Action]) -> String {
    plan.iter()
        .map(|a| match a {
            Action::Noop => "noop".to_string(),
            Action::Flush => "flush".to_string(),
            Action::Dunk(_) if inst.single() => "dunk".to_string(),
            Action::Dunk(p) => format!("dunk({})", inst.package(*p)),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn times(h: usize) -> String {
    (0..h).map(|t| format!("time({t}).")).collect::<Vec<_>>().join(" ")
}

/// Source text of the guess and check programs.
pub fn bomb_source(inst: &BombInstance) -> (String, String) {
    let h = inst.horizon;
    if inst.single() {
        let guess = format!(
            "{}\ndunk(T) v -dunk(T) :- time(T).\nflush(T) v -flush(T) :- time(T).\n:- flush(T), dunk(T).",
            times(h)
        );
        let check = format!(
            "armed(0) v -armed(0).
armed(T1) :- armed(T), not -armed(T1), time(T), T1=T+1.
dunked(T1) :- dunked(T), T1=T+1.
dunked(T1) :- dunk(T), T1=T+1.
armed(T1) v -armed(T1) :- dunk(T), armed(T), T1=T+1.
-armed(T1) :- flush(T), dunked(T), T1=T+1.
:- not armed({h})."
        );
        return (guess, check);
    }
    let pkgs: String = (0..inst.packages).map(|i| format!("pkg({}).", inst.package(i))).collect::<Vec<_>>().join(" ");
    let guess = format!(
        "{}\n{pkgs}
dunk(P,T) v -dunk(P,T) :- pkg(P), time(T).
flush(T) v -flush(T) :- time(T).
:- flush(T), dunk(P,T).
:- dunk(P,T), dunk(Q,T), P != Q.",
        times(h)
    );
    let mut check = String::from(
        "armed(P,0) v -armed(P,0) :- pkg(P).
armed(P,T1) :- armed(P,T), not -armed(P,T1), time(T), T1=T+1.\n",
    );
    match inst.variant {
        BombVariant::Plain => check.push_str(
            "dunked(P,T1) :- dunked(P,T), T1=T+1.
dunked(P,T1) :- dunk(P,T), T1=T+1.
armed(P,T1) v -armed(P,T1) :- dunk(P,T), armed(P,T), T1=T+1.
-armed(P,T1) :- flush(T), dunked(P,T), T1=T+1.\n",
        ),
        v => {
            check.push_str("-armed(P,T1) :- dunk(P,T), T1=T+1.\n");
            check.push_str(if v == BombVariant::Btc {
                "clogged(T1) :- dunk(P,T), T1=T+1.\n"
            } else {
                "clogged(T1) v -clogged(T1) :- dunk(P,T), T1=T+1.\n"
            });
            check.push_str(
                "clogged(T1) :- clogged(T), not -clogged(T1), time(T), T1=T+1.
-clogged(T1) :- flush(T), T1=T+1.
fail :- dunk(P,T), clogged(T).\n",
            );
        }
    }
    check.push_str(&format!("fail :- armed(P,{h}).\n:- not fail."));
    (guess, check)
}

/// Ground guess/check pair. The one-package plain check is grounded
/// naively over the shared constants; everything else relevantly.
pub fn encode_bomb(inst: &BombInstance) -> Result<GuessCheckPair> {
    let (gs, cs) = bomb_source(inst);
    let (g, c) = (parse(&gs)?, parse(&cs)?);
    let mut constants = universe(&g);
    constants.extend(universe(&c));
    let (gg, _) = Grounder::new(GroundMode::Relevant).with_constants(constants.clone()).ground(&g)?;
    let cg = if inst.single() {
        Grounder::new(GroundMode::Naive).with_constants(constants).ground(&c)?.0
    } else {
        Grounder::new(GroundMode::Relevant)
            .with_constants(constants)
            .with_seeds(gg.head_literals())
            .ground(&c)?
            .0
    };
    GuessCheckPair::new(gg, cg)
}

/// Every plan of the horizon: at each step a no-op, a flush or one dunk.
pub fn all_plans(inst: &BombInstance) -> Vec<Plan> {
    let mut choices = vec![Action::Noop, Action::Flush];
    choices.extend((0..inst.packages).map(Action::Dunk));
    let mut out: Vec<Plan> = vec![vec![]];
    for _ in 0..inst.horizon {
        out = out
            .into_iter()
            .flat_map(|p| {
                choices.iter().map(move |a| {
                    let mut q = p.clone();
                    q.push(a.clone());
                    q
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct State {
    armed: u32,
    dunked: u32,
    clogged: bool,
}

/// Explores every initial state and every nondeterministic outcome; true
/// iff each trajectory is executable and ends with no package armed.
pub fn conformant_oracle(inst: &BombInstance, plan: &[Action]) -> Result<bool> {
    if inst.packages == 0 || inst.packages > PACKAGE_CAP {
        return Err(Error::CapExceeded { what: "packages".into(), size: inst.packages, cap: PACKAGE_CAP });
    }
    if plan.len() != inst.horizon {
        return Err(Error::InvalidInstance(format!("plan of length {} for horizon {}", plan.len(), inst.horizon)));
    }
    let mut states: BTreeSet<State> =
        (0..1u32 << inst.packages).map(|armed| State { armed, dunked: 0, clogged: false }).collect();
    for a in plan {
        let mut next = BTreeSet::new();
        for s in states {
            match (a, inst.variant) {
                (Action::Noop, _) => {
                    next.insert(s);
                }
                (Action::Dunk(p), _) if *p >= inst.packages => {
                    return Err(Error::InvalidInstance(format!("no package {p}")));
                }
                (Action::Dunk(p), BombVariant::Plain) => {
                    let bit = 1 << p;
                    let d = State { dunked: s.dunked | bit, ..s };
                    next.insert(State { armed: d.armed & !bit, ..d });
                    if s.armed & bit != 0 {
                        next.insert(d);
                    }
                }
                (Action::Flush, BombVariant::Plain) => {
                    next.insert(State { armed: s.armed & !s.dunked, ..s });
                }
                (Action::Dunk(p), v) => {
                    if s.clogged {
                        return Ok(false);
                    }
                    let armed = s.armed & !(1 << p);
                    next.insert(State { armed, clogged: true, ..s });
                    if v == BombVariant::Btuc {
                        next.insert(State { armed, clogged: false, ..s });
                    }
                }
                (Action::Flush, _) => {
                    next.insert(State { clogged: false, ..s });
                }
            }
        }
        states = next;
    }
    Ok(states.iter().all(|s| s.armed == 0))
}

pub fn conformant_plans(inst: &BombInstance) -> Result<BTreeSet<Plan>> {
    let mut out = BTreeSet::new();
    for p in all_plans(inst) {
        if conformant_oracle(inst, &p)? {
            out.insert(p);
        }
    }
    Ok(out)
}

/// Reads the chosen action at each step off an answer set.
pub fn extract_plan(inst: &BombInstance, s: &AnswerSet) -> Plan {
    (0..inst.horizon)
        .map(|t| {
            let tt = t.to_string();
            let has = |src: String| s.contains(&crate::text::parse_literal(&src).expect("literal"));
            if has(format!("flush({tt})")) {
                return Action::Flush;
            }
            if inst.single() {
                if has(format!("dunk({tt})")) {
                    return Action::Dunk(0);
                }
            } else if let Some(p) = (0..inst.packages).find(|p| has(format!("dunk({},{tt})", inst.package(*p)))) {
                return Action::Dunk(p);
            }
            Action::Noop
        })
        .collect()
}

pub fn extract_plans(inst: &BombInstance, sets: &[AnswerSet]) -> BTreeSet<Plan> {
    sets.iter().map(|s| extract_plan(inst, s)).collect()
}

/// Literals naming the plan, as they appear in answer sets.
pub fn plan_literals(inst: &BombInstance, plan: &[Action]) -> BTreeSet<Literal> {
    let mut out = BTreeSet::new();
    for (t, a) in plan.iter().enumerate() {
        let src = match a {
            Action::Noop => continue,
            Action::Flush => format!("flush({t})"),
            Action::Dunk(_) if inst.single() => format!("dunk({t})"),
            Action::Dunk(p) => format!("dunk({},{t})", inst.package(*p)),
        };
        out.insert(crate::text::parse_literal(&src).expect("literal"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_listing() {
        let (g, c) = bomb_source(&BombInstance::worked_example());
        assert!(g.starts_with("time(0). time(1).\ndunk(T) v -dunk(T) :- time(T)."));
        assert!(c.ends_with(":- not armed(2)."));
        let pair = encode_bomb(&BombInstance::worked_example()).unwrap();
        assert_eq!(pair.check.len(), 12);
        assert_eq!(pair.check.rules()[3].to_string(), "dunked(1) :- dunked(0).");
        assert_eq!(pair.check.rules()[1].to_string(), "armed(1) :- armed(0), not -armed(1), time(0).");
    }

    #[test]
    fn oracle() {
        let i = BombInstance::worked_example();
        assert!(conformant_oracle(&i, &[Action::Dunk(0), Action::Flush]).unwrap());
        assert!(!conformant_oracle(&i, &[Action::Dunk(0), Action::Noop]).unwrap());
        assert!(!conformant_oracle(&BombInstance { horizon: 0, ..i }, &[]).unwrap());
        assert_eq!(conformant_plans(&i).unwrap().into_iter().collect::<Vec<_>>(), vec![vec![Action::Dunk(0), Action::Flush]]);
    }

    #[test]
    fn clogging() {
        let btc = BombInstance::new(BombVariant::Btc, 1, 2).unwrap();
        assert!(conformant_oracle(&btc, &[Action::Dunk(0), Action::Noop]).unwrap());
        let two = BombInstance::new(BombVariant::Btc, 2, 2).unwrap();
        assert!(conformant_plans(&two).unwrap().is_empty());
        let two3 = BombInstance { horizon: 3, ..two };
        assert_eq!(conformant_plans(&two3).unwrap().len(), 2);
        let u = BombInstance::new(BombVariant::Btuc, 2, 3).unwrap();
        assert!(conformant_oracle(&u, &[Action::Dunk(0), Action::Flush, Action::Dunk(1)]).unwrap());
    }

    #[test]
    fn plan_count() {
        assert_eq!(all_plans(&BombInstance::new(BombVariant::Btc, 2, 3).unwrap()).len(), 64);
    }
}

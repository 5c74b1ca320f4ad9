//! Oracle-agreement suites over generated instances, shared by the
//! `verify` subcommand and the acceptance tests.

use crate::bench::{bomb, qbf, sc};
use crate::error::{Error, Result};
use crate::integrate::GuessCheckPair;
use crate::program::Program;
use crate::solve::{solve_program, AnswerSet, Budget, SolveConfig};
use crate::transform::TransformOptions;
use crate::verify::{
    check_integration, check_integration_np, check_solver, check_transformation, minimize, random_hcf_program,
    random_pair, random_program, solve_meta, PairShape, ProgramShape,
};
use crate::integrate::integrate;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Random,
    Qbf,
    Sc,
    Bomb,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        match s {
            "random" => Ok(Family::Random),
            "qbf" => Ok(Family::Qbf),
            "sc" => Ok(Family::Sc),
            "bomb" => Ok(Family::Bomb),
            _ => Err(Error::Precondition(format!("unknown family `{s}`"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Random => "random",
            Family::Qbf => "qbf",
            Family::Sc => "sc",
            Family::Bomb => "bomb",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub family: Family,
    /// Atoms per program (random), variables per block (qbf), companies
    /// (sc) or horizon (bomb).
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub options: Vec<TransformOptions>,
    pub budget: Budget,
}

impl SuiteConfig {
    pub fn new(family: Family, sizes: Vec<usize>, seeds: Vec<u64>) -> SuiteConfig {
        SuiteConfig { family, sizes, seeds, options: TransformOptions::combinations(), budget: Budget::from_env() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub size: usize,
    pub seed: u64,
    pub options: String,
    pub description: String,
    /// Offending input, minimized where possible.
    pub input: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    pub counterexample: Option<Counterexample>,
}

impl PropertyReport {
    fn new(name: &str) -> PropertyReport {
        PropertyReport { name: name.into(), checked: 0, failed: 0, counterexample: None }
    }

    fn record(&mut self, outcome: Result<Option<String>>, cx: impl FnOnce(String) -> Counterexample) {
        self.checked += 1;
        let problem = match outcome {
            Ok(None) => return,
            Ok(Some(d)) => d,
            Err(e) => e.to_string(),
        };
        self.failed += 1;
        if self.counterexample.is_none() {
            self.counterexample = Some(cx(problem));
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub family: Family,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyReport::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.properties {
            let tag = if p.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}/{}: {} checked, {} failed", self.family, p.name, p.checked, p.failed)?;
            if let Some(c) = &p.counterexample {
                writeln!(f, "  size {} seed {} opts {}: {}", c.size, c.seed, c.options, c.description)?;
            }
        }
        Ok(())
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let properties = match cfg.family {
        Family::Random => random_suite(cfg),
        Family::Qbf => qbf_suite(cfg)?,
        Family::Sc => sc_suite(cfg)?,
        Family::Bomb => bomb_suite(cfg)?,
    };
    Ok(SuiteReport { family: cfg.family, properties })
}

fn random_suite(cfg: &SuiteConfig) -> Vec<PropertyReport> {
    let mut tr = PropertyReport::new("transformation");
    let mut int = PropertyReport::new("integration");
    let mut np = PropertyReport::new("integration-np");
    let mut solver = PropertyReport::new("solver");
    for &size in &cfg.sizes {
        let shape = ProgramShape { atoms: size.max(1), ..ProgramShape::default() };
        let pshape = PairShape { guess_atoms: size.clamp(1, 5), check_atoms: size.clamp(1, 4), ..PairShape::default() };
        for &seed in &cfg.seeds {
            let p = random_hcf_program(seed, &shape);
            for opts in &cfg.options {
                tr.record(check_transformation(&p, opts, cfg.budget), |d| {
                    let fails = |q: &Program| matches!(check_transformation(q, opts, cfg.budget), Ok(Some(_)));
                    let small = minimize(&p, &fails);
                    Counterexample { size, seed, options: opts.to_string(), description: d, input: small.to_string() }
                });
            }
            let any = random_program(seed, &shape);
            solver.record(check_solver(&any, cfg.budget), |d| Counterexample {
                size,
                seed,
                options: "-".into(),
                description: d,
                input: any.to_string(),
            });
            let pair = random_pair(seed, &pshape);
            let show = |pair: &GuessCheckPair| format!("% guess\n{}\n% check\n{}", pair.guess, pair.check);
            for opts in &cfg.options {
                int.record(check_integration(&pair, opts, cfg.budget), |d| Counterexample {
                    size,
                    seed,
                    options: opts.to_string(),
                    description: d,
                    input: show(&pair),
                });
            }
            np.record(check_integration_np(&pair, cfg.budget), |d| Counterexample {
                size,
                seed,
                options: "-".into(),
                description: d,
                input: show(&pair),
            });
        }
    }
    vec![tr, int, np, solver]
}

fn solve_plain(p: &Program, budget: Budget) -> Result<Vec<AnswerSet>> {
    Ok(solve_program(p, &SolveConfig::all().with_budget(budget))?.0)
}

fn qbf_suite(cfg: &SuiteConfig) -> Result<Vec<PropertyReport>> {
    let mut agree = PropertyReport::new("three-way-agreement");
    for &n in &cfg.sizes {
        for &seed in &cfg.seeds {
            let q = qbf::gen_qbf(n, n, 3 * n, 3.min(2 * n), seed)?;
            let cx = |d: String, o: &TransformOptions| Counterexample {
                size: n,
                seed,
                options: o.to_string(),
                description: d,
                input: serde_json::to_string(&q).unwrap_or_default(),
            };
            let truth = qbf::eval_qbf(&q)?;
            let adhoc = solve_plain(&qbf::encode_qbf_adhoc(&q)?, cfg.budget).map(|s| qbf::witnesses_adhoc(&q, &s));
            let pair = qbf::encode_qbf(&q);
            for opts in &cfg.options {
                let outcome = (|| -> Result<Option<String>> {
                    let got = qbf::witnesses_integrated(&q, &solve_meta(&integrate(&pair, opts)?, cfg.budget)?);
                    let adhoc = adhoc.clone()?;
                    Ok(if got != truth {
                        Some(format!("integrated {got:?} vs truth table {truth:?}"))
                    } else if adhoc != truth {
                        Some(format!("ad hoc {adhoc:?} vs truth table {truth:?}"))
                    } else {
                        None
                    })
                })();
                agree.record(outcome, |d| cx(d, opts));
            }
        }
    }
    Ok(vec![agree])
}

/// Default shape of SC-n: n companies, n products, n/2 controlled companies.
pub fn sc_instance(n: usize, seed: u64) -> Result<sc::ScInstance> {
    sc::gen_sc(n, n, n / 2, seed)
}

fn sc_suite(cfg: &SuiteConfig) -> Result<Vec<PropertyReport>> {
    let mut agree = PropertyReport::new("four-way-agreement");
    let mut general = PropertyReport::new("general-encoding");
    for &n in &cfg.sizes {
        for &seed in &cfg.seeds {
            let inst = sc_instance(n, seed)?;
            let cx = |d: String, o: String| Counterexample {
                size: n,
                seed,
                options: o,
                description: d,
                input: serde_json::to_string(&inst).unwrap_or_default(),
            };
            let truth = sc::strategic_oracle(&inst)?;
            let pair = sc::encode_sc(&inst)?;
            let adhoc = (|| -> Result<_> {
                Ok((
                    sc::strat_sets(&solve_plain(&sc::encode_sc_adhoc1(&inst)?, cfg.budget)?),
                    sc::strat_sets(&solve_plain(&sc::encode_sc_adhoc2(&inst)?, cfg.budget)?),
                ))
            })();
            for opts in &cfg.options {
                let outcome = (|| -> Result<Option<String>> {
                    let got = sc::strat_sets(&solve_meta(&integrate(&pair, opts)?, cfg.budget)?);
                    let (a1, a2) = adhoc.clone()?;
                    Ok(if got != truth {
                        Some(format!("integrated {got:?} vs oracle {truth:?}"))
                    } else if a1 != truth {
                        Some(format!("first ad hoc encoding {a1:?} vs oracle {truth:?}"))
                    } else if a2 != truth {
                        Some(format!("second ad hoc encoding {a2:?} vs oracle {truth:?}"))
                    } else {
                        None
                    })
                })();
                agree.record(outcome, |d| cx(d, opts.to_string()));
            }
            let g = inst.to_general();
            let outcome = (|| -> Result<Option<String>> {
                let got = sc::strat_sets(&solve_meta(&integrate(&sc::encode_sc_general(&g)?, &TransformOptions::ALL)?, cfg.budget)?);
                let oracle = sc::strategic_oracle_general(&g)?;
                Ok(if got != truth || oracle != truth {
                    Some(format!("general encoding {got:?}, general oracle {oracle:?}, oracle {truth:?}"))
                } else {
                    None
                })
            })();
            general.record(outcome, |d| cx(d, TransformOptions::ALL.to_string()));
        }
    }
    Ok(vec![agree, general])
}

fn bomb_suite(cfg: &SuiteConfig) -> Result<Vec<PropertyReport>> {
    let mut agree = PropertyReport::new("plan-agreement");
    for &h in &cfg.sizes {
        for variant in [bomb::BombVariant::Plain, bomb::BombVariant::Btc, bomb::BombVariant::Btuc] {
            let inst = bomb::BombInstance::new(variant, 1, h)?;
            let want = bomb::conformant_plans(&inst)?;
            let pair = bomb::encode_bomb(&inst)?;
            for opts in &cfg.options {
                let outcome = (|| -> Result<Option<String>> {
                    let got = bomb::extract_plans(&inst, &solve_meta(&integrate(&pair, opts)?, cfg.budget)?);
                    Ok((got != want).then(|| format!("{variant}: integrated plans {got:?} vs simulated {want:?}")))
                })();
                agree.record(outcome, |d| Counterexample {
                    size: h,
                    seed: 0,
                    options: opts.to_string(),
                    description: d,
                    input: serde_json::to_string(&inst).unwrap_or_default(),
                });
            }
        }
    }
    Ok(vec![agree])
}

//! Disjunctive logic programs under answer-set semantics: parsing,
//! grounding, meta-interpretation of head-cycle-free check programs,
//! guess/check integration, a solver and benchmark generators.

pub mod bench;
pub mod error;
pub mod golden;
pub mod graph;
pub mod integrate;
pub mod ground;
pub mod program;
pub mod solve;
pub mod suite;
pub mod text;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use ground::{ground, GroundMode, Grounder, GroundingReport};
pub use program::{classify, reduct, Atom, BodyItem, Flags, Literal, Program, Rule, Term};
pub use solve::{brute_force, hcf_check, is_answer_set, solve, solve_program, solve_with, stratified_eval, AnswerSet, Budget, Producer, SearchStats, SolveConfig};
pub use text::{parse, parse_literal, print, Format};
pub use transform::{factual_rep, meta_rules, omega, omega_with, pa_closure, project, tr, transform, TransformOptions, Transformation};
pub use integrate::{build_check_prime, enforce_splitting, integrate, integrate_np, split_bodies, BodySplit, GuessCheckPair};

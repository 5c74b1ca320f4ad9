//! Benchmark families: instances, guess/check encodings, ad hoc encodings
//! and exhaustive oracles.

pub mod bomb;
pub mod qbf;
pub mod sc;

pub use bomb::{conformant_oracle, conformant_plans, encode_bomb, Action, BombInstance, BombVariant, Plan};
pub use qbf::{encode_qbf, encode_qbf_adhoc, eval_qbf, gen_qbf, QbfInstance, QbfLit};
pub use sc::{
    encode_sc, encode_sc_adhoc1, encode_sc_adhoc2, encode_sc_general, gen_sc, strategic_oracle, ScGeneral,
    ScInstance,
};

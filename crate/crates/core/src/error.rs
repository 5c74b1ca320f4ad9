use crate::text::SourceSpan;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {span}: {message}")]
    Syntax { message: String, span: SourceSpan },

    #[error("duplicate rule name `{name}`")]
    DuplicateRuleName { name: String, span: Option<SourceSpan> },

    #[error("program is not ground (rule {rule})")]
    NonGround { rule: String },

    #[error("built-in literal in rule {rule} is not supported here")]
    BuiltinPresent { rule: String },

    #[error("unsafe variable {variable} in rule {rule}{}", span_suffix(.span))]
    UnsafeRule {
        variable: String,
        rule: String,
        span: Option<SourceSpan>,
    },

    #[error("arithmetic on non-integer constant `{constant}` in rule {rule}")]
    Arithmetic { constant: String, rule: String },

    #[error("predicate `{predicate}` is reserved by the meta vocabulary")]
    MetaCollision { predicate: String },

    #[error("`{name}` is not a literal name")]
    BadLiteralName { name: String },

    #[error("{what}: {size} exceeds the cap of {cap}")]
    CapExceeded { what: String, size: usize, cap: usize },

    #[error("search budget exceeded after {decisions} decisions ({millis} ms)")]
    BudgetExceeded { decisions: u64, millis: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

fn span_suffix(span: &Option<SourceSpan>) -> String {
    match span {
        Some(s) => format!(" at {s}"),
        None => String::new(),
    }
}

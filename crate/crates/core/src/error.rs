use thiserror::Error;

pub type Result<T, E = LalgError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LalgError {
    #[error("malformed table: {0}")]
    MalformedTable(String),

    #[error("not an L-algebra: {0}")]
    NotAnLAlgebra(String),

    #[error("index {index} out of range for an algebra with {n} elements")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("algebra has {n} elements, limit is {max}")]
    TooLarge { n: usize, max: usize },

    #[error("subset is not an ideal: {0}")]
    NotAnIdeal(String),

    #[error("ideal is not proper")]
    NotProper,

    #[error("ideal is not stable under the action")]
    NotRhoIdeal,

    #[error("congruence modulo ideal is undefined: {0}")]
    CongruenceUndefined(String),

    #[error("invalid action: {0}")]
    ActionInvalid(String),

    #[error("action class too weak: need {required}, have {actual}")]
    ActionClassTooWeak { required: String, actual: String },

    #[error("words are over different base algebras")]
    BaseMismatch,

    #[error("word length budget {budget} exceeded")]
    BudgetExceeded { budget: usize },

    #[error("search budget exceeded after {nodes} nodes ({partial} results so far)")]
    ResourceBound { nodes: u64, partial: usize },

    #[error("property `{property}` falsified: {detail}")]
    Falsified { property: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),
}

impl LalgError {
    pub(crate) fn falsified(property: &str, detail: impl Into<String>) -> Self {
        LalgError::Falsified {
            property: property.to_string(),
            detail: detail.into(),
        }
    }
}

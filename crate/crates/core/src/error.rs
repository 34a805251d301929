use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element identifier `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("cover relations contain a cycle through `{0}`")]
    Cycle(String),
    #[error("no restriction given for element `{0}`")]
    MissingRestriction(String),
    #[error("restriction for element `{0}` is empty")]
    EmptyRestriction(String),
    #[error("restriction is not consistent across the cover {lower} < {upper}")]
    InconsistentRestriction { lower: String, upper: String },
    #[error("restriction is not weakly consistent across the cover {lower} < {upper}")]
    WeaklyInconsistentRestriction { lower: String, upper: String },
    #[error("element `{element}` lies on a chain of {chain} elements, longer than the bound q = {q}")]
    Degenerate { element: String, chain: usize, q: i32 },
    #[error("labelings belong to different posets, restrictions or strictness modes")]
    MismatchedContext,
    #[error("set is not an order ideal: `{0}` is present but something below it is not")]
    NotAnIdeal(String),
    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),
    #[error("label {label} at `{element}` lies outside 1..={q}")]
    LabelOutOfRange { element: String, label: i32, q: i32 },
    #[error("chain condition fails: `{element}` lies on a maximum chain of {found} elements, expected {expected}")]
    LambdaChainViolation { element: String, found: usize, expected: usize },
    #[error("not a toggle order: `{lower}` < `{upper}` share level {level}")]
    NotAToggleOrder { lower: String, upper: String, level: i64 },
    #[error("not a column toggle order: levels across `{lower}` < `{upper}` differ by {diff}")]
    NotColumnOrder { lower: String, upper: String, diff: i64 },
    #[error("row layers jump from `{lower}` to `{upper}` across {gap} layers, so they are not columns")]
    LayerGap { lower: String, upper: String, gap: usize },
    #[error("poset is not ranked")]
    NotRanked,
    #[error("embedding is not order and rank preserving at the cover `{lower}` < `{upper}`")]
    NotRankPreserving { lower: String, upper: String },
    #[error("jeu de taquin promotion needs a global bound restriction")]
    NotGlobalBoundMode,
    #[error("enumeration needs more than the budget of {budget} states")]
    BudgetExceeded { budget: usize },
    #[error("generator relation fails: {0}")]
    RelationViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

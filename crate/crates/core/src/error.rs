use thiserror::Error;

/// Errors surfaced by the engine. Boolean outcomes (accepted / rejected
/// assertions, query answers) are not errors; these are contract violations
/// or resource limits.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("name `{0}` is already in use")]
    DuplicateName(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("unknown context `{0}`")]
    UnknownContext(String),
    #[error("unknown interval `{0}`")]
    UnknownInterval(String),
    #[error("a constraint needs two distinct points")]
    SamePoint,
    #[error("disjuncts of one constraint must be pairwise disjoint")]
    NonDisjointDisjuncts,
    #[error("constraint needs at least one disjunct")]
    EmptyConstraint,
    #[error("finite time value exceeds the session cap of {0}")]
    NumericRange(i64),
    #[error("labels `{0}` and `{1}` belong to the same constraint")]
    SameGroup(String, String),
    #[error("label `{0}` is not a disjunct label")]
    NotADisjunct(String),
    #[error("disjunct naming mismatch: {0}")]
    DisjunctNames(String),
    #[error("the root context cannot be invalidated")]
    RootInvalidation,
    #[error("context `{0}` has no child contexts")]
    NoChildContexts(String),
    #[error("relation set is empty")]
    EmptyRelations,
    #[error("unknown interval relation `{0}`")]
    UnknownRelation(String),
    #[error("scenario count {0} exceeds the cap of {1}")]
    ScenarioCap(u64, u64),
    #[error("antecedent matches no elemental constraint")]
    VacuousAntecedent,
    #[error("no integer instantiation at the session granularity")]
    GranularityGap,
    #[error("label store is incomplete: {0}")]
    IncompleteStore(String),
    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

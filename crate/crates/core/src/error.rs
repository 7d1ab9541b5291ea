use crate::lp::LpError;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("sample space needs at least one variable")]
    EmptySpace,
    #[error("sample space is capped at {max} variables, got {got}")]
    TooManyVariables { got: usize, max: usize },
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariableName(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("empty variable subset")]
    EmptySubset,
    #[error("variable `{0}` repeated within a subset")]
    RepeatedInSubset(String),
    #[error("value {value} for {what} lies outside [-1, 1]")]
    OutOfRange { what: String, value: Rational },
    #[error("moment {0} is constrained more than once")]
    DuplicateConstraint(String),
    #[error("missing moment for subset {0}")]
    MissingMoment(String),
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("weights sum to {0}, not 1")]
    NotNormalized(Rational),
    #[error("distribution lives on a different sample space")]
    SpaceMismatch,
    #[error("the moment constraints are affinely inconsistent: no signed measure satisfies them")]
    AffinelyInconsistent,
    #[error("moment {0} is already constrained by the system")]
    TargetConstrained(String),
    #[error("mass budget {budget} is below the minimal negative mass {minimal}")]
    BudgetBelowMinimal { budget: Box<Rational>, minimal: Box<Rational> },
    #[error("moment range is unbounded")]
    UnboundedRange,
    #[error("prior must be a proper distribution (negative weight on atom {0})")]
    ImproperPrior(usize),
    #[error("likelihood value {0} lies outside [0, 1]")]
    LikelihoodOutOfRange(Rational),
    #[error("no likelihood table entry for eps = {0}")]
    MissingTableEntry(Rational),
    #[error("a judgment needs two distinct variables, got `{0}` twice")]
    DegeneratePair(String),
    #[error("every atom received zero posterior mass after judgment `{0}`")]
    ZeroEvidence(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

pub type Result<T> = std::result::Result<T, Error>;

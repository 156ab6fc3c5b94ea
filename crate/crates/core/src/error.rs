use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by an enclosure containing zero")]
    DivisionByIntervalContainingZero,
    #[error("square root of an enclosure with negative lower end")]
    NegativeOperand,
    #[error("expansion points differ")]
    BasePointMismatch,
    #[error("series has zero constant term")]
    ZeroConstantTerm,
    #[error("coefficient {index} is nonzero; cannot divide by x^{power}")]
    NonzeroLowOrderCoefficient { index: usize, power: usize },
    #[error("no certified tail bound for this series")]
    TailBoundUnavailable,
    #[error("tail ratio condition violated at |x| <= {bound}")]
    RatioConditionViolated { bound: String },
    #[error("requested order {requested} exceeds truncation order {available}")]
    OrderExceedsTruncation { requested: usize, available: usize },
    #[error("ladder hypothesis not certified: {0}")]
    HypothesisNotCertified(String),
    #[error("internal cross-check mismatch: {0}")]
    InternalCrossCheckMismatch(String),
    #[error("argument outside the function domain: {0}")]
    DomainViolation(String),
    #[error("too close to a pole: {0}")]
    PoleProximity(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

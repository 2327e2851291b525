use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero in Q(s)")]
    DivisionByZero,
    #[error("pole at s = {s0}: denominator factor {factor} vanishes")]
    Pole { s0: String, factor: String },
    #[error("specialization point s = 0 is not allowed")]
    ZeroSpecialization,
    #[error("operands belong to different algebras: {0}")]
    MixedAlgebra(String),
    #[error("no rule for adjacent pair {0} {1} (incomplete rule set)")]
    MissingRule(String, String),
    #[error("generator {0} is not part of algebra {1}")]
    UnknownGenerator(String, String),
    #[error("derivation has no image for generator {0}")]
    NoImage(String),
    #[error("not in the theta span: {0}")]
    NotThetaSpan(String),
    #[error("rule derivation failed: {0}")]
    RuleDerivation(String),
    #[error("rewrite system is not confluent: {0}")]
    NotConfluent(String),
    #[error("{0} is not central up to scaling: {1}")]
    NotCentral(String, String),
    #[error("inverse tower exhausted at level {0}")]
    TowerExhausted(i32),
    #[error("argument outside the domain of the involution: {0}")]
    ConjDomain(String),
    #[error("2-form has a residue outside the dx-pair basis: {0}")]
    FormResidue(String),
    #[error("1-form is not in the analytic kappa span: {0}")]
    NotKappaPlus(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownName(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

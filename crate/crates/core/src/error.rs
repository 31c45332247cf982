use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("group order {order} exceeds the cap of {cap}")]
    OrderCap { order: usize, cap: usize },
    #[error("bad group descriptor `{0}`")]
    BadDescriptor(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("I/O error: {0}")]
    Io(String),
    #[error("subgroup is not of prime-power order (order {0})")]
    MixedOrder(usize),
    #[error("subgroup has more than one subgroup of prime order")]
    NotRankOne,
    #[error("group is not solvable; subgroup enumeration by cyclic extension is incomplete")]
    NotSolvable,
    #[error("class functions live on different groups")]
    GroupMismatch,
    #[error("map is not an injective homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("character table lift failed: {0}")]
    LiftFailure(String),
    #[error("class function is not a character: multiplicity {value} at irreducible {index}")]
    NotCharacter { index: usize, value: String },
    #[error("poset is not one-dimensional: {0}")]
    NotOneDimensional(String),
    #[error("subfamily `{0}` is not closed under conjugation and subgroups: {1}")]
    NotClosed(String, String),
    #[error("no normal subgroup isomorphic to C_p x C_p")]
    NoSuchQ,
    #[error("p = 2 is excluded; the constructions assume an odd prime")]
    EvenPrime,
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

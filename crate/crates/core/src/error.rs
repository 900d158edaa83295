use thiserror::Error;

/// Errors raised by the exact-arithmetic layer.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("conductor must be positive, got {0}")]
    BadConductor(i64),
    #[error("conductor {needed} exceeds the cap of {cap}")]
    ConductorCap { needed: u64, cap: u32 },
    #[error("conductor {from} does not divide {to}")]
    NotDivisible { from: u32, to: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}

/// Errors raised while building or manipulating groups and homomorphisms.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("unsupported factor: {0}")]
    Unsupported(String),
    #[error("central generator {0} is not central")]
    NotCentral(usize),
    #[error("closure exceeded the cap of {cap} elements")]
    ClosureCap { cap: usize },
    #[error("factor mismatch: {0}")]
    FactorMismatch(String),
    #[error("not a homomorphism: relation fails at source elements ({x}, {y})")]
    NotAHomomorphism { x: usize, y: usize },
    #[error("generators do not generate the source group ({reached} of {order} reached)")]
    NotGenerating { reached: usize, order: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group is not an elementary abelian 2-group")]
    NotElementaryAbelian2,
    #[error("invalid formal group: {0}")]
    InvalidFormal(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type ExactResult<T> = Result<T, ExactError>;
pub type GroupResult<T> = Result<T, GroupError>;

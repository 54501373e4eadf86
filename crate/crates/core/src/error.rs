use thiserror::Error;

use crate::lattice::LatticeError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("set has {got} members; at most {max} are supported here")]
    TooManyMembers { got: usize, max: usize },
    #[error("element {0} is not in the sublogic generated by the given set")]
    OutsideSublogic(String),
    #[error("implication table: {0}")]
    ImplTable(String),
    #[error("twisted implications are only defined on projection lattices")]
    TwistedOnFiniteLogic,
    #[error("numerical check failed: {0}")]
    Numerical(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("fragment would contain {count} nodes, over the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u64 },
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("formula is not a sentence; free variables: {0:?}")]
    OpenFormula(Vec<String>),
}

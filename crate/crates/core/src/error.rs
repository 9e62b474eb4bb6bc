use std::fmt;

use crate::jetring::Var;

/// Errors raised by the jet machinery and the normalization pipelines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two operands carry different gradings.
    GradingMismatch,
    /// A substitution would lower the weighted order of a variable.
    NotFiltrationPreserving { var: Var },
    /// A polynomial depends on a variable it is not allowed to contain.
    UnexpectedVariable { var: Var, context: &'static str },
    /// Order-by-order solving could not make progress at this weight.
    ImplicitStall { weight: u32 },
    /// A series ODE has fewer initial conditions than its order, or a
    /// coefficient recursion could not fix a coefficient.
    Underdetermined { order: usize },
    /// Series operation requiring a unit constant term got something else.
    NotInvertible(&'static str),
    /// The defining function has vanishing derivative in `a` at the origin.
    NotAGraph,
    /// The surface is of finite type `k > 2`; use the singular pipeline.
    NotRegular { k: u32 },
    /// No mixed derivative was found up to the given order.
    InfiniteType { up_to: u32 },
    /// The input is not in the form required by the operation.
    BadForm(String),
    /// A step of the geometric construction failed.
    Step { step: u8, source: Box<Error> },
    /// A linear system that should be solvable was not.
    Infeasible { weight: u32 },
    /// A post-condition check failed. Indicates a bug.
    Invariant(String),
    /// Text could not be parsed.
    Parse { line: usize, column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GradingMismatch => write!(f, "operands have different gradings"),
            Error::NotFiltrationPreserving { var } => {
                write!(f, "substitution for {var} lowers its weighted order")
            }
            Error::UnexpectedVariable { var, context } => {
                write!(f, "unexpected variable {var} in {context}")
            }
            Error::ImplicitStall { weight } => {
                write!(f, "order-by-order solve stalls at weight {weight}")
            }
            Error::Underdetermined { order } => {
                write!(f, "series coefficient undetermined at order {order}")
            }
            Error::NotInvertible(what) => write!(f, "{what}: constant term is not invertible"),
            Error::NotAGraph => write!(f, "dF/da vanishes at the origin"),
            Error::NotRegular { k } => {
                write!(f, "surface is of finite type {k}; use the singular normalization")
            }
            Error::InfiniteType { up_to } => {
                write!(f, "no nonvanishing mixed derivative up to order {up_to}")
            }
            Error::BadForm(msg) => write!(f, "input not in required form: {msg}"),
            Error::Step { step, source } => write!(f, "step {step} failed: {source}"),
            Error::Infeasible { weight } => {
                write!(f, "linear system at weight {weight} has no solution")
            }
            Error::Invariant(msg) => write!(f, "internal invariant violated: {msg}"),
            Error::Parse { line, column, message } => {
                write!(f, "parse error at {line}:{column}: {message}")
            }
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Step { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}

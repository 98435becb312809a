use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two objects live over a different number of variables.
    Arity { expected: usize, found: usize },
    /// Matrix or vector shapes do not fit together.
    Shape(String),
    /// Text input could not be parsed; `pos` is a byte offset.
    Parse { pos: usize, msg: String },
    /// The generators do not contain `(M ∩ P)^(k+1)`.
    NotCofinite { k: u32 },
    /// A module failed its structural checks (commutation, nilpotency, ...).
    InvalidModule(String),
    /// A matrix does not intertwine the module actions.
    NotIntertwining,
    /// The subspace handed in is not invariant under the action.
    NotInvariant,
    /// A direction vector was zero where a nonzero one is required.
    ZeroDirection,
    /// An argument that must be nonzero or nonempty was not.
    Degenerate(String),
    /// Algebra axioms (associativity, approximate identity) violated.
    InvalidAlgebra(String),
    /// A value carries formal exponential units where a plain scalar is needed.
    NotNumeric,
    /// A family generator is not unimodular, or its inverse is wrong.
    NotUnimodular(String),
    /// Unknown representation label.
    UnknownLabel(String),
    /// An endomorphism is outside `End(V)_0`.
    NotFinite,
    /// Data handed to the Arthur-Campoli check is not an Arthur-Campoli sequence.
    NotArthurCampoli,
    /// Two independent computations that must agree did not.
    Inconsistent(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Arity { expected, found } => {
                write!(f, "arity mismatch: expected {expected} variables, found {found}")
            }
            Error::Shape(msg) => write!(f, "shape mismatch: {msg}"),
            Error::Parse { pos, msg } => write!(f, "parse error at {pos}: {msg}"),
            Error::NotCofinite { k } => {
                write!(f, "generators do not contain the maximal ideal to the power {}", k + 1)
            }
            Error::InvalidModule(msg) => write!(f, "invalid module: {msg}"),
            Error::NotIntertwining => write!(f, "matrix does not intertwine the actions"),
            Error::NotInvariant => write!(f, "subspace is not invariant"),
            Error::ZeroDirection => write!(f, "direction must be nonzero"),
            Error::Degenerate(msg) => write!(f, "degenerate input: {msg}"),
            Error::InvalidAlgebra(msg) => write!(f, "invalid algebra: {msg}"),
            Error::NotNumeric => write!(f, "value has formal exponential factors"),
            Error::NotUnimodular(msg) => write!(f, "generator not unimodular: {msg}"),
            Error::UnknownLabel(l) => write!(f, "unknown representation label {l:?}"),
            Error::NotFinite => write!(f, "endomorphism is not in End(V)_0"),
            Error::NotArthurCampoli => write!(f, "data is not an Arthur-Campoli sequence"),
            Error::Inconsistent(msg) => write!(f, "independent computations disagree: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

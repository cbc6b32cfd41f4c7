use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable count mismatch: {0} vs {1}")]
    VarCountMismatch(usize, usize),
    #[error("variable index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("degree undefined for the zero function")]
    UndefinedDegree,
    #[error("unsupported substitution: {0}")]
    UnsupportedSubstitution(String),
    #[error("pole: coordinates {0} and {1} coincide")]
    Pole(usize, usize),
    #[error("no expansion needed: both factors lie in block {0}")]
    SameBlock(usize),
    #[error("partition mismatch: {0}")]
    PartitionMismatch(String),
    #[error("positions are not injective")]
    NonInjective,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not invertible over the ring")]
    NotInvertible,
    #[error("connection is not flat at pair ({0}, {1})")]
    NotFlat(usize, usize),
    #[error("connection is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("Lie algebra data invalid: {0}")]
    InvalidLieAlgebra(String),
    #[error("Killing form is degenerate: algebra is not semisimple")]
    NotSemisimple,
    #[error("representation is not irreducible")]
    NotIrreducible,
    #[error("singular level: k + h^v = 0")]
    SingularLevel,
    #[error("degree identity violated: computed {computed}, predicted {predicted}")]
    DegreeIdentity { computed: String, predicted: String },
    #[error("path crosses or touches diagonal z{0} = z{1}")]
    PathOnDiagonal(usize, usize),
    #[error("step size underflow near a pole on segment {segment}")]
    PoleProximity { segment: usize },
    #[error("residue along ({0}, {1}) is not constant")]
    NonConstantResidue(usize, usize),
    #[error("incomplete data: {0}")]
    Incomplete(String),
    #[error("parse error at {path}: {msg}")]
    Parse { path: String, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(path: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.into(),
        msg: msg.into(),
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed simplicial complex: {0}")]
    MalformedComplex(String),

    #[error("empty vertex subset")]
    EmptySubset,

    #[error("invalid factor dimensions: {0}")]
    InvalidDimensions(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A maximal simplex whose column minor is not a unit.
    #[error("not a characteristic matrix: det at simplex {simplex:?} is {determinant}")]
    InvalidMatrix {
        simplex: Vec<usize>,
        determinant: String,
    },

    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),

    #[error("permutation is not an automorphism of the complex: {0}")]
    NotAnAutomorphism(String),

    #[error("complex is not a join of tetrahedron boundaries: {0}")]
    NotTetraJoin(String),

    #[error("degree {0} is odd")]
    OddDegree(u32),

    #[error("presentation does not admit a coprime pure-power rewrite system: {0}")]
    NotRewriteAdmissible(String),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("malformed input: {0}")]
    Parse(String),

    /// Parity and Sq² criteria disagree. Only an implementation bug can
    /// produce this.
    #[error("internal criterion disagreement: {0}")]
    CriterionDisagreement(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

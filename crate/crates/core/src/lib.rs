//! Exact linear relations, chain structure, perturbation bounds and matrix pencils.

pub mod chains;
pub mod fieldkit;
pub mod harness;
pub mod pencil;
pub mod perturb;
pub mod relation;

pub use fieldkit::{FieldTag, Matrix, Poly, Scalar, Subspace, Vector};
pub use relation::{LinearRelation, PowerSpaces, RelationParts};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: FieldTag, found: FieldTag },
    #[error("not a subspace of the given space")]
    NotASubspace,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown fixture {0}")]
    UnknownFixture(String),
}

pub type Result<T> = std::result::Result<T, Error>;

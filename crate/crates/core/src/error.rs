use thiserror::Error;

/// Errors raised while building or checking groups, modules and families.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("size cap exceeded: {what} would have size {size}, cap is {cap}")]
    SizeCap {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("invalid abelian group data: {0}")]
    InvalidAbelian(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

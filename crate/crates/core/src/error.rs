use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a chain complex: {0}")]
    NotAComplex(String),
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("negative exponent on non-Laurent generator {0}")]
    NegativeExponent(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("infinite basis: {0}")]
    InfiniteBasis(String),
    #[error("inhomogeneous rule: {0}")]
    Inhomogeneous(String),
    #[error("distributive law is not invertible: {0}")]
    NotInvertible(String),
    #[error("distributive law has no inverse rules")]
    MissingInverse,
    #[error("invalid distributive law: {0}")]
    InvalidLaw(String),
    #[error("invalid bimodule: {0}")]
    InvalidBimodule(String),
    #[error("algebra is not smooth: {0}")]
    NotSmooth(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown case {0}")]
    UnknownCase(String),
    #[error("invalid case spec: {0}")]
    InvalidSpec(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

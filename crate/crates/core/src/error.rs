use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("not in normal form: {0}")]
    NotNormalForm(String),
    #[error("series not invertible: {0}")]
    NotInvertible(String),
    #[error("reversion undefined: {0}")]
    ReversionUndefined(String),
    #[error("root of a negative constant")]
    NegativeRoot,
    #[error("undecidable: {0}")]
    Undecidable(String),
    #[error("no period annulus at the origin: {0}")]
    NoPeriodAnnulus(String),
    #[error("non-isolated singularity: {0}")]
    NonIsolated(String),
    #[error("insufficient truncation order: {0}")]
    InsufficientOrder(String),
    #[error("elimination order invalid: {0}")]
    EliminationOrder(String),
    #[error("factorization failed: {0}")]
    Unfactored(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;

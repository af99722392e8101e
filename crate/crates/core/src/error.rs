use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not an odd prime power")]
    NotOddPrimePower(u64),

    #[error("modulus {0} outside the supported range 2..=100000")]
    ModulusOutOfRange(u64),

    #[error("the principal character has no finite L(1, chi)")]
    PrincipalCharacter,

    #[error("digamma requires a positive argument, got {0}")]
    NonpositiveArgument(f64),

    #[error("character sum has imaginary residue {0:e}")]
    ImaginaryResidue(f64),

    #[error("exponent fit needs at least 4 usable rows, got {0}")]
    InsufficientRows(usize),

    #[error("exponent fit is degenerate: {0}")]
    DegenerateFit(&'static str),
}

impl Error {
    pub fn is_overflow(&self) -> bool {
        matches!(self, Error::Overflow(_))
    }
}

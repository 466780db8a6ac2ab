use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by field, polynomial, reconstruction and simulation routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime (characteristic must be a prime >= 2)")]
    NotPrime(u64),

    #[error("prime {0} is too large (maximum is 2^31)")]
    PrimeTooLarge(u64),

    #[error("operands belong to different fields (p = {left} vs p = {right})")]
    MixedFields { left: u64, right: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("gcd of two zero polynomials is undefined")]
    BothZero,

    #[error("lcm requires nonzero inputs")]
    ZeroInput,

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("polynomial degree {degree} is outside the dynamic range (must be < {bound})")]
    DegreeOutOfRange { degree: usize, bound: usize },

    #[error("residue of degree {degree} is not reduced modulo a modulus of degree {modulus_degree}")]
    ResidueNotReduced { degree: usize, modulus_degree: usize },

    #[error("residues are inconsistent: a1 - a2 is not divisible by gcd(m1, m2)")]
    InconsistentResidues,

    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("moduli are coprime (gcd has degree 0); robust reconstruction needs a common factor")]
    CoprimeModuli,

    #[error("degenerate moduli: the lower-degree modulus divides the other, so no level exists")]
    DegenerateModuli,

    #[error("modulus must be nonzero")]
    ZeroModulus,

    #[error("at least two moduli are required, got {0}")]
    TooFewModuli(usize),

    #[error("level {level} is out of range (valid levels are 1..={max})")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("enumeration of {size} candidates exceeds the cap of {cap}")]
    EnumerationTooLarge { size: u128, cap: u64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("could not generate a valid moduli pair within {0} attempts")]
    GenerationFailed(usize),
}

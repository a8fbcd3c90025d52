use thiserror::Error;

/// Errors raised by field construction, code construction and verification.
#[derive(Debug, Error)]
pub enum Error {
    #[error("extension degree m={m} out of range [{min}, {max}]")]
    DegreeOutOfRange { m: u32, min: u32, max: u32 },

    #[error("modulus {modulus:#b} has degree {found}, expected {expected}")]
    ModulusDegree {
        modulus: u64,
        expected: u32,
        found: u32,
    },

    #[error(
        "modulus {modulus:#b} is reducible: gcd(x^(2^{k}) - x, f) = {common_factor:#b} \
         exposes a factor of degree dividing {k}"
    )]
    ReducibleModulus {
        modulus: u64,
        k: u32,
        common_factor: u64,
    },

    #[error("h={h} is not a proper positive divisor of m={m}")]
    InvalidSubfield { m: u32, h: u32 },

    #[error("m/h = {m}/{h} is odd; {what} requires an even quotient")]
    OddQuotient { m: u32, h: u32, what: &'static str },

    #[error("{table} does not apply at (m,h)=({m},{h}): requires {hypothesis}")]
    Inapplicable {
        table: &'static str,
        m: u32,
        h: u32,
        hypothesis: &'static str,
    },

    #[error("element {value:#x} does not fit in GF(2^{m})")]
    ElementOutOfRange { value: u64, m: u32 },

    #[error("{0} must be nonzero")]
    ZeroElement(&'static str),

    #[error("enumeration needs {required} coordinate evaluations, budget is {budget}; use the formula path")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

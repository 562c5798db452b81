use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Vector or matrix shapes do not fit together.
    DimensionMismatch { expected: usize, found: usize },
    /// Symplectic operations need an even number of columns.
    OddLength(usize),
    /// Polynomial degree must be below the circulant size.
    PolynomialDegree { degree: usize, n: usize },
    /// Two stabilizer generators anticommute.
    Anticommuting { row_a: usize, row_b: usize },
    /// CSS generator matrices are not mutually orthogonal.
    NotOrthogonal { x_row: usize, z_row: usize },
    /// An exhaustive evaluation would exceed its configured budget.
    BudgetExceeded { what: &'static str, needed: usize, budget: usize },
    /// Syndrome is not in the image of the check matrix.
    UnreachableSyndrome,
    /// A numeric argument is outside its domain.
    Domain { what: &'static str, value: f64 },
    /// Degree sequence cannot be realized, or the sampler gave up.
    Infeasible(String),
    /// Bad argument that does not fit another variant.
    Invalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::OddLength(n) => write!(f, "expected an even length, got {n}"),
            Error::PolynomialDegree { degree, n } => {
                write!(f, "polynomial degree {degree} must be below circulant size {n}")
            }
            Error::Anticommuting { row_a, row_b } => {
                write!(f, "generator rows {row_a} and {row_b} anticommute")
            }
            Error::NotOrthogonal { x_row, z_row } => {
                write!(f, "X row {x_row} and Z row {z_row} overlap on an odd number of qubits")
            }
            Error::BudgetExceeded { what, needed, budget } => write!(
                f,
                "{what}: needs 2^{needed} terms, budget is 2^{budget}; use a smaller instance \
                 or the coset enumeration path"
            ),
            Error::UnreachableSyndrome => write!(f, "syndrome is not reachable by any error"),
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::Infeasible(msg) => write!(f, "infeasible: {msg}"),
            Error::Invalid(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

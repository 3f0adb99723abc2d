use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field GF({p}^{k}) has more than 2^16 elements")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("modulus must be monic of degree {expected}, got {got} coefficients")]
    BadModulusDegree { expected: u32, got: usize },
    #[error("modulus is reducible over GF({p})")]
    ReducibleModulus { p: u64 },
    #[error("no default modulus for GF({p}^{k}); supply one explicitly")]
    NoDefaultModulus { p: u64, k: u32 },
    #[error("malformed moduli config line {line}: {reason}")]
    ModuliConfig { line: usize, reason: String },
    #[error("element encoding {enc} out of range for a field of size {size}")]
    ElementOutOfRange { enc: u64, size: u32 },
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    CrossField,

    #[error("duplicate root {0} in root set")]
    DuplicateRoot(u32),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("cannot parse polynomial: {0}")]
    PolyParse(String),

    #[error("unknown curve family `{0}`")]
    UnknownFamily(String),
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParameters { family: String, reason: String },
    #[error("{family}: enumerated {observed} rational places, maximality formula gives {expected}")]
    PlaceCountMismatch { family: String, observed: u64, expected: u64 },
    #[error("affine point {0:?} is singular on the model")]
    SingularPoint(Vec<u32>),
    #[error("point cache: {0}")]
    Cache(String),

    #[error("A-set methods disagree: fibre grouping gives {by_fibres}, algebraic condition gives {by_condition}")]
    ASetDisagreement { by_fibres: usize, by_condition: usize },
    #[error("{what}: computed {computed}, expected {expected}")]
    Inconsistent { what: String, computed: String, expected: String },

    #[error("deg G = {deg_g} is not below deg D = {deg_d}")]
    DivisorTooLarge { deg_g: u64, deg_d: u64 },
    #[error("candidate monomials span only {achieved} dimensions, Riemann-Roch requires {required}")]
    DimensionShortfall { achieved: usize, required: usize },

    #[error("code is not self-orthogonal")]
    NotSelfOrthogonal,
    #[error("first code is not contained in the second")]
    NotNested,
    #[error("exhaustive search over {words} codewords exceeds the cap of 2^24")]
    EnumerationCap { words: f64 },
    #[error("matrix file: {0}")]
    MatrixFormat(String),
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

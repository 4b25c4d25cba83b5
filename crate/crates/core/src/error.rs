use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different cyclotomic fields (m = {0} and m = {1})")]
    MixedModulus(u32, u32),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("elements belong to different group contexts")]
    ContextMismatch,
    #[error("group order {order} exceeds the size limit {limit}")]
    SizeLimitExceeded { order: String, limit: u64 },
    #[error("Baxterized element with coinciding spectral parameters")]
    SingularSpectralParameters,
    #[error("substitution {var} = {value} hits a pole")]
    SingularSubstitution { var: String, value: String },
    #[error("rational function still depends on {0}")]
    FreeVariables(String),
    #[error("node {0} is not in the shape")]
    NodeNotInShape(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

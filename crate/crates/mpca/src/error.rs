use thiserror::Error;

/// Errors produced by the mpca library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("coordinate tuple has {got} entries, group has {expected} factors")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("polynomial is not primitive over GF({p}): {reason}")]
    NotPrimitive { p: u32, reason: String },

    #[error("{value} is not a unit modulo {modulus} (gcd = {gcd})")]
    NotAUnit { value: u64, modulus: u64, gcd: u64 },

    #[error("linear map is singular: determinant \u{2261} 0 (mod {p})")]
    SingularMap { p: u32 },

    #[error("group {0} is not elementary abelian (Z_p)^m")]
    NonElementaryGroup(String),

    #[error("operation requires a generic array (star at the group zero), star is at {0}")]
    StarNotAtOrigin(String),

    #[error("residue {value} out of range [0, {modulus})")]
    ValueOutOfRange { value: u64, modulus: u64 },

    #[error("size cap exceeded: {what} = {got} > {cap}")]
    SizeCapExceeded { what: &'static str, got: u64, cap: u64 },

    #[error("invalid array: {0}")]
    InvalidArray(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("task index {task} out of range: {tasks} tasks at this split depth")]
    TaskOutOfRange { task: usize, tasks: usize },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("orbit closure requires generic seeds over a single group: {0}")]
    InvalidSeeds(String),
}

pub type Result<T> = std::result::Result<T, Error>;

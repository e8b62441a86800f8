use thiserror::Error;

/// Errors raised by the coding primitives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability {0} is outside [0.5, 1)")]
    ProbabilityOutOfRange(f64),

    #[error("bit count {0} exceeds 64")]
    BitCountTooLarge(u32),

    #[error("pattern {pattern:#x} does not fit in {count} bits")]
    PatternTooWide { pattern: u64, count: u32 },

    #[error("value {value} is outside the code's range [0, {bound}]")]
    ValueOutOfRange { value: u64, bound: u64 },

    #[error("invalid parameters m={m}, m2={m2}: need 1 <= m < m2 <= 2m")]
    InvalidParams { m: u64, m2: u64 },

    #[error("universe size must be at least 1")]
    EmptyUniverse,

    #[error("code table for n={n} exceeds the limit of {limit} rows")]
    TableTooLarge { n: u64, limit: u64 },

    #[error("ceiling log is undefined for 0")]
    LogOfZero,

    #[error("layout field {field}={value} does not fit the 32-bit fast path")]
    LayoutTooWide { field: &'static str, value: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

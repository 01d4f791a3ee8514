use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("automorphism order {0} is not supported (expected 1 or 2)")]
    UnsupportedOrder(u32),
    #[error("eigenspace index {r} out of range for T = {t}")]
    EigenIndexOutOfRange { r: u32, t: u32 },
    #[error("delta_{i}({r}) is undefined for T = {t}")]
    DeltaOutOfRange { i: u32, r: u32, t: u32 },
    #[error("malformed fraction: {0}")]
    MalformedFraction(String),
    #[error("grade {0} is negative")]
    NegativeGrade(String),
    #[error("residue family needs k >= s (got k = {k}, s = {s})")]
    ResidueOrder { k: u64, s: u64 },
    #[error("pairing needs weight {needed} but the functional window is {window}")]
    WindowViolation { needed: u32, window: u32 },
    #[error("vector is not homogeneous in weight and eigenspace")]
    NotHomogeneous,
    #[error("vector lies in V^{found}, expected V^{expected}")]
    EigenMismatch { expected: u32, found: u32 },
    #[error("{0}")]
    Unsupported(String),
}

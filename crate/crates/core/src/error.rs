use thiserror::Error;

/// Errors produced by the watermarking pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed image at byte {offset}: {reason}")]
    Format { offset: usize, reason: String },

    #[error("truncated pixel data at byte {offset}: expected {expected} bytes, found {found}")]
    Truncated {
        offset: usize,
        expected: usize,
        found: usize,
    },

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate chaotic orbit at iterate {index}: {reason}")]
    DegenerateOrbit { index: usize, reason: String },

    #[error("coordinate ({x}, {y}) outside {modulus}x{modulus} grid")]
    CoordinateOutOfRange { x: u64, y: u64, modulus: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "host {host_w}x{host_h} too small for a {wm_side}x{wm_side} watermark; \
         need at least {min_w}x{min_h}"
    )]
    Capacity {
        host_w: usize,
        host_h: usize,
        wm_side: usize,
        min_w: usize,
        min_h: usize,
    },

    #[error("key file line {line}: {reason}")]
    KeyFile { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

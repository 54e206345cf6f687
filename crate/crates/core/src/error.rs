//! Error type shared across the crate.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure conditions surfaced by this crate.
///
/// Variants are grouped by origin: parameter/shape validation, key
/// generation, encryption, and the wire codecs. Deserialization routines in
/// particular are guaranteed to return one of these (never panic) on
/// arbitrary input bytes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter set failed validation (zero field, divisibility,
    /// mode-specific constraint, or an unsupported magnitude).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A clause violated a structural rule (empty, repeated variable,
    /// variable index out of range).
    #[error("malformed clause: {0}")]
    MalformedClause(String),

    /// Two objects that must agree on dimensions did not (e.g. a key for a
    /// different `n` than the spectrum it is applied to).
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Key generation exhausted its retry budget.
    #[error("key generation failed: {0}")]
    GenerationFailure(String),

    /// Encryption exhausted its extraction budget or was asked for an
    /// unrepresentable block value.
    #[error("encryption failed: {0}")]
    EncryptionFailure(String),

    /// A ciphertext decoded to a value outside the expected range, or its
    /// structure is inconsistent with its own header.
    #[error("corrupt ciphertext: {0}")]
    CorruptCiphertext(String),

    /// A serialized object carried an unknown magic tag.
    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: [u8; 4], found: [u8; 4] },

    /// A serialized object carried a format version this build cannot read.
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),

    /// Input ended before the declared payload was complete.
    #[error("truncated input: expected {expected} bytes, got {got}")]
    Truncated { expected: u64, got: u64 },

    /// Payload bytes were present but undecodable (out-of-range field,
    /// non-zero padding, trailing data, non-canonical ordering).
    #[error("invalid encoding: {0}")]
    InvalidEncoding(String),

    /// An I/O error from file-backed operations (CLI layer).
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

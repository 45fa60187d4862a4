use thiserror::Error;

/// Errors shared across the crate.
///
/// Variants are grouped so callers can map failures onto coarse classes:
/// bad inputs ([`Error::is_input_error`]), child-process / protocol trouble
/// ([`Error::is_oracle_error`]), and games too degenerate to analyse
/// ([`Error::DegenerateGame`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("player count n={n} out of range (expected 1..={max})")]
    PlayerCountOutOfRange { n: u32, max: u32 },

    #[error("mask {mask:#b} out of range for n={n}")]
    MaskOutOfRange { mask: u32, n: u32 },

    #[error("array length {got} does not match 2^{n} = {expected}")]
    LengthMismatch { n: u32, expected: usize, got: usize },

    #[error("non-finite value at {context}")]
    NonFinite { context: String },

    #[error("binomial argument n={n} exceeds 64 (exact 64-bit range)")]
    BinomialRange { n: u32 },

    #[error("{0}")]
    Precondition(String),

    #[error("malformed input{}: {msg}", path.as_deref().map(|p| format!(" {p}")).unwrap_or_default())]
    Format { path: Option<String>, msg: String },

    #[error("i/o error{}: {source}", path.as_deref().map(|p| format!(" {p}")).unwrap_or_default())]
    Io {
        path: Option<String>,
        #[source]
        source: std::io::Error,
    },

    #[error("oracle process failed{}: {msg}", pending_mask.map(|m| format!(" (pending mask {m:#b})")).unwrap_or_default())]
    OracleProcess { pending_mask: Option<u32>, msg: String },

    #[error("oracle protocol violation{}: {msg}", pending_mask.map(|m| format!(" (pending mask {m:#b})")).unwrap_or_default())]
    OracleProtocol { pending_mask: Option<u32>, msg: String },

    #[error("oracle returned a non-finite value for mask {mask:#b}")]
    OracleNonFinite { mask: u32 },

    #[error("degenerate game: {0}")]
    DegenerateGame(String),

    #[error("analysis assumption violated: {0}")]
    AssumptionViolated(String),
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn format(path: Option<&std::path::Path>, msg: impl Into<String>) -> Self {
        Error::Format {
            path: path.map(|p| p.display().to_string()),
            msg: msg.into(),
        }
    }

    /// True for malformed files, bad parameters, and range violations.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::PlayerCountOutOfRange { .. }
                | Error::MaskOutOfRange { .. }
                | Error::LengthMismatch { .. }
                | Error::NonFinite { .. }
                | Error::BinomialRange { .. }
                | Error::Precondition(_)
                | Error::Format { .. }
                | Error::Io { .. }
        )
    }

    /// True for external-oracle process and protocol failures.
    pub fn is_oracle_error(&self) -> bool {
        matches!(
            self,
            Error::OracleProcess { .. } | Error::OracleProtocol { .. } | Error::OracleNonFinite { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the transceiver model, channel builders and precoders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("propagation delay {delay_s:e} s exceeds the cyclic prefix {cp_s:e} s")]
    CpCoverage { delay_s: f64, cp_s: f64 },
    #[error("matrix is rank deficient (condition number estimate {cond_estimate:e})")]
    RankDeficient { cond_estimate: f64 },
    #[error("dense matrix dimension {size} exceeds the cap {cap}; use the implicit block form")]
    TooLarge { size: usize, cap: usize },
    #[error("evaluation grid is empty")]
    EmptyGrid,
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: &'static str) -> Error {
    Error::InvalidParameter { name, reason }
}

pub(crate) fn check_dim(op: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            op,
            expected,
            found,
        })
    }
}

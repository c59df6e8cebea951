use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` = {value} is outside {range}")]
    Parameter {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid interval [{lo}, {hi}]")]
    Interval { lo: i64, hi: i64 },

    #[error("invalid weight: {0}")]
    Weight(String),

    #[error("invalid sequence: {0}")]
    Sequence(String),

    #[error("accumulated sum over [{lo}, {hi}] left the finite range")]
    Range { lo: i64, hi: i64 },

    #[error("window [{lo}, {hi}] too small: {reason}")]
    Window { lo: i64, hi: i64, reason: String },

    #[error("support [{lo}, {hi}] leaks outside [{within_lo}, {within_hi}]")]
    SupportLeak {
        lo: i64,
        hi: i64,
        within_lo: i64,
        within_hi: i64,
    },

    #[error("exponential term overflowed at k = {k}")]
    Overflow { k: i64 },

    #[error("input is identically zero: {0}")]
    ZeroInput(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("tail not certifiable: {0}")]
    TailNotCertified(String),

    #[error("empty {0}")]
    Empty(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_open_unit(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter {
            name,
            value,
            range: "(0, 1)",
        })
    }
}

pub(crate) fn check_half_open_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Parameter {
            name,
            value,
            range: "[0, 1)",
        })
    }
}

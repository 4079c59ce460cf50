use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("input |{m},{n}> exceeds the three-photon truncation")]
    OutsideTruncation { m: u32, n: u32 },

    #[error("no herald events")]
    NoHeraldEvents,

    #[error("g2 undefined: zero click probability on detector {0}")]
    UndefinedG2(&'static str),

    #[error("no detections at Bob")]
    NoDetections,

    #[error("quadrature grid too coarse: {0} points per sigma (minimum 8)")]
    GridTooCoarse(u32),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// Rejects NaN and values outside the closed interval.
pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(invalid(name, format!("{value} not in [0, 1]")))
    }
}

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The Jimmy-to-Bob channel vector is (numerically) zero.
    #[error("degenerate channel: jammer-to-destination vector has zero norm")]
    DegenerateChannel,
    /// The eavesdropper channel lies in the span of the destination channel,
    /// so the projection onto the null space vanishes.
    #[error("degenerate alignment: eavesdropper channel is parallel to destination channel")]
    DegenerateAlignment,
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("departure requested from an empty battery")]
    EmptyBatteryDeparture,
    #[error("channel vectors must have equal length >= 2 (got {jb} and {je})")]
    ChannelShape { jb: usize, je: usize },
    #[error("channel coefficient is not finite")]
    NonFiniteChannel,
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

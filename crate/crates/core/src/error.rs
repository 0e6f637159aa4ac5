use thiserror::Error;

/// Errors raised by the library surface.
///
/// Verification outcomes are never errors: a product that cannot be
/// certified is reported through [`crate::identities::Status`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what}: argument {value} outside the domain ({domain})")]
    Domain {
        what: &'static str,
        value: i128,
        domain: &'static str,
    },
    #[error("inexact polynomial division: nonzero remainder of degree {degree}")]
    InexactDivision { degree: usize },
    #[error("ball {op}: input enclosure {detail}")]
    BallDomain { op: &'static str, detail: String },
    #[error("unknown equation id `{0}`")]
    UnknownEquation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(what: &'static str, value: impl Into<i128>, domain: &'static str) -> Result<T> {
    Err(Error::Domain {
        what,
        value: value.into(),
        domain,
    })
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no isolated fixed points (identity map)")]
    NoIsolatedFixedPoints,
    #[error("half-turn undefined for improper line")]
    ImproperLine,
    #[error("perpendicular not unique")]
    PerpendicularNotUnique,
    #[error("degenerate pull-back: angle {0} puts the horizon through infinity")]
    DegeneratePullback(f64),
    #[error("pull-back ends must be finite and distinct")]
    DegeneratePullbackEnds,
    #[error("degenerate generator")]
    DegenerateGenerator,
    #[error("internal consistency: {0}")]
    Consistency(String),
    #[error("point or line does not lie on the plane (off by {0:.3e})")]
    OffPlane(f64),
    #[error("degenerate candidate pair")]
    DegenerateCandidate,
    #[error("indeterminate completion: {0}")]
    IndeterminateCompletion(String),
    #[error("separation undefined: circles overlap")]
    SeparationUndefined,
    #[error("degenerate circle")]
    DegenerateCircle,
    #[error("lines do not meet orthogonally")]
    NotPerpendicular,
    #[error("ortho-end is not certified\n{0}")]
    NotCertified(Box<crate::certify::FailureReport>),
    #[error("degenerate configuration at step `{step}`: {source}")]
    Step {
        step: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error("input error: {0}")]
    Input(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn at(step: &'static str) -> impl FnOnce(Error) -> Error {
        move |source| Error::Step {
            step,
            source: Box::new(source),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

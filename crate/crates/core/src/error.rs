use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The density could not be integrated up to the boundary.
    #[error("non-integrable density: {0}")]
    Integrability(String),

    /// A scale function or weight produced a non-finite value.
    #[error("domain error at s = {at}: {message}")]
    Domain { at: f64, message: String },

    #[error("scale function is not essentially monotone (C_up = {c_up:.3e}, C_down = {c_down:.3e})")]
    NotInClassL { c_up: f64, c_down: f64 },

    #[error("no finite logarithmic envelope: {0}")]
    Envelope(String),

    /// Disc quadrature did not settle within the level budget.
    #[error("quadrature did not converge: last estimates {previous:.6e} and {last:.6e}{}", context.as_deref().map(|c| format!(" ({c})")).unwrap_or_default())]
    Quadrature {
        previous: f64,
        last: f64,
        context: Option<String>,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("tail integral vanishes at r = {0}; the weight violates the positive-tail assumption")]
    StandingAssumption(f64),

    #[error("degenerate measure: {0}")]
    DegenerateMeasure(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("degree {degree} exceeds cap {cap}; discarded tail is bounded by {tail_bound:.3e} on the closed disc")]
    DegreeOverflow {
        degree: usize,
        cap: usize,
        tail_bound: f64,
    },

    #[error("{what} failed the class check: {detail}")]
    ClassMembership { what: String, detail: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Attaches a location description to a quadrature failure.
    pub(crate) fn with_context(self, ctx: impl Into<String>) -> Self {
        match self {
            Error::Quadrature { previous, last, .. } => Error::Quadrature {
                previous,
                last,
                context: Some(ctx.into()),
            },
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

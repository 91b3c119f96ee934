use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument {name} = {value} outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error(
        "quadrature did not converge within {panels} panels \
         (partial log-integral {partial_log}, estimated relative error {rel_err:e})"
    )]
    QuadratureNonConvergence {
        panels: usize,
        partial_log: f64,
        rel_err: f64,
    },

    #[error("index j = {j}: {source}")]
    AtIndex {
        j: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("regime guard violated: {0}")]
    Regime(String),

    #[error("matrix probe: {0}")]
    Probe(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            domain,
        }
    }

    pub(crate) fn at_index(self, j: usize) -> Self {
        Error::AtIndex {
            j,
            source: Box::new(self),
        }
    }

    /// Partial estimate carried by a quadrature failure, if any.
    pub fn partial_log(&self) -> Option<f64> {
        match self {
            Error::QuadratureNonConvergence { partial_log, .. } => Some(*partial_log),
            Error::AtIndex { source, .. } => source.partial_log(),
            _ => None,
        }
    }

    /// True for failures of a numerical method rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::QuadratureNonConvergence { .. } | Error::Probe(_) => true,
            Error::AtIndex { source, .. } => source.is_numeric(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

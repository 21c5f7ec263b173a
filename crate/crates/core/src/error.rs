use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the named operation.
    #[error("{what}: argument {value} is outside the domain")]
    Domain { what: &'static str, value: f64 },

    /// The entropic index does not give a normalizable density (q >= 3).
    #[error("q = {0} does not give a normalizable q-Gaussian (need q < 3)")]
    NotNormalizable(f64),

    #[error("{what}: no convergence after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    /// Groupoid partiality: the right map's target must be the left map's source.
    #[error(
        "composition undefined: left map has source q = {left_source} but right map has target q = {right_target}"
    )]
    CompositionUndefined { left_source: f64, right_target: f64 },

    #[error("unknown closed-form row `{0}`")]
    UnknownRow(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }

    /// True for failures of an iterative or adaptive numerical method, as
    /// opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. })
    }
}

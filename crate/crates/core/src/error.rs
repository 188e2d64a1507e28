use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "quadrature did not converge to {abs_tol:e} after {doublings} doublings \
         (last change {last_change:e} at {points} points)"
    )]
    ConvergenceFailure {
        abs_tol: f64,
        doublings: u32,
        points: usize,
        last_change: f64,
    },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("{quantity} is not defined for the {model} dispersion")]
    Unsupported {
        quantity: &'static str,
        model: &'static str,
    },

    #[error(
        "lattice [{n_min}, {n_max}] too small: light cone reaches [{reach_lo}, {reach_hi}] \
         and a margin of {margin} sites is required"
    )]
    LightConeOverflow {
        n_min: i64,
        n_max: i64,
        reach_lo: i64,
        reach_hi: i64,
        margin: i64,
    },

    #[error("normalization bracket {re:e}{im:+e}i is not a positive real number")]
    Normalization { re: f64, im: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("reduced spinor density matrix is not Hermitian (asymmetry {0:e})")]
    NonHermitian(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for failures of the numerical machinery itself, as opposed to
    /// invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ConvergenceFailure { .. }
                | Error::Normalization { .. }
                | Error::NonHermitian(_)
        )
    }
}

use thiserror::Error;

/// Errors produced by the numerical pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid contour index {0}, expected 0..=5")]
    InvalidContour(usize),

    #[error("quadrature did not converge: achieved {achieved:.3e}, target {target:.3e}")]
    QuadratureNonConvergence { achieved: f64, target: f64 },

    #[error("point lies on a jump ray (arg z = {0:.6}); pick a limit side")]
    AmbiguousSector(f64),

    #[error("point lies on a branch cut: {0}")]
    OnBranchCut(&'static str),

    #[error("matrix is numerically singular")]
    Singular,

    #[error("det(I - A) is not positive; discretization failed, increase m")]
    NonPositiveDeterminant,

    #[error("Neumann series diverges: ||A|| = {norm:.3} >= 1")]
    SeriesDivergent { norm: f64 },

    #[error("invalid node count m = {0}: need even m >= 4")]
    InvalidNodeCount(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ill-conditioned fit: {0}")]
    IllConditionedFit(String),

    #[error("modified Bessel argument outside domain: {0}")]
    BesselDomain(String),

    #[error("unsupported series expansion: {0}")]
    UnsupportedSeries(String),

    #[error("point outside the local parametrix disk U({center}, {delta})")]
    OutsideDisk { center: f64, delta: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

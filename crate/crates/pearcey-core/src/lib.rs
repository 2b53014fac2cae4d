//! Numerics for the Pearcey-kernel gap probability
//! F(s; rho) = ln det(I - K) on (-s, s): contour evaluation of the Pearcey
//! functions, both kernel representations, Nystrom log-determinants with
//! exact derivative identities, the three-sheeted surface and parametrix
//! machinery of the steepest-descent analysis, and the large-gap expansion
//! with its undetermined constant fitted from data.

pub mod asymptotics;
pub mod bessel;
pub mod cmatrix;
pub mod error;
pub mod fredholm;
pub mod kernel;
pub mod linalg;
pub mod parametrix;
pub mod pearcey_fn;
pub mod quad;
pub mod surface;
pub mod verify;

pub use cmatrix::{Matrix2, Matrix3};
pub use error::{Error, Result};
pub use fredholm::{build_grid, fredholm_logdet, gap_result, GapResult, NystromGrid};
pub use kernel::{kernel_bh, kernel_diag, kernel_point, kernel_rh, IntegrableVectors, KernelPoint};
pub use pearcey_fn::{
    kappa_coeffs, pearcey_asymptotic, pearcey_p, pearcey_q, psi_sector, psi_tilde, AsymptoticFrame,
    KappaCoeffs, PearceyParams, PearceyTriple, PsiMatrix,
};
pub use surface::{Sheet, SurfaceConstants};

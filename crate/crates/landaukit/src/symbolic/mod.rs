//! Exact symbolic layer: sparse rational polynomials over the nested
//! coordinates, the denominator catalog of a dressed triangle at a chosen
//! star and sector, the stationarity matrix built from half-gradients, its
//! momentum-variable rescaling, and the scaling-operator certificates that
//! eliminate the direction-norm constraint rows.

pub mod denominators;
pub mod hop;
pub mod landau;
pub mod poly;

pub use denominators::{build_denominator_set, Denominator, DenominatorSet, Kind};
pub use hop::{apply_h, eliminate_delta_rows, DeltaCertificate};
pub use landau::{landau_matrix, to_k_form, KFormMatrix, LandauMatrix};
pub use poly::{Monomial, Poly, PolyVec, Var};

#[derive(Debug, thiserror::Error)]
pub enum SymbolicError {
    #[error("invalid star graph: {0}")]
    InvalidStarGraph(String),
    #[error("rescaling to momentum variables requires a nonzero leading radius")]
    ZeroScale,
    #[error("certification failure: {0}")]
    CertificationFailure(String),
}

//! Exact coset enumeration and convolution for Hecke algebras of types in `Sp(4, F)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`]: rationals with a p-adic valuation;
//! * [`affine`]: the type C root system, affine roots, the affine Weyl group, strips,
//!   galleries and the Levi common-value solver;
//! * [`chevalley`]: the 4×4 symplectic matrix model with its pinning;
//! * [`filtration`]: Moy–Prasad groups, quotient coordinates and characters;
//! * [`hecke`]: coset tables, convolution, supports, Gauss sums and the abstract algebra;
//! * [`cli`]: report generation for the command-line front end.

pub mod affine;
pub mod chevalley;
pub mod cli;
pub mod filtration;
pub mod hecke;
pub mod scalar;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not an odd prime in the supported range")]
    BadPrime(u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("scalar has negative valuation")]
    NegativeValuation,
    #[error("scalar is not a unit")]
    NotUnit,
    #[error("element does not preserve the strip")]
    NotStripPreserving,
    #[error("matrix is not monomial")]
    NotMonomial,
    #[error("element is not in the group")]
    NotInGroup,
    #[error("unsupported filtration: {0}")]
    UnsupportedFiltration(String),
    #[error("character is not quadratic")]
    NotQuadratic,
    #[error("coset table exceeds the bound of {0} cosets")]
    SizeBound(usize),
    #[error("support test inconclusive: {0}")]
    Inconclusive(String),
    #[error("{0}")]
    Invalid(String),
}

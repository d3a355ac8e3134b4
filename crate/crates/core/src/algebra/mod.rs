//! Polynomial arithmetic, exact and floating.

mod linalg;
mod poly;
mod ring;
mod roots;
mod tri;
mod unipoly;

pub use linalg::{det3, solve2, solve3};
pub use poly::{discriminant, resultant, BiPoly, Poly};
pub use ring::{parse_rat, rat_to_f64, rationalize, Field, Rat, Ring, QI};
pub use roots::{cluster_roots, fujiwara_bound, roots};
pub use tri::{cross, dot, norm3, to_c64_3, TriPoly};
pub use unipoly::UniPoly;

use alloc::vec::Vec;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("undefined resultant")]
    UndefinedResultant,
    #[error("polynomial degree too low for this operation")]
    DegreeTooLow,
    #[error("leading coefficient tiny relative to the others; deflate first")]
    LeadingCoefficientTiny,
    #[error("root finder did not converge ({} partial roots)", partial.len())]
    RootsNotConverged { partial: Vec<Complex64> },
    #[error("term {found:?} does not have total degree {expected}")]
    NotHomogeneous { expected: u32, found: [u32; 3] },
    #[error("singular linear system")]
    Singular,
}

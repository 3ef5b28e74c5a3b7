//! Finite-field workbench for systems of polynomials in the elementary
//! symmetric functions: exhaustive point counts, factorization-pattern
//! censuses of linear families, average value-set cardinalities, and exact
//! verification of the explicit estimates that govern them.

pub mod bounds;
pub mod census;
pub mod error;
pub mod factpat;
pub mod ff;
pub mod interval;
pub mod linalg;
pub mod mpoly;
pub mod symsys;
pub mod upoly;
pub mod valueset;
pub mod work;

pub use bounds::BoundCheck;
pub use census::{count_infinity, count_points, verify_estimate, CountReport, Ineq};
pub use error::{Error, Result};
pub use factpat::{Census, LinearFamily, RootEncoding};
pub use ff::{Elem, Field};
pub use mpoly::{MPoly, Monomial};
pub use symsys::SymSystem;
pub use upoly::{FactPattern, PolyRing, UPoly};
pub use valueset::{ChiMethod, CoeffWindow};
pub use work::Limits;

//! Exact combinatorics of weight diagrams for the Lie superalgebras
//! gl(n|n), osp(2n+t|2n) and q(m): arch diagrams, the Poincaré
//! polynomials K^{λ,ν}(z), the parity grading and extension graphs.

pub mod cli;
pub mod diagrams;
pub mod error;
pub mod extgraph;
pub mod halfint;
pub mod kpoly;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use halfint::HalfInt;

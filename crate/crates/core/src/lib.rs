//! Exact verification toolkit for the two-parameter Cremmer–Gervais
//! R-matrices, their FRT bialgebras, and the Belavin–Drinfeld Lie bialgebra
//! structures they degenerate to.

pub mod bd;
pub mod error;
pub mod laurent;
pub mod modp;
pub mod qalg;
pub mod report;
pub mod rmatrix;
pub mod tensor;

pub use error::{Error, Result};
pub use laurent::{LaurentPoly, Vars};
pub use report::{Check, CheckReport, CheckSet, Status};
pub use rmatrix::{build_cg, CgParams};
pub use tensor::SparseOperator;

//! Factorizable Lie bialgebra structures on `gl(m)` and `sl(m)` from
//! Belavin–Drinfeld data, over exact rationals.

pub mod algebra;
pub mod endo;
pub mod pipeline;
pub mod quotient;
pub mod qmatrix;
pub mod triple;

//! Quadratic algebras attached to an R-matrix and computations in them.

pub mod det;
pub mod exterior;
pub mod functionals;
pub mod graded;
pub mod linalg;
pub mod ncpoly;
pub mod presentation;

pub use det::{check_det_normality, check_det_pairings, check_det_properties};
pub use exterior::{a_sigma, lambda_normal_form, quantum_determinant, Permutation};
pub use functionals::{braiding_pair, l_functionals, psi_phi_check, Functional, FunctionalEngine, FunctionalMatrix};
pub use graded::{graded_dimension, ideal_membership, GradedDimension, Mode};
pub use ncpoly::{Alphabet, NCPolynomial};
pub use presentation::{exterior_relations, frt_relations, symmetric_relations, QuadraticPresentation};

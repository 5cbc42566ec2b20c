//! Exact computations in multidimensional Poisson vertex algebras over
//! differential polynomials, and a pipeline for classifying dispersive
//! deformations of scalar λ-brackets up to Miura equivalence.

pub mod deform;
pub mod diffalg;
pub mod lambda;
pub mod models;
pub mod par;
pub mod sampling;

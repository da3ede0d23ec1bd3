//! Exact computations with super Koszul, De Rham and Berezinian complexes,
//! Berezin determinants, and the cohomology of twisted forms on projective
//! superspace.

pub mod berezinian;
pub mod bott;
pub mod complexes;
pub mod error;
pub mod exact_linalg;
pub mod multilinear;
pub mod scalar;
pub mod super_poly;

pub use error::{Error, Result};
pub use exact_linalg::{Base, ExactMatrix, HomologySummary};
pub use multilinear::SuperDim;
pub use super_poly::{Generator, GeneratorSet, Parity, SuperMonomial, SuperPolynomial};

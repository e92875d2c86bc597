//! Exact decision procedure for homotopy commutativity of loop spaces of
//! quasitoric manifolds over products of 3-simplices, and the cohomology
//! rings of the generalized Bott manifolds `M(k,n)`.

pub mod charmatrix;
pub mod cli;
pub mod decision;
pub mod error;
pub mod family;
pub mod intmat;
pub mod polyring;
pub mod simplicial;

pub use charmatrix::{CharacteristicMatrix, EquivalenceMove, Polytope, StandardForm};
pub use decision::{decide, decide_matrix, DecisionReport, Stage, Verdict};
pub use error::{Error, Result};
pub use family::{generate_matrix, hkn_ring, FamilyParams, HknRing};
pub use intmat::IntMatrix;
pub use simplicial::SimplicialComplex;

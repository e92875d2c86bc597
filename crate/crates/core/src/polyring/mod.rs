//! Graded polynomial rings on degree-2 generators: arithmetic over ℤ and
//! ℤ/2, Steenrod squares, cohomology presentations, ranks and normal forms.

pub mod poly;
pub mod presentation;
pub mod rank;
pub mod rewrite;
pub mod sq2;

pub use poly::{Coefficient, Gf2, IntPoly, Mod2Poly, Monomial, PolyJson, Polynomial};
pub use presentation::{dj_relations, PresentationJson, RingPresentation};
pub use rank::{graded_rank, rank_table, socle_degree, truncated_poincare};
pub use rewrite::{RewriteSystem, Rule};
pub use sq2::{cartan_sq2, sq1, sq2, sq2_of_linear_product};

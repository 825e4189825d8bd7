//! Equivariant simplicial cohomology with local coefficients: Bredon-style
//! cochains on truncated G-simplicial sets, the invariant-cochain model on the
//! universal cover, and a fibration spectral sequence, all over exact rings.

pub mod bredon;
pub mod coefficients;
pub mod covering;
pub mod eilenberg;
pub mod group;
pub mod groupoid;
pub mod gspace;
pub mod homology;
pub mod orbit;
pub mod report;
pub mod schema;
pub mod serre;
pub mod simplicial;
pub mod linalg;
pub mod spectral;

pub mod mat;
pub mod ring;
pub mod snf;
pub mod solve;

pub use mat::Mat;
pub use ring::{Field, IntRing, PrimeField, RatField, Ring};
pub use snf::{det, smith_normal_form, Snf};
pub use solve::{column_space_basis, contained_in_span, extend_basis, rref, GroupShape, LinAlg};

//! Super Weil algebras: finite-dimensional supercommutative local algebras
//! `A = K ⊕ nil(A)`, presented as quotients of truncated polynomial
//! superalgebras `K[k|l]/m^s`.

mod construct;
mod element;
pub mod linalg;
pub mod monomial;
mod morphism;
mod weil;

pub use construct::{Join, TensorProduct};
pub use element::AlgebraElement;
pub use monomial::Monomial;
pub use morphism::{compose, AlgebraMorphism};
pub use weil::{SuperWeilAlgebra, MAX_AMBIENT_DIM};

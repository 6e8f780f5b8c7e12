//! Differential calculus read off from `A`-points: tangent vectors over the
//! super dual numbers, `x_A`-derivations, point-supported distributions,
//! and the transitivity isomorphism `(M_A)_{B₀} ≅ M_{A⊗B₀}`.

mod derivation;
mod distribution;
mod tangent;
mod transitivity;

pub use derivation::{Coefficients, Derivation};
pub use distribution::{functional_through_point, tautological_point, Distribution, PartialKey};
pub use tangent::{finite_difference_tangent, TangentValue, TangentVector};
pub use transitivity::{transitivity_point, TransitivityCheck, TransitivityPoint};

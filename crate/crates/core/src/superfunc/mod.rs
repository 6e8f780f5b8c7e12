//! Sections of the structure sheaf of a superdomain as parity-tracked
//! expression trees, with super-differentiation and expansion into
//! components `s = Σ_J s_J θ^J`.

mod derive;
mod domain;
mod expr;
mod func;
mod normalize;
pub mod parse;

pub use derive::derivative_expr;
pub use domain::{RegionPredicate, Section, SuperDomain};
pub use expr::{Expr, Kind, Var};
pub use func::Func;
pub use normalize::Components;
pub use parse::{parse, parse_expr, parse_with};

//! `A`-points of superdomains, their evaluation on sections, the action of
//! algebra morphisms, and superdomain morphisms acting on points.

mod morphism;
mod point;

pub use morphism::DomainMorphism;
pub use point::{eval_expr, APoint};

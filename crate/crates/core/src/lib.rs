pub mod algebra;
pub mod error;
pub mod parity;
pub mod scalar;
pub mod superfunc;
pub mod apoints;
pub mod calculus;
pub mod nattrans;
pub mod json;
pub mod notation;
pub mod testing;
pub mod selftest;
pub mod workspace;
pub mod cli;

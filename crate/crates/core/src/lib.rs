//! Finite-scale forcing: hereditarily finite sets, finite boolean algebras,
//! separative posets and their completions, generic filters built against
//! explicit dense sets, Cohen conditions, names, and both classical and
//! boolean-valued satisfaction for first-order formulas over `∈` and `=`.

pub mod boolalg;
pub mod cohen;
pub mod hfset;
pub mod laws;
pub mod logic;
pub mod names;
pub mod order;

pub use boolalg::{Element, FinBoolAlg, Subset};
pub use hfset::HfSet;

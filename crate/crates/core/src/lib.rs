//! Exact-arithmetic reasoning for Nilsson-style probabilistic logic.

pub mod bridge;
pub mod constraint;
pub mod document;
pub mod error;
pub mod formula;
pub mod intensional;
pub mod nilsson;
pub mod parser;
pub mod plp;
pub mod rational;
pub mod worlds;

pub use error::{Error, Result};
pub use formula::{equivalent, eval_world, Alphabet, Formula, ENUMERATION_CAP};
pub use nilsson::{NilssonStructure, PValue};
pub use parser::parse_formula;
pub use rational::Rational;
pub use worlds::{World, WorldSet};

//! Milnor invariants of based welded links and of 2-dimensional
//! cut-diagrams, computed through the Chen-Milnor map and the truncated
//! Magnus expansion.

pub mod arrow;
pub mod cut2d;
pub mod gauss;
pub mod milnor;
pub mod series;
pub mod word;

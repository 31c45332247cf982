//! The explicit constructions checked by the engine.

pub mod jackson;
pub mod rank_one;
pub mod reduction;
pub mod shapes;

pub mod asw_reduce;
pub mod context;
pub mod error;
pub mod milnor;
pub mod parse;
pub mod ramification;
pub mod ring;
pub mod ring_tower;
pub mod selftest;
pub mod series;
pub mod symbol;
pub mod witt;

pub use context::Context;
pub use error::{Error, Result};
pub use ring::Ring;

pub mod cayley;
pub mod error;
pub mod group;
pub mod subshift;

pub use error::{Error, GroupError, ResourceError, Result};
pub mod coloring_engine;
pub mod frozen;
pub mod periodicity;

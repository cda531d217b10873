pub mod arith;
pub mod error;
pub mod formula;
pub mod group;
pub mod harness;
pub mod kernel;
pub mod search;
pub mod set;
pub mod sumset;

pub use error::{Error, Result};
pub use group::GroupSpec;
pub use set::ElementSet;
pub use sumset::SumsetKind;

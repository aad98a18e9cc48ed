pub mod cli;
pub mod error;
pub mod lorentz;
pub mod measure;
pub mod numeric;
pub mod rearrange;
pub mod symmetrize;
pub mod transform;
pub mod tree;
pub mod witness;

pub use error::{Error, Result};

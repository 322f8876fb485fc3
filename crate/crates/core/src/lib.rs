pub mod analysis;
pub mod cli;
pub mod correlations;
pub mod error;
pub mod numerics;
pub mod ramps;
pub mod specfun;
pub mod sta;
pub mod static2b;
pub mod tdse;

pub use error::{Error, Result};

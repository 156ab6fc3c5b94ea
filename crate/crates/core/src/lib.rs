pub mod certify;
pub mod cli;
pub mod error;
pub mod numeric;
pub mod paperfns;
pub mod series;
pub mod taylor;

pub use error::{Error, Result};

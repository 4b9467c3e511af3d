pub mod chains;
pub mod cli;
pub mod coefficient_field;
pub mod defect_calculus;
pub mod error;
pub mod hahn_series;
pub mod pairval;
pub mod tower;
pub mod value_group;

pub use error::{Error, Result};

pub mod category;
pub mod cli;
pub mod error;
pub mod homcalc;
pub mod io;
pub mod lifting;
pub mod oracle;
pub mod precat;
pub mod random;
pub mod report;
pub mod resolution;
pub mod support;
pub mod theta;

pub use error::{Error, Result};

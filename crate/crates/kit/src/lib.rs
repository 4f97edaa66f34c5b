//! File formats, reports, numeric cross-checks and reproduction of worked
//! examples on top of `melnikov-core`.

pub mod cli;
pub mod error;
pub mod golden;
pub mod numeric;
pub mod report;
pub mod reproduce;
pub mod system;

pub use error::{KitError, Result};
pub use system::SystemFile;

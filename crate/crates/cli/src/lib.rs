//! Command-line front end for `disagree-core`: scenario files in, CSV and
//! JSON reports out.

pub mod commands;
pub mod error;
pub mod scenario;

pub use commands::{format_number, Units};
pub use error::{CliError, Result};
pub use scenario::{Scenario, ScenarioDocument};

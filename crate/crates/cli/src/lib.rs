//! Library side of the `modspace` command-line tool: input parsing, one
//! report per subcommand, the worked demo and the oracle self-test.

pub mod commands;
pub mod demo;
pub mod error;
pub mod problem;
pub mod selftest;
pub mod suites;

pub use error::{CliError, CliResult};

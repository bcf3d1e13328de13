//! Input parsing, orchestration and JSON reports for the `dfol` command.

pub mod input;
pub mod report;
pub mod run;

pub use input::{parse_field_file, parse_input, InputError, InputFile};
pub use report::AnalysisReport;
pub use run::{analyze, check, AnalysisConfig, CheckOutcome, Phase};

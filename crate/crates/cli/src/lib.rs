//! Batch front end: problem-file validation, task dispatch, deterministic
//! JSON reports and the bundled acceptance checks.

pub mod checks;
pub mod problem;
pub mod report;
pub mod spans;

pub use problem::{parse_problem, Options, Overrides, Problem, Task, ValidationError};
pub use report::{run_problem, to_json_string, Outcome, RunError, TOOL_VERSION};

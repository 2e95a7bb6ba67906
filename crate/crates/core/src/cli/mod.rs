//! Batch front end: JSON problem files, subcommand drivers and result
//! reports with an independent verification pass.

pub mod commands;
pub mod format;
pub mod report;

pub use commands::{
    compute_outputs, execute, execute_bytes, run_check, run_decompose, run_jnr, run_qcqp, run_sproc, verify_outputs,
    Command, DecomposeOutput, JnrOutput, QcqpOutput, RunOptions, SprocOutput,
};
pub use format::{parse_problem, parse_problem_str, to_json, MatrixEntry, ProblemFile, VectorEntry};
pub use report::{Residual, ResultFile, Status};

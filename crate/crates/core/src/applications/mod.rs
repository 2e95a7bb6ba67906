//! Constructions built on the rank-one decomposition: joint numerical range
//! points, S-procedure multipliers and exact QCQP solutions.

pub mod jnr;
pub mod qcqp;
pub mod sproc;

pub use jnr::{jnr_feasible_point, jnr_recover, jnr_solve, JnrFeasibility, JnrPoint, JnrQuery};
pub use qcqp::{find_slater_point, homogenize, qcqp_solve, QcqpCertificate, QcqpProblem, QcqpSolution, QuadraticForm};
pub use sproc::{sproc_certificate, SProcCertificate, SProcOutcome, SProcWitness};

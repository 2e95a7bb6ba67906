//! Rank-one decompositions of quaternion Hermitian PSD matrices, with an SDP
//! solver and the joint numerical range, S-procedure and QCQP built on them.

// `!(x <= tol)` is used on purpose so that NaN fails every check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decomposition;
pub mod error;
pub mod matrix;
pub mod quaternion;
pub mod random;
pub mod spectral;
pub mod sdp;
pub mod applications;
pub mod cli;

//! Exact solvers for edge clique partition problems with weights and
//! vertex annotations, together with the equivalent view as a binary
//! symmetric matrix decomposition where diagonal entries may be wildcards.
//!
//! The crate is organised around that equivalence:
//!
//! * [`model`] — core data types, the instance/solution mappings between
//!   the graph view and the matrix view, and solution verification.
//! * [`kernel`] — twin-block detection and the two reduction rules that
//!   shrink an instance to at most `4^k` vertices, plus solution lifting.
//! * [`solver`] — the fixed-parameter search: enumerate w-limited
//!   candidate basis matrices and grow a solution row by row.
//! * [`oracle`] — an independent brute-force solver for small instances,
//!   used as ground truth in tests and benchmarks.
//! * [`fpp`] — finite projective planes over prime-power orders and the
//!   derived hard split-graph instances.
//! * [`io`] — the text formats for instances, solutions, vertex mappings
//!   and incidence matrices.
//! * [`generate`] — seeded random instance generation.

pub mod fpp;
pub mod generate;
pub mod gf;
pub mod io;
pub mod kernel;
pub mod model;
pub mod oracle;
mod rank;
pub mod solver;

pub use model::{
    awecp_to_bsddw, bsddw_to_awecp, cliques_to_matrix, matrix_to_cliques, verify_awecp,
    verify_bsd, wildcard_eq, AwecpInstance, BinaryMatrix, CliquePartition, ModelError,
    WildcardEntry, WildcardMatrix,
};

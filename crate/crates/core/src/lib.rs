//! Property testers and learners for Boolean function classes.
//!
//! Modules, bottom up:
//!
//! - [`boolfn`]: function and distribution representations, JSON formats, exact distances.
//! - [`oracle`]: membership and example oracles with query ledgers, restrictions, adversaries.
//! - [`partition`]: random coordinate partitions and the block binary search.
//! - [`junta`]: the uniform junta tester, relevant-set discovery and the slice tests.
//! - [`learners`]: monotone DNF, sparse polynomial and decision-list learners.
//! - [`pipeline`]: the composed tester (relevant set, slice checks, candidate check).
//! - [`reduction`]: front ends that shrink wide DNFs and decision lists first.
//! - [`harness`]: instance generation and certification, seeded experiments, sweeps.
//!
//! Each capability has a runnable program under `examples/`; `cargo run --example junta_test`
//! is a good place to start.

pub mod boolfn;
pub mod oracle;
pub mod partition;
pub mod junta;
pub mod learners;
pub mod pipeline;
pub mod reduction;
pub mod harness;

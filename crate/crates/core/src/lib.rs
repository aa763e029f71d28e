//! A deterministic vulnerability factory and the tooling that reasons about it.
//!
//! The factory renders, for every module index `n`, a C source file carrying
//! five parameterised weakness patterns (CWE-121, 134, 190, 416 and 78). The
//! rest of the crate counts, checks and measures what it produces:
//!
//! - [`factory`]: module rendering and the eleven-entry base catalog.
//! - [`counter`]: the persistent, unbounded iteration counter.
//! - [`census`]: growth law, distinctness, CVE-assignability, enumeration and
//!   robustness to invalidation.
//! - [`model_check`]: a bounded checker refuting `AG(|V| <= C)` with a trace.
//! - [`tm`]: a small-step Turing-machine model of the generate/increment cycle.
//! - [`scanner`]: a pattern scanner that recovers `n` from rendered modules.
//! - [`abundance`]: abundance tables, exploitation exposure and saturation.
//! - [`workspace`]: on-disk layout (`vuln_modules/`, `vuln_counter.txt`) and
//!   generate/census/reset on it.
//! - [`commands`]: the JSON-producing operations behind the `vuln-factory`
//!   binary.
//!
//! Nothing in this crate compiles or executes the generated C.

pub mod abundance;
pub mod census;
pub mod commands;
pub mod counter;
mod error;
pub mod factory;
pub(crate) mod json;
pub mod model_check;
pub mod scanner;
pub mod tm;
pub mod workspace;

pub use error::{Error, Result};
pub use factory::{base_catalog, render_module, CweClass, ModuleSpec, ParamSet, VulnId, Vulnerability};

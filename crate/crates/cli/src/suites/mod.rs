//! The named verification suites.
//!
//! Each suite module exposes `default_config()` and `run(&SuiteConfig)`; the
//! latter returns case records and never aborts on a failed case. Cases run
//! on a rayon pool capped by `TRACELAB_THREADS`; the report is sorted by
//! case id afterwards, so the thread count never changes its contents.

use std::time::Instant;

use rayon::prelude::*;

use crate::config::SuiteConfig;
use crate::error::{CliError, Result};
use crate::report::{CaseRecord, SuiteReport};

mod common;

pub mod boundary_sys;
pub mod fubini;
pub mod golden;
pub mod hardy;
pub mod indicator;
pub mod interp_logconvex;
pub mod kernel_c;
pub mod mollify;
pub mod norm_equivalence;
pub mod partition;
pub mod sandwich;
pub mod sobolev_embedding;
pub mod trace_ext;
pub mod trace_hw;
pub mod vector_trace;

pub use common::TraceSetup;

/// All suite names accepted by [`run_suite`].
pub const SUITE_NAMES: &[&str] = &[
    "partition",
    "norm-equivalence",
    "sandwich",
    "sobolev-embedding",
    "hardy",
    "trace-ext",
    "trace-HW",
    "vector-trace",
    "indicator",
    "mollify",
    "boundary-sys",
    "kernel-C",
    "interp-logconvex",
    "fubini",
    "golden",
];

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "TRACELAB_THREADS";

/// Built-in configuration of a suite.
pub fn default_config(name: &str) -> Result<SuiteConfig> {
    Ok(match name {
        "partition" => partition::default_config(),
        "norm-equivalence" => norm_equivalence::default_config(),
        "sandwich" => sandwich::default_config(),
        "sobolev-embedding" => sobolev_embedding::default_config(),
        "hardy" => hardy::default_config(),
        "trace-ext" => trace_ext::default_config(),
        "trace-HW" => trace_hw::default_config(),
        "vector-trace" => vector_trace::default_config(),
        "indicator" => indicator::default_config(),
        "mollify" => mollify::default_config(),
        "boundary-sys" => boundary_sys::default_config(),
        "kernel-C" => kernel_c::default_config(),
        "interp-logconvex" => interp_logconvex::default_config(),
        "fubini" => fubini::default_config(),
        "golden" => golden::default_config(),
        other => return Err(CliError::UnknownSuite(other.to_string())),
    })
}

fn dispatch(cfg: &SuiteConfig) -> Result<Vec<CaseRecord>> {
    match cfg.suite.as_str() {
        "partition" => partition::run(cfg),
        "norm-equivalence" => norm_equivalence::run(cfg),
        "sandwich" => sandwich::run(cfg),
        "sobolev-embedding" => sobolev_embedding::run(cfg),
        "hardy" => hardy::run(cfg),
        "trace-ext" => trace_ext::run(cfg),
        "trace-HW" => trace_hw::run(cfg),
        "vector-trace" => vector_trace::run(cfg),
        "indicator" => indicator::run(cfg),
        "mollify" => mollify::run(cfg),
        "boundary-sys" => boundary_sys::run(cfg),
        "kernel-C" => kernel_c::run(cfg),
        "interp-logconvex" => interp_logconvex::run(cfg),
        "fubini" => fubini::run(cfg),
        "golden" => golden::run(cfg),
        other => Err(CliError::UnknownSuite(other.to_string())),
    }
}

/// Worker count from `TRACELAB_THREADS` (unset or invalid: rayon's default).
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&n| n > 0)
}

/// Runs a suite with an explicit worker count.
pub fn run_suite_with_threads(name: &str, cfg: &SuiteConfig, threads: Option<usize>) -> Result<SuiteReport> {
    default_config(name)?;
    if cfg.suite != name {
        return Err(CliError::Config(format!("configuration is for suite `{}`, not `{name}`", cfg.suite)));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::ThreadPool(e.to_string()))?;
    let start = Instant::now();
    let cases = pool.install(|| dispatch(cfg))?;
    Ok(SuiteReport::assemble(cfg.clone(), cases, start.elapsed().as_secs_f64()))
}

/// Runs a suite on a pool capped by `TRACELAB_THREADS`.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    run_suite_with_threads(name, cfg, thread_cap())
}

/// Evaluates `f` on every item in parallel and concatenates the records.
pub(crate) fn par_cases<T: Sync>(items: &[T], f: impl Fn(&T) -> Vec<CaseRecord> + Sync + Send) -> Vec<CaseRecord> {
    items.par_iter().flat_map_iter(f).collect()
}

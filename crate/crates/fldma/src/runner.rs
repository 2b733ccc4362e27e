use fldma_core::experiments::{TrialRecord, TrialRunner};
use rayon::prelude::*;

use crate::error::{CliError, Result};

/// Environment variable supplying the default worker count.
pub const WORKERS_ENV: &str = "FLDMA_WORKERS";

/// Runs trials on a dedicated rayon pool. Results are collected in trial
/// order, so aggregates do not depend on the number of workers.
pub struct RayonRunner {
    pool: rayon::ThreadPool,
}

impl RayonRunner {
    /// `workers = 0` lets rayon pick (one per core).
    pub fn new(workers: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| CliError::config(format!("cannot start worker pool: {e}")))?;
        Ok(Self { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl TrialRunner for RayonRunner {
    fn run_indexed(
        &self,
        count: usize,
        job: &(dyn Fn(usize) -> fldma_core::Result<TrialRecord> + Sync),
    ) -> fldma_core::Result<Vec<TrialRecord>> {
        self.pool.install(|| (0..count).into_par_iter().map(job).collect())
    }
}

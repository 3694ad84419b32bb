//! Seeded Monte Carlo harness.
//!
//! Innovations are standard normal draws (`rand_distr` 0.5 ziggurat) from a
//! ChaCha20 generator seeded with the run seed. Replication `r` reads stream
//! `r` of that generator, so every replication is reproducible on its own
//! and results do not depend on how replications are scheduled.

mod dgp;
mod sim;

pub use dgp::{generate, generate_replication, Dgp, DgpKind, Simulated, STATIONARY_BURN_IN};
pub use sim::{
    long_run_recovery, paired_comparison, quantile_estimate, simulate_critical_values,
    size_power_experiment, CritTest, CriticalValueTable, LongRunRecovery, McSummary, MeanSd,
    PairedComparison, PowerExperiment, QuantileEstimate, Tail, TestConfig, MC_LEVELS,
};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Generator for replication `replication` of a run seeded with `seed`.
pub fn replication_rng(seed: u64, replication: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(replication);
    rng
}

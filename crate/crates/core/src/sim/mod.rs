//! Seeded Monte-Carlo simulation of the notification process and an exact
//! optimal online policy for tiny instances.
//!
//! Random draws within a period happen in a fixed order: one uniform for the
//! arrival, whatever the policy draws while deciding, one notification coin
//! per volunteer (ascending), one response coin per notified active volunteer
//! (ascending), then one inactivity length per notified active volunteer
//! (ascending).

pub mod engine;
pub mod oracle;
pub mod stats;

pub use engine::{episode_rng, run_episode, EpisodeLog, PeriodRecord};
pub use oracle::{brute_force_optimal_online, ORACLE_STATE_LIMIT};
pub use stats::{empirical_active_prob, simulate, simulate_range, SimStats};

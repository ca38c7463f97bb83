//! Problem instances, inter-activity distributions, fractional solutions and
//! the shared evaluation functions.

pub mod distribution;
pub mod instance;
pub mod io;
pub mod objective;
pub mod solution;

pub use distribution::InterActivity;
pub use instance::Instance;
pub use objective::{evaluate_f, evaluate_fv, gradient};
pub use solution::{capacity_load, check_feasible, require_feasible, FractionalSolution, Violation};

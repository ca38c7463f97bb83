//! The LP benchmark and the three ex-ante fractional solutions.

pub mod benchmark;
pub mod frank_wolfe;
pub mod lp;
pub mod polytope;
pub mod select;
pub mod sequential;

pub use benchmark::{benchmark_lp, lp_objective, BenchmarkResult};
pub use frank_wolfe::{frank_wolfe_aa, frank_wolfe_aa_observed, DEFAULT_STEPS};
pub use lp::{solve_lp, LpProblem, LpSolution, LP_FEASIBILITY_TOLERANCE};
pub use polytope::{maximize_for_volunteer, maximize_linear, maximize_linear_joint};
pub use select::{select_ex_ante, Candidate, CandidateTag, ExAnte};
pub use sequential::sequential_sq;

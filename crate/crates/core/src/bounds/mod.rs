//! Canonical hard instances, the competitive-ratio upper bound, closed-form
//! reference values and the dual certificate behind the DP floor.

pub mod canonical;
pub mod closed_form;
pub mod dual;
pub mod kappa;
pub mod random;

pub use canonical::CanonicalSpec;
pub use closed_form::{closed_form_value, ClosedFormParams};
pub use dual::{verify_dual_certificate, DualCertificate};
pub use kappa::{kappa, kappa_curve, sn_lower_bound, KappaPoint, KAPPA_AT_ZERO};
pub use random::{random_instance, DistChoice, RandomShape};

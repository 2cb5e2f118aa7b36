//! Value-distribution analytics and numeric checks of the supporting
//! inequalities.

mod ford;
mod lemmas;
mod oracles;
mod report;
mod scan;
mod trend;
mod vpsi;
mod zeta;

pub use ford::{rho_reference, FordConstants, RhoValue};
pub use lemmas::{
    default_tail_cutoff, rankin_tail_bound, squarefull_reciprocal_tail, squarefull_tail_report,
    verify_eta_bounds, verify_nu_bounds, TailSum, MAX_SQUAREFULL_CUTOFF,
};
pub use oracles::{
    divisor_decomposition_audit, integrality_audit, monotonicity_audit, oracle_suite,
    psi_ordering_audit, squarefree_coincidence_audit,
};
pub use report::{DistReport, ReportRow};
pub use trend::density_trend;
pub use vpsi::{v_psi_exact, v_psi_grid};
pub use zeta::{eta_interval, zeta_interval, Interval};

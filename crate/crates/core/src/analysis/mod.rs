//! Spectrum classification, residual diagnostics and the limit analysis
//! behind the stabilization parameter.

mod classify;
mod convergence;
mod limit;
mod residual;

pub use classify::{
    classify, classify_levels, coincidence_report, ClassifiedEntry, ClassifiedSpectrum,
    CoincidencePair, CoincidenceReport, Label, LevelClassification,
};
pub use convergence::{convergence_study, ConvergenceStudy};
pub use limit::{tau_balance_residual, tau_limit_lambda, LimitElementQuantities, LimitRoot};
pub use residual::{
    nodal_propagation, second_order_coefficients, second_order_residual, supg_residuals, Component,
    GroundSpinor, HermiteField, Propagated,
};

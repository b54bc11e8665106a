//! Goodness-of-fit statistics, regressions and covariance estimators, and
//! the named validation suites built on them.

mod covariance;
mod gof;
mod regression;
mod suites;

pub use covariance::{covariance_with_jackknife, empirical_covariance, CovarianceEntry, CovarianceEstimate};
pub use gof::{
    atom_probabilities, bin_probabilities, chi_square_gof, density_gof, ks_distance, ks_distance_with_left,
    ks_two_sample, sorted, GofBin, GofReport, HistogramSpec, MIN_EXPECTED,
};
pub use regression::{linear_fit, log_log_fit, sample_variance, variance_slope, FitReport};
pub use suites::{
    run_suite, Check, Comparison, Suite, SuiteConfig, SuiteReport, Table, COVARIANCE_SE, GOF_BINS, IDENTITY_TOLERANCE,
    KS_LIMIT, MOMENT_SE, P_VALUE_FLOOR, SLOPE_TOLERANCE,
};

//! Classical q-series, theta functions, and the vector-valued input form.

pub mod classical;
pub mod phi01;
pub mod theta;
pub mod vvform;

pub use classical::{classical_series, eta_power, sigma1, theta_coset, Classical, QSeries};
pub use phi01::{phi01, phi01_components};
pub use theta::{
    theta1_product, theta1_sum, theta_translate, theta_translate_over_eta_product,
    translate_law_factor,
};
pub use vvform::{
    parse_coefficient_table, validate_form, Diagnostics, Issue, IssueKind, VectorValuedForm,
};

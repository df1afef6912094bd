//! A posteriori uniqueness certificates for computed solutions, the
//! comparison check, and the element-level bounds they rest on.

mod certify;
mod compare;
mod lemma;

pub use certify::{
    certify, certify_1d, certify_2d, certify_2d_global, element_variation, Certificate,
    CertificateKind, ElementCertificate, GlobalCertificate,
};
pub use compare::{compare_fields, ComparisonReport, DEFAULT_COMPARISON_TOL};
pub use lemma::{sign_pattern, verify_lemma_bounds, LemmaCheck, SignPattern};

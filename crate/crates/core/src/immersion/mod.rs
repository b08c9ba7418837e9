//! Immersions as certificates: an injective branch map plus pairwise edge-disjoint paths.

pub mod certificate;
pub mod solver;
pub mod target;

pub use certificate::{verify_certificate, CertPath, ImmersionCertificate, Violation};
pub use solver::{
    find_immersion, find_immersion_with_stats, find_kst_immersion, find_target_immersion, Budget,
    SearchOutcome, SearchStats,
};
pub use target::{make_target, TargetError, TargetSpec};

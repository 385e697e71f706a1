//! Sufficient criteria for regular wreath products `D wr Z_p` to be
//! `FSZ_{p^t}`, checked by brute force over tuple equations and by
//! structured linear-algebra certificates.
//!
//! A failed criterion never yields a non-FSZ verdict; it is reported as
//! inconclusive.

mod abelian;
mod centralizers;
mod certificates;
mod criterion;
mod linear;
mod tower;

pub use abelian::{abelian_bijection_certificate, AbelianBijectionCertificate, AbelianRoot};
pub use centralizers::{
    predicted_centralizer_order, verify_shifted_centralizer, CentralizerCase,
    ShiftedCentralizerCheck,
};
pub use certificates::{
    admissible_tuples, fp1_wreath_fszp_check, sp3_check, sp3_group, BranchCertificate,
    CheckOptions, IdentityCheck, StructuralCertificate,
};
pub use criterion::{
    wreath_condition_count, wreath_condition_test, CriterionFailure, CriterionOutcome,
    PreconditionCheck, WreathConditionInstance, WreathCriterionReport,
};
pub use linear::{
    linear_image_membership, power_sum_system, unshift, LinearSystemOverMixedModuli, Membership,
};
pub use tower::{sylow_tower_claim, DirectCheck, TowerClaimReport, TowerStep};

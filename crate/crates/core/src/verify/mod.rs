//! Independent verification of extensions: automorphism and extension
//! checks, partial-automorphism enumeration, a search oracle for
//! extendability, the smaller-structure check and whole campaigns.

pub mod campaign;
pub mod check;
pub mod enumerate;
pub mod oracle;
pub mod remark;

pub use campaign::{
    run_campaign, CampaignConfig, CheckKind, Failure, InstanceDescriptor, InstanceReport, InstanceSource,
    PhiSelection, VerificationReport,
};
pub use check::{verify_automorphism, verify_embedding, verify_extends, ExtensionMismatch, MapViolation};
pub use enumerate::{
    count_partial_automorphisms, enumerate_partial_automorphisms, random_partial_automorphism, reservoir_sample,
};
pub use oracle::{find_embedding, for_each_embedding, find_extending_automorphism, oracle_extendable, OracleError, DEFAULT_ORACLE_BUDGET};
pub use remark::{verify_remark, RemarkError, RemarkOptions, RemarkReport};

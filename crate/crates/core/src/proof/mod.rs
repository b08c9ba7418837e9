//! Structural facts about graphs with independence number two around a non-adjacent pair,
//! the two explicit immersion constructions they support, and an auditor that checks the
//! chain of facts on concrete graphs.

pub mod audit;
pub mod crossing;
pub mod decomposition;
pub mod extension;

pub use audit::{
    audit_proof, audit_proof_with, check_claim2, AuditError, AuditOptions, ProofAudit, Step,
    StepVerdict, Verdict,
};
pub use crossing::{claim4_construct, BlowUp, BlowUpGraph, CrossingError};
pub use decomposition::{decompose, DecomposeError, Decomposition, Split};
pub use extension::{claim1_extend, extension_witness, ExtendError, ExtensionWitness};

//! Definable sets, certified membership and a finite-depth inp-pattern
//! verifier.
//!
//! A pattern is a finite grid of cells (definable sets), one row per
//! formula. It is verified when every row is certified `k`-inconsistent (no
//! element lies in `k` cells of the row) and every path choosing one cell
//! per row has an element lying in all chosen cells. Every positive claim
//! carries a witness and every negative claim a certificate; anything that
//! cannot be settled either way is reported as unknown.

mod builders;
mod defset;
mod membership;
mod row;
mod shadow;
mod verify;

pub use builders::{
    build_free_chain_pattern, build_kb_depth2, chain_nonmembership_certificate, chain_set,
    ChainCertificate,
};
pub use defset::{DefSet, ExponentRange, GroupContext, GroupElement, Side};
pub use membership::{
    defset_membership, defset_membership_with, MemberWitness, Membership, NonMemberCert,
};
pub use row::{
    row_inconsistency_check, Disjointness, PairCertificate, Row, RowCertificate, RowCheck,
};
pub use shadow::{abelian_shadow, AbelianBox, IntRange};
pub use verify::{
    check_verdict, verify_pattern, verify_pattern_with, PathHint, PathWitness, PatternInstance,
    Refutation, Verdict, VerifyOptions, WitnessSource,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("group context mismatch: set lives in {set:?}, element in {element:?}")]
    ContextMismatch {
        set: GroupContext,
        element: GroupContext,
    },
    #[error("invalid row: {0}")]
    InvalidRow(String),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

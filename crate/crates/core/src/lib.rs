//! Weighted multi-shifts on truncated full Fock spaces.
//!
//! Words over `n` generators index an orthonormal basis `e_α`. A weight
//! sequence `μ` determines the left multi-shift `W_i e_α = μ_{g_iα} e_{g_iα}`;
//! this crate builds those operators on the levels `|α| ≤ N`, computes their
//! norms and radii exactly from the weights, and constructs similarity models,
//! point evaluations and a Cesàro functional calculus for matrix tuples.

pub mod error;
pub mod fock;
pub mod freeword;
pub mod hardy;
pub mod limits;
pub mod linalg;
pub mod model;
pub mod similarity;
pub mod symfock;
pub mod weights;

pub use error::{Error, Result};
pub use freeword::{MultiIndex, Word};
pub use linalg::C64;
pub use model::OperatorTuple;
pub use weights::{WeightFamily, WeightSequence, WeightSpec};

/// Three-valued verdict used wherever a finite scan stands in for an
/// infinite sum or supremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// Decided by a closed form or by an exactly finite sum.
    Certified,
    Convergent,
    Divergent,
    Undetermined,
}

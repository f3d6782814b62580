//! Finite-scale verification of recurrence in hyperspaces: weakly mixing
//! subshifts built from word ladders, a layered grand shift, the Hausdorff
//! hyperspace of finite sets, circle and annulus examples, a certified
//! uniformly rigid skew product, and recurrence combinatorics.

pub mod circle_systems;
pub mod combinatorics;
pub mod error;
pub mod grand_subshift;
pub mod hyperspace;
pub mod report;
pub mod rigid_skew;
pub mod wm_subshift;
pub mod words;

pub use error::{Error, Result};
pub use hyperspace::{FinitePointSet, MetricSystem};
pub use report::{Check, Num, Status, VerificationReport};
pub use words::{PrefixApprox, Word};

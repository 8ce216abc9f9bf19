//! Negativity-based entanglement measures and 1D entanglement-swapping chains.
//!
//! Dense states live in [`states`], the measures in [`measures`], covariance
//! matrices in [`gaussian`]. Chains are composed in [`swapping`], monogamy
//! checks sit in [`monogamy`] and the composition-law checker in [`groupop`].
//! [`repro`] bundles the reference fixtures used by the CLI and the acceptance
//! tests.

// `!(x <= tol)` is used on purpose so that NaN fails every check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gaussian;
pub mod groupop;
pub mod linalg;
pub mod measures;
pub mod monogamy;
mod par;
pub mod report;
pub mod repro;
pub mod states;
pub mod swapping;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, SubsystemLayout, C64};
pub use measures::{MeasureKind, MeasureReport, MeasureSpec};
pub use states::{DensityMatrix, PureState, State, TmsvsSpec};

//! Exact rational computations for Hom-Lie structures on central extensions
//! of quadratic Lie algebras.
//!
//! Every quantity is a [`linalg::Scalar`] (an arbitrary-precision rational),
//! and every identity is checked with exact equality. Linear maps are
//! [`linalg::Mat`] values in the column-action convention.

pub mod cocycle;
pub mod connection;
pub mod error;
pub mod forms;
pub mod homlie;
pub mod io;
pub mod killing;
pub mod lie;
pub mod linalg;
pub mod pipeline;
pub mod report;
pub mod zoo;

pub use cocycle::{Cocycle, ExtensionBundle};
pub use error::{Error, Result};
pub use forms::GramForm;
pub use homlie::{HKPair, HomLieStructure};
pub use lie::{BilinearProduct, StructureConstants};
pub use linalg::{Mat, Scalar, Subspace, Vector};
pub use report::{CheckReport, CheckStatus};

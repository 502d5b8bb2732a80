//! Matrices over `W_n(k)` and over Z, and filtered F-modules.

mod int_matrix;
mod matrix;
mod module;
mod random;
mod slopes;

pub use int_matrix::{IntMatrix, IntSmith};
pub use matrix::{LocalSmith, WMatrix};
pub use module::{derive_verschiebung, FilteredFModule, IsoFailure, Operator, VerifyReport, Violation};
pub use random::random_valid_module;
pub use slopes::{linearization, newton_slopes, required_precision, SlopeProfile};

//! Symplectic quantum tomography for one continuous degree of freedom.
//!
//! * [`fock`]: truncated Fock-basis states and canonical operators.
//! * [`weyl_heisenberg`]: the group WH(2), displacement operators, characteristic functions.
//! * [`tomogram`]: evaluating tomograms and checking their defining properties.
//! * [`positivity`]: Naimark Gram matrices and certification of candidate tomograms.
//! * [`reconstruction`]: inverse quantum Radon transform and purity.

pub mod error;
pub mod fock;
pub mod linalg;
pub mod positivity;
pub mod quadrature;
pub mod reconstruction;
pub mod tomogram;
pub mod weyl_heisenberg;

pub use error::{Result, TomoError};
pub use fock::{CanonicalOperators, DensityState, StateFile};
pub use weyl_heisenberg::{GroupElement, PhasePoint};

//! Ramp secret sharing of classical secrets over quantum stabilizer codes.
//!
//! A scheme is a chain `C <= C_max = C_max^{perp_s} <= C^{perp_s}` of
//! subspaces of `F_q^{2n}` together with coset representatives that encode a
//! secret in `F_q^k`. This crate computes the exact classical access
//! structure of such schemes (which share sets are qualified, forbidden, or
//! intermediate and how much they learn), their distance and threshold
//! profiles, the standard constructions, Gilbert–Varshamov existence checks,
//! and a small-dimension density-matrix simulator that verifies every
//! classification independently.

pub mod constructions;
pub mod error;
pub mod gv;
pub mod gf;
pub mod limits;
pub mod linalg;
pub mod oracle;
pub mod scheme;
pub mod symplectic;
pub mod weights;

pub use error::{Error, Result};
pub use gf::{Felt, Field, FieldSpec, GramMatrix};
pub use limits::Limits;
pub use linalg::Subspace;
pub use scheme::{AccessReport, Classification, QuantumStatus, Scheme, Status, Thresholds};
pub use symplectic::{SubsetA, SympVector};
pub use weights::DistanceProfile;

//! Tools for bipartite entanglement analysis over `C^m ⊗ C^n`.
//!
//! The crate has two arithmetic worlds that deliberately stay separate:
//!
//! - **Exact**: Gaussian-rational scalars ([`exact::ExactScalar`]) and
//!   fraction-free matrix algebra ([`exact::ExactMatrix`]) give tolerance-free
//!   rank and determinant decisions. Everything that *certifies* goes through
//!   this path.
//! - **Floating**: complex `f64` states ([`states::PureState`]) with
//!   SVD-based Schmidt decompositions and eigendecompositions of density
//!   matrices ([`mixed::DensityMatrix`]). Everything tolerance-based lives
//!   here.
//!
//! On top of these, [`subspace`] constructs a subspace of `C^m ⊗ C^n` of
//! dimension `(m−2)(n−2)` that contains no vector of Schmidt rank ≤ 2, and
//! certifies that property through exact minor enumeration plus brute-force
//! sweeps ([`oracle`]). [`mixed`] turns a certified subspace into a
//! Schmidt-number lower-bound witness for any state supported on it.

pub mod exact;
pub mod mixed;
pub mod oracle;
pub mod states;
pub mod subspace;

pub use exact::{ExactError, ExactMatrix, ExactScalar};
pub use mixed::{DensityMatrix, MixedError, SchmidtNumberWitness};
pub use oracle::{OracleError, SweepMode, SweepReport};
pub use states::{ExactState, PureState, SchmidtDecomposition, StateError};
pub use subspace::{RankCertificate, SubspaceBasis, SubspaceError};

/// Default relative tolerance for floating-point rank and support decisions.
pub const DEFAULT_TOL: f64 = 1e-10;

//! Single-round QAOA versus a one-round randomized local algorithm on
//! LocalMaxCut.
//!
//! - [`graph`]: regular graphs, named cubic fixtures, girth-constrained
//!   random generation.
//! - [`hamiltonian`]: diagonal `Z_S` Hamiltonians and the clause encoder.
//! - [`qaoa`]: analytic `⟨Z_K⟩` and `F(γ,β)`, closed forms, tree patches.
//! - [`statevector`]: dense simulation oracle.
//! - [`classical`]: Monte Carlo, exact and brute-force success
//!   probabilities for the classical algorithm.
//! - [`optimize`]: grid sweep plus Nelder–Mead for both objectives.

pub mod classical;
pub mod error;
pub mod graph;
pub mod hamiltonian;
pub mod optimize;
pub mod qaoa;
pub mod statevector;
pub mod subset;

pub use error::{LmcError, Result};
pub use graph::{Graph, NamedGraph};
pub use hamiltonian::DiagonalHamiltonian;
pub use qaoa::QaoaAngles;
pub use subset::VertexSet;

//! Process matrices, causal games and data-retrieval tasks.
//!
//! Everything is built on [`tensor::LabeledOperator`], a dense complex matrix
//! over named wires. On top of it sit process-matrix validation
//! ([`processes`]), quantum instruments in Choi form ([`instruments`]), the
//! guess-your-neighbour's-input and Bell-state data-retrieval games
//! ([`games`]), the strategy maps between those two games ([`duality`]), and
//! exact enumeration of tripartite classical protocols ([`classical`]).
//!
//! Probabilities follow the trace rule `P = Tr[W (M_A ⊗ M_B)]`, with
//! instrument operators inserted as given (no transposes).

pub mod classical;
pub mod duality;
pub mod dump;
pub mod error;
pub mod games;
pub mod instruments;
pub mod processes;
pub mod random;
pub mod reproduce;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{LabeledOperator, WireLabel};

/// Default absolute tolerance for entries, eigenvalues and probabilities.
pub const TOL: f64 = 1e-9;

//! Decision procedures for word relations defined by finite automata.

pub mod alphabet;
pub mod error;
pub mod fa;
pub mod fixtures;
pub mod format;
pub mod gadget;
pub mod graph;
pub mod omega;
pub mod omega_rec;
pub mod oracles;
pub mod recognizable;
pub mod regularity;
pub mod slender;
pub mod transducer;
pub mod verdict;
pub mod vpa;

pub use alphabet::{Alphabet, Letter, LetterId, Word};
pub use error::{Budget, Error, Result};
pub use fa::{Dfa, Label, Nfa, StateId};
pub use verdict::Verdict;

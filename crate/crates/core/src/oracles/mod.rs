//! Brute-force oracles, seeded generators and an independent
//! recognizability procedure, used to cross-check the main algorithms.

mod ccg06;
pub mod random;
mod rn;
mod separator;
mod slender;

pub use ccg06::{ccg06_recognizable, e1_complement, llex_smaller, representatives};
pub use random::{random_buchi, random_dvpa, random_lasso, random_nfa, random_parity, random_sync, random_vpa};
pub use rn::{generate_rn, rn_member, RN_STATE_FACTOR};
pub use separator::{bounded_separator, SEPARATOR_SEARCH_LIMIT};
pub use slender::brute_slender;

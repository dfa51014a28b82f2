//! Multiprong election control.
//!
//! Elections, winner rules, attack planners, an exhaustive oracle, an
//! integer-feasibility solver for few candidates, Dodgson score bounds and
//! hardness reductions from exact cover by 3-sets.

pub mod control;
pub mod election;
pub mod attack;
pub mod cli;
pub mod oracle;
pub mod reduction;
pub mod dodgson;
pub mod fpt;
pub mod format;
pub mod sample;
pub mod verify;

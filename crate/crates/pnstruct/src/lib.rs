//! Structure-theory analysis of place/transition Petri nets: reachability,
//! clusters, components, blocking markings, perpetuality and lucency.

pub mod behavior;
pub mod cli;
pub mod corpus;
pub mod gen;
pub mod io;
pub mod marking;
pub mod net;
pub mod par;
pub mod state_space;
pub mod structure;

pub use marking::Marking;
pub use net::{Node, PetriNet, RawNet};

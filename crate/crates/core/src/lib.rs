#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ac23;
pub mod color;
pub mod dynamics;
pub mod graph;
pub mod ipf;
pub mod ring;
pub mod rt;

pub use color::{Color, Coloring};
pub use dynamics::{Automaton, Lambda, RunRecord, RunSummary};
pub use graph::{MixedGraph, NodeId};
pub use ring::{RingAutomaton, RingState};

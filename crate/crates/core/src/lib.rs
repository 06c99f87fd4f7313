pub mod action;
pub mod campaign;
pub mod catalog;
pub mod closure;
pub mod coloring;
pub mod error;
pub mod group;
pub mod input;
pub mod lemmas;
pub mod perm;
pub mod stabchain;
pub mod structure;
pub mod subgroups;
pub mod witness;

pub use catalog::{construct, Constructor};
pub use error::{Error, Result};
pub use group::{PermGroup, DEFAULT_ORDER_CAP};
pub use perm::{compose, format_cycles, parse_cycles, KTuple, Perm};

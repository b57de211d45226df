pub mod constructions;
pub mod error;
pub mod factorization;
pub mod finite;
pub mod homs;
pub mod intlin;
pub mod points;
pub mod poag;
pub mod sweep;
pub mod vgroups;

pub use error::{Budget, Error, ResourceLimit, Result, Verdict};

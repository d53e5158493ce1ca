//! Twisted Heegner divisors on X₀(N), genus characters, Kudla Green
//! functions, the Weil representation and its Eisenstein series, and
//! numerical theta lifts, with drivers that check the identities relating
//! them.

pub mod cli;
pub mod error;
pub mod genus;
pub mod greens;
pub mod heegner;
pub mod lattice;
pub mod lifts;
pub mod ntheory;
pub mod series;
pub mod weilrep;

pub use error::{Error, Result};

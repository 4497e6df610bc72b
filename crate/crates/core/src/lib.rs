//! Exact formal power series toolkit for the BPS invariants of K3 surfaces.
//!
//! The crate expands the KKV product formula, runs the Gopakumar-Vafa
//! transform between Gromov-Witten potentials and BPS tables, builds the
//! stable pairs rational functions through the multiple cover formula and
//! checks the GW/pairs correspondence under `q = -e^{iu}`, all in exact
//! rational arithmetic.

pub mod algebra;
pub mod bps;
pub mod checks;
pub mod error;
pub mod kkv;
pub mod nl;
pub mod pairs;

pub use error::{Error, Result};

//! Paley graphs over GF(q): triple intersection numbers by enumeration and by
//! quadratic character sums, their link to point counts on
//! `y^2 = (x-a)(x-b)(x-c)`, K4 counts on edges, and partial additive
//! characters on the squares.
//!
//! Everything is exact integer arithmetic; bounds involving `sqrt(q)` are
//! squared into integer inequalities.

pub mod charext;
pub mod cliques;
pub mod curves;
pub mod error;
pub mod ff;
pub mod paley;
pub mod snf;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
pub use ff::{Elem, Field};
pub use paley::{Paley, Shape, TripleProfile};

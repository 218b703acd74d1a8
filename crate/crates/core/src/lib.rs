//! Weighted alternating finite automata, weighted finite tree automata and
//! polynomial automata over commutative semirings, with the translations
//! between them and exact zeroness/equivalence checking over the rationals.

pub mod error;
pub mod fixtures;
pub mod groebner;
pub mod io;
pub mod poly_automata;
pub mod polynomial;
pub mod semiring;
pub mod transforms;
pub mod trees;
pub mod wafa;
pub mod wfta;
pub mod words;

pub use error::{Error, Result};
pub use polynomial::{Classification, Exponents, Monomial, Polynomial};
pub use semiring::{Semiring, Value};
pub use trees::{Head, Position, RankedAlphabet, Term, TreeHom, WordToTreeHom};
pub use words::{word, Word, WordHom};
pub use poly_automata::Pa;
pub use wafa::Wafa;
pub use wfta::Wfta;

//! Verification of mod-2 cellular chain complexes of chord-diagram spaces.
//!
//! The crate encodes the complexes CD1, CD2 and CD3 as data and recomputes
//! their homology, kernel bases, Euler characteristics, cell counts and the
//! first page of the multiplicity filtration spectral sequence.

pub mod chc;
pub mod combinatorics;
pub mod complex;
pub mod datasets;
pub mod filtration;
pub mod gf2;

pub use chc::{parse_chains, parse_chc, serialize_chc, ChainEntry, ParseError};
pub use complex::{
    Cell, CellType, Chain, ChainComplex, ComplexError, HomologyReport, ListCheck, Violation,
};
pub use gf2::{in_span, Gf2Matrix, Gf2Vector, ShapeError};

//! Exact computations with root data of general spin groups, their Chevalley
//! groups and the unramified transfer to general linear groups.

#![allow(clippy::needless_range_loop)]

pub mod chevalley;
pub mod lattice;
pub mod root_datum;
pub mod satake;
pub mod scalar;
pub mod steinberg;
pub mod suite;
pub mod weyl;

pub use root_datum::{datum_isomorphic, DatumError, Family, Root, RootDatum, RootSystem};
pub use scalar::{ScalarError, ScalarExpr};

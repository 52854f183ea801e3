//! Exact computations for rank-distance codes in the association scheme of
//! n×n Hermitian matrices over F_{q²}.

pub mod field;
pub(crate) mod fp_linalg;
pub mod hermitian;
pub mod scheme;
pub mod distributions;
pub mod constructions;
pub mod bounds;
pub mod io;
pub mod cli;

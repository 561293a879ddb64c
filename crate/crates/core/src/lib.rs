//! Planar open book decompositions for knots and links in 3-manifolds.
//!
//! The pipeline takes a braid word, converts its closure to a pure braided
//! plat, decomposes the pure braid into standard generators, unknots the
//! knot by blow-ups in a framed surgery diagram, and reads off a planar
//! open book whose page contains the knot. A Legendrian bookkeeping layer
//! tracks (tb, rot) through stabilizations, expands rational contact
//! surgery coefficients, and computes the d3 invariant.

pub mod braid;
pub mod free;
pub mod kirby;
pub mod legendrian;
pub mod openbook;
pub mod pipeline;
pub mod plat;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("braid index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },

    #[error("braid is not pure: {0}")]
    NotPure(String),

    #[error("invalid generator indices (i={i}, j={j}, n={n}); need 1 <= i < j <= n")]
    BadGeneratorIndices { i: usize, j: usize, n: usize },

    #[error("plat error: {0}")]
    Plat(String),

    #[error("surgery diagram error: {0}")]
    Kirby(String),

    #[error("open book error: {0}")]
    OpenBook(String),

    #[error("legendrian error: {0}")]
    Legendrian(String),

    #[error("certificate failure: {0}")]
    Certificate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

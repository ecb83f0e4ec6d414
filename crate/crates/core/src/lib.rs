//! Cube packings and tilings of the discrete torus `(Z/2NZ)^n` and of its
//! continuous limit.

pub mod cli;
pub mod continuous;
pub mod error;
pub mod keller;
pub mod model;
pub mod random;
pub mod search;
pub mod space;
pub mod symmetry;

pub use error::{Error, Result};
pub use model::{
    compatible, free_positions, hole_of, is_packing, is_tiling, shares_facet, CubePosition, Hole, Packing,
    PackingStatus, TorusParams,
};
pub use symmetry::{canonical_form, CanonicalForm};

//! Exhaustive classification over the `N = 2` torus.

mod cover;
mod extremal;
mod flips;
mod holes;
mod tilings;

pub use extremal::{
    min_blocking, min_blocking_gated, min_nonextensible, min_nonextensible_gated, BlockingSet, Minimum,
    REFERENCE_F, REFERENCE_H,
};
pub use flips::{apply_flip, facet_pairs, flip_connectivity, FlipMove, FlipReport};
pub use holes::{classify_holes, hole_witness, nonextensible_packings, HoleClass};
pub use tilings::{enumerate_tilings, enumerate_tilings_with_stats, SearchStats};

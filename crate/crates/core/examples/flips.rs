//! Flips: shifting a facet-sharing pair by half a side gives another tiling.
//! Every tiling type is reached from the trivial one.
//!
//! cargo run --release --example flips

use cubepack::search::{apply_flip, facet_pairs, flip_connectivity, FlipMove};
use cubepack::{canonical_form, Packing, TorusParams};

fn main() -> cubepack::Result<()> {
    let t = Packing::trivial_tiling(TorusParams::binary(2)?);
    let (i, j, axis) = facet_pairs(&t)[0];
    let flipped = apply_flip(&FlipMove::new(t.clone(), i, j, axis)?);
    println!("flip of {} and {} along axis {axis}:", t.cubes()[i], t.cubes()[j]);
    for c in flipped.cubes() {
        print!(" {c}");
    }
    println!("\nnew type: {}", canonical_form(&flipped) != canonical_form(&t));

    for n in 2..=4 {
        let r = flip_connectivity(n)?;
        println!(
            "n = {n}: {} types, {} edges, connected {}, distances from trivial {:?}",
            r.node_count, r.edge_count, r.connected, r.distance_counts
        );
    }
    Ok(())
}

//! Holes left by non-extensible packings with 2^n - l cubes.
//!
//! cargo run --release --example holes

use cubepack::search::{classify_holes, hole_witness};

fn main() -> cubepack::Result<()> {
    for n in 2..=4 {
        for l in 1..=4usize {
            if l >= 1 << n {
                continue;
            }
            let classes = classify_holes(n, l)?;
            let sizes: Vec<usize> = classes.iter().map(|c| c.cells.len()).collect();
            println!("n = {n}, l = {l}: {} hole types, cells {sizes:?}", classes.len());
        }
    }

    let class = &classify_holes(3, 4)?[0];
    let p = hole_witness(class);
    println!("\nn = 3, l = 4: density {}, hole of {} cells", p.density(), class.cells.len());
    for c in p.cubes() {
        println!("  cube {c}");
    }
    Ok(())
}

//! Smallest non-extensible packings f(n) and smallest blocking sets h(n).
//!
//! cargo run --release --example extremal

use cubepack::free_positions;
use cubepack::search::{min_blocking, min_nonextensible};

fn main() -> cubepack::Result<()> {
    println!(" n  f(n)  h(n)");
    for n in 1..=4 {
        let f = min_nonextensible(n)?;
        let h = min_blocking(n)?;
        assert!(free_positions(&f.witness).is_empty());
        assert!(h.witness.is_blocking());
        println!("{n:>2}  {:>4}  {:>4}   ({:.1?} / {:.1?})", f.value, h.value, f.stats.elapsed, h.stats.elapsed);
    }

    let f3 = min_nonextensible(3)?;
    println!("\nnon-extensible packing with 4 cubes in dimension 3:");
    for c in f3.witness.cubes() {
        println!("  {c}");
    }
    let h4 = min_blocking(4)?;
    println!("blocking set for n = 4: {}", h4.witness.to_json());

    if let Err(e) = min_blocking(5) {
        println!("\n{e}");
    }
    Ok(())
}

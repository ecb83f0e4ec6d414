//! Tiling types of (Z/4Z)^n up to translations, axis permutations and
//! reflections.
//!
//! cargo run --release --example enumerate_tilings

use cubepack::search::enumerate_tilings_with_stats;

fn main() -> cubepack::Result<()> {
    for n in 1..=4 {
        let (types, stats) = enumerate_tilings_with_stats(n)?;
        println!("n = {n}: {:>4} types  ({} nodes, {:.2?})", types.len(), stats.nodes, stats.elapsed);
    }
    let types = enumerate_tilings_with_stats(3)?.0;
    println!("\nthe 9 types for n = 3:");
    for t in &types {
        let cubes: Vec<String> = t.representative().iter().map(|c| c.to_string()).collect();
        println!("  {}", cubes.join(" "));
    }
    match enumerate_tilings_with_stats(5) {
        Err(e) => println!("\nn = 5: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

//! Continuous tilings: positive-probability outcomes of the random process as
//! N grows, up to isomorphism.
//!
//! cargo run --release --example continuous_tilings

use cubepack::continuous::{
    c_extensible, enumerate_continuous_tilings, minimal_nonextensible, parameter_count, to_discrete,
    ContinuousPacking,
};

fn main() -> cubepack::Result<()> {
    for n in 1..=4 {
        let start = std::time::Instant::now();
        let types = enumerate_continuous_tilings(n)?;
        let counts: Vec<usize> = types.iter().map(parameter_count).collect();
        println!(
            "n = {n}: {:>2} types, parameters {}..{} ({:.1?})",
            types.len(),
            counts.iter().min().unwrap(),
            counts.iter().max().unwrap(),
            start.elapsed()
        );
    }

    let trivial = ContinuousPacking::trivial_tiling(3);
    println!("\ntrivial tiling: {trivial}");
    println!("extensible: {}", c_extensible(&trivial).is_some());
    let discrete = to_discrete(&trivial, 5)?;
    println!("as an N = 5 packing: tiling {}", discrete.is_tiling());

    let (size, types) = minimal_nonextensible(3)?;
    println!("smallest non-extensible packings for n = 3: {size} cubes, {} type(s)", types.len());
    Ok(())
}

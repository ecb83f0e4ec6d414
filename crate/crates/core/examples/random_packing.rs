//! Monte Carlo runs of the sequential random packing process.
//!
//! cargo run --release --example random_packing [trials] [seed]

use cubepack::random::{density_stats, simulate_one, SimulationConfig};
use cubepack::TorusParams;

fn main() -> cubepack::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|a| a.parse().ok()).unwrap_or(100_000);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);

    let params = TorusParams::binary(3)?;
    let p = simulate_one(&params, seed)?;
    println!("one run: {} cubes, {:?}", p.len(), p.status());

    for (n, scale) in [(1, 2), (2, 2), (3, 2), (3, 3), (4, 2)] {
        let params = TorusParams::new(n, scale)?;
        let config = SimulationConfig::new(params, trials, seed, 4)?;
        let s = density_stats(&config)?;
        println!(
            "n = {n}, N = {scale}: mean density {:.5} +- {:.5}, sizes {:?}",
            s.mean_density,
            s.standard_error(),
            s.histogram
        );
    }
    Ok(())
}

//! Exact law of the terminal packing type, checked against simulation.
//!
//! cargo run --release --example exact_distribution

use cubepack::random::{density_stats, exact_terminal_distribution, to_f64, SimulationConfig};
use cubepack::TorusParams;

fn main() -> cubepack::Result<()> {
    let params = TorusParams::binary(3)?;
    let law = exact_terminal_distribution(&params)?;
    println!("{} terminal types, total probability {}", law.len(), law.total());
    for (form, p) in law.entries() {
        println!("  {} cubes  {:>22}  = {:.6}", form.len(), p.to_string(), to_f64(p));
    }
    let p4 = law.size_probability(4);
    println!("P(4 cubes) = {p4}, expected density = {}", law.expected_density());

    let stats = density_stats(&SimulationConfig::new(params, 200_000, 5, 4)?)?;
    let freq = stats.frequency(4);
    let se = (to_f64(&p4) * (1.0 - to_f64(&p4)) / stats.trials as f64).sqrt();
    println!("simulated: {freq:.5} ({:+.2} standard errors)", (freq - to_f64(&p4)) / se);
    Ok(())
}

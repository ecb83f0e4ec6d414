//! Keller graphs: clique numbers, tilings as cliques and DIMACS files.
//!
//! cargo run --release --example keller

use cubepack::keller::{
    build_keller_graph, export_dimacs, import_dimacs, keller_clique_number, max_clique, tilings_as_cliques,
    KellerGraph, REFERENCE_OMEGA_7,
};

fn main() -> cubepack::Result<()> {
    for n in 1..=4 {
        let r = keller_clique_number(n, None, None)?;
        println!(
            "G_{n}: {} vertices, degree {}, clique number {} < {} ({} nodes)",
            1 << (2 * n),
            KellerGraph::expected_degree(n),
            r.size,
            1 << n,
            r.nodes
        );
    }
    println!("G_7 (not computed): clique number {REFERENCE_OMEGA_7}");

    for n in 2..=3 {
        let r = tilings_as_cliques(n)?;
        println!(
            "n = {n}: {} maximum cliques of the compatibility graph, all tilings: {}, {} types, Keller cliques: {}",
            r.compatibility_cliques,
            r.compatibility_cliques == r.tiling_cliques,
            r.clique_types,
            r.keller_cliques
        );
    }

    let g = build_keller_graph(3)?;
    let mut text = Vec::new();
    export_dimacs(g.graph(), &mut text)?;
    let back = import_dimacs(&text[..])?;
    println!("DIMACS round trip of G_3: {} ({} bytes)", &back == g.graph(), text.len());

    let budgeted = max_clique(build_keller_graph(4)?.graph(), Some(50), Some(1))?;
    println!("G_4 with a 50-node budget: size {} complete {}", budgeted.size, budgeted.complete);
    Ok(())
}

//! One-factorizations of K_{2m} and the non-extensible continuous packings
//! they give in dimension 2m - 1.
//!
//! cargo run --release --example one_factorizations

use cubepack::continuous::{
    c_compatible, c_extensible, enumerate_one_factorizations, packing_from_one_factorization, parameter_count,
};

fn main() -> cubepack::Result<()> {
    for m in 2..=4 {
        let classes = enumerate_one_factorizations(m)?;
        println!("K_{}: {} one-factorization(s)", 2 * m, classes.len());
        for f in &classes {
            let p = packing_from_one_factorization(f)?;
            let n = p.dim();
            let pairwise = p.cubes().iter().enumerate().all(|(i, a)| {
                p.cubes()[i + 1..].iter().all(|b| c_compatible(a, b).unwrap())
            });
            println!(
                "  n = {n}: {} cubes, {} parameters (n(n+1)/2 = {}), compatible {pairwise}, extensible {}",
                p.len(),
                parameter_count(&p),
                n * (n + 1) / 2,
                c_extensible(&p).is_some()
            );
        }
    }
    let k4 = &enumerate_one_factorizations(2)?[0];
    println!("\nK_4: {}", k4.to_json());
    println!("packing: {}", packing_from_one_factorization(k4)?);
    Ok(())
}

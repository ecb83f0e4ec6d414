//! The position model: compatibility, shared facets, packing status and
//! canonical forms.
//!
//! cargo run --example positions

use cubepack::{canonical_form, compatible, free_positions, hole_of, shares_facet, CubePosition, Packing, TorusParams};

fn main() -> cubepack::Result<()> {
    let params = TorusParams::new(3, 2)?;
    let pos = |c: [u32; 3]| CubePosition::new(c.to_vec(), &params);

    let (a, b, c) = (pos([0, 0, 0])?, pos([2, 0, 0])?, pos([1, 1, 1])?);
    println!("{a} ~ {b}: {}", compatible(&a, &b, &params)?);
    println!("{a} ~ {c}: {}", compatible(&a, &c, &params)?);
    println!("facet of {a} and {b}: axis {:?}", shares_facet(&a, &b, &params)?);

    let single = Packing::new(params, vec![a.clone()])?;
    println!("one cube leaves {} free positions", free_positions(&single).len());

    let trivial = Packing::trivial_tiling(params);
    println!("trivial tiling: {} cubes, {:?}", trivial.len(), trivial.status());
    let holed = trivial.without_cube(0);
    println!("minus one cube: {:?}, hole of {} cells", holed.status(), hole_of(&holed).len());

    // translates and reflections share a canonical form
    let shifted = Packing::new(params, trivial.cubes().iter().map(|c| {
        CubePosition::new(c.coords().iter().map(|x| (x + 1) % 4).collect(), &params).unwrap()
    }).collect())?;
    assert_eq!(canonical_form(&shifted), canonical_form(&trivial));
    println!("canonical form: {}", canonical_form(&trivial).to_json());

    // other scales work the same way
    let tiling = Packing::from_json(r#"{"n":2,"N":3,"cubes":[[0,0],[0,3],[3,0],[3,3]]}"#)?;
    println!("N = 3 tiling: {} (density {})", tiling.is_tiling(), tiling.density());
    Ok(())
}

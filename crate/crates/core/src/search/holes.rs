use std::collections::BTreeMap;

use rayon::prelude::*;

use super::cover::{CoverSearch, Goal};
use crate::error::{Error, Result};
use crate::model::{CubePosition, Packing};
use crate::space::PosSet;
use crate::symmetry::{shared_space, CanonicalForm};

/// One hole type: the canonical cell set and the packing types realizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoleClass {
    /// Canonical representative of the uncovered cells.
    pub cells: Vec<CubePosition>,
    /// Canonical forms of the non-extensible packings with this hole.
    pub packings: Vec<CanonicalForm>,
}

/// Holes of non-extensible packings with `2^n - l` cubes, up to symmetry.
pub fn classify_holes(n: usize, l: usize) -> Result<Vec<HoleClass>> {
    if n == 0 {
        return Err(Error::usage("dimension must be at least 1"));
    }
    if n > 4 {
        return Err(Error::capacity(format!("hole classification supports n <= 4 (n = {n} requested)")));
    }
    if l == 0 || l >= 1 << n {
        return Err(Error::usage(format!("l must lie in 1..{} for n = {n}", 1usize << n)));
    }
    Ok(crate::with_width!(n, holes(n, l)))
}

/// Every non-extensible packing with exactly `size` cubes, up to symmetry.
pub fn nonextensible_packings(n: usize, size: usize) -> Result<Vec<CanonicalForm>> {
    if n == 0 || n > 4 {
        return Err(Error::capacity(format!("non-extensible enumeration supports 1 <= n <= 4 (n = {n})")));
    }
    if size == 0 || size > 1 << n {
        return Err(Error::usage(format!("size must lie in 1..={}", 1usize << n)));
    }
    Ok(crate::with_width!(n, nonextensible(n, size)))
}

fn nonextensible<const W: usize>(n: usize, size: usize) -> Vec<CanonicalForm> {
    let space = shared_space::<W>(n);
    let hole_cells = ((1usize << n) - size) << n;
    // the origin may be assumed in the packing; split on its first partner
    let starts: Vec<usize> = space.compat(0).iter().collect();
    let mut found: Vec<PosSet<W>> = if size == 1 {
        let mut s = CoverSearch::new(space, true, 1, Goal::All).with_hole_cells(hole_cells);
        s.run(&[0]);
        s.found.iter().map(|f| space.canonical(f)).collect()
    } else {
        starts
            .par_iter()
            .enumerate()
            .flat_map_iter(|(i, &second)| {
                // sets containing an earlier partner were handled by that branch
                let mut search = CoverSearch::new(space, true, size, Goal::All).with_hole_cells(hole_cells);
                search.exclude(starts[..i].iter().copied());
                search.run(&[0, second]);
                search.found.into_iter().map(|f| space.canonical(&f)).collect::<Vec<_>>()
            })
            .collect()
    };
    found.sort_by(cmp_sets);
    found.dedup();
    found
        .iter()
        .map(|s| CanonicalForm::from_sorted(space.params(), s.iter().map(|p| space.to_position(p)).collect()))
        .collect()
}

fn holes<const W: usize>(n: usize, l: usize) -> Vec<HoleClass> {
    let space = shared_space::<W>(n);
    let packings = nonextensible::<W>(n, (1usize << n) - l);
    let mut classes: BTreeMap<Vec<CubePosition>, Vec<CanonicalForm>> = BTreeMap::new();
    for form in packings {
        let set = PosSet::<W>::from_iter(form.representative().iter().map(|c| space.from_position(c)));
        let cover = set.iter().fold(PosSet::EMPTY, |acc, p| acc.or(space.footprint(p)));
        let hole: Vec<usize> = space.all().and_not(&cover).iter().collect();
        let canon = space.canonical(&hole);
        let cells = canon.iter().map(|c| space.to_position(c)).collect();
        classes.entry(cells).or_default().push(form);
    }
    classes.into_iter().map(|(cells, packings)| HoleClass { cells, packings }).collect()
}

fn cmp_sets<const W: usize>(a: &PosSet<W>, b: &PosSet<W>) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    if a == b {
        Ordering::Equal
    } else if a.lex_less(b) {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Packing behind a hole class, for convenience.
pub fn hole_witness(class: &HoleClass) -> Packing {
    class.packings[0].to_packing()
}

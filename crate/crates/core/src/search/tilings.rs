use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::space::{PosSet, Space};
use crate::symmetry::{shared_space, CanonicalForm};

/// Counters reported by the exhaustive searches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed: Duration,
}

/// All tiling types of `(Z/4Z)^n` up to symmetry, sorted.
///
/// Orderly generation: cubes are added in increasing order and a branch is
/// kept only while the partial set is the smallest member of its orbit. The
/// smallest member of an orbit always contains the origin, and removing the
/// largest element of a smallest member leaves a smallest member, so every
/// type is produced exactly once.
pub fn enumerate_tilings(n: usize) -> Result<Vec<CanonicalForm>> {
    enumerate_tilings_with_stats(n).map(|(t, _)| t)
}

pub fn enumerate_tilings_with_stats(n: usize) -> Result<(Vec<CanonicalForm>, SearchStats)> {
    if n == 0 {
        return Err(Error::usage("dimension must be at least 1"));
    }
    if n >= 5 {
        return Err(Error::capacity(format!(
            "tiling enumeration supports n <= 4; dimension 5 already has 899,710,227 types (n = {n} requested)"
        )));
    }
    let start = Instant::now();
    let (forms, nodes) = crate::with_width!(n, orderly_tilings(n));
    Ok((forms, SearchStats { nodes, elapsed: start.elapsed() }))
}

fn orderly_tilings<const W: usize>(n: usize) -> (Vec<CanonicalForm>, u64) {
    let space = shared_space::<W>(n);
    let target = 1usize << n;
    let root = vec![0usize];
    let root_set = PosSet::from_iter([0]);
    let root_free = space.compat(0).and(&PosSet::above(0));
    let root_cover = *space.footprint(0);
    if target == 1 {
        unreachable!("n >= 1 gives at least two cubes");
    }
    let children: Vec<usize> = root_free.iter().collect();
    let results: Vec<(Vec<PosSet<W>>, u64)> = children
        .par_iter()
        .map(|&x| {
            let mut out = Vec::new();
            let mut nodes = 0;
            let mut elems = root.clone();
            extend(space, target, &mut elems, root_set, root_free, root_cover, x, &mut out, &mut nodes);
            (out, nodes)
        })
        .collect();
    let mut nodes = 1;
    let mut sets = Vec::new();
    for (s, k) in results {
        sets.extend(s);
        nodes += k;
    }
    sets.sort_by(|a, b| if a.lex_less(b) { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater });
    let forms = sets
        .iter()
        .map(|s| CanonicalForm::from_sorted(space.params(), s.iter().map(|p| space.to_position(p)).collect()))
        .collect();
    (forms, nodes)
}

/// Try adding `x` to the canonical partial tiling `elems`; recurse if the
/// result is canonical and can still be completed with larger positions.
#[allow(clippy::too_many_arguments)]
fn extend<const W: usize>(
    space: &Space<W>,
    target: usize,
    elems: &mut Vec<usize>,
    set: PosSet<W>,
    free: PosSet<W>,
    cover: PosSet<W>,
    x: usize,
    out: &mut Vec<PosSet<W>>,
    nodes: &mut u64,
) {
    let free = free.and(space.compat(x)).and(&PosSet::above(x));
    let cover = cover.or(space.footprint(x));
    let remaining = target - elems.len() - 1;
    if free.len() < remaining {
        return;
    }
    if remaining > 0 {
        let reach = free.iter().fold(cover, |acc, q| acc.or(space.footprint(q)));
        if reach != space.all() {
            return;
        }
    }
    let mut set = set;
    set.insert(x);
    elems.push(x);
    *nodes += 1;
    if space.is_canonical(elems, &set) {
        if remaining == 0 {
            out.push(set);
        } else {
            for y in free.iter() {
                extend(space, target, elems, set, free, cover, y, out, nodes);
            }
        }
    }
    elems.pop();
}

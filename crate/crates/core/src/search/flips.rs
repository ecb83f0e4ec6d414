use std::collections::{BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use super::tilings::enumerate_tilings;
use crate::error::{Error, Result};
use crate::model::{shares_facet, CubePosition, Packing};
use crate::symmetry::{canonical_form, CanonicalForm};

/// Shift of a facet-sharing pair of a tiling by half a cube side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipMove {
    tiling: Packing,
    pair: (usize, usize),
    axis: usize,
}

impl FlipMove {
    pub fn new(tiling: Packing, first: usize, second: usize, axis: usize) -> Result<Self> {
        if tiling.params().scale() != 2 {
            return Err(Error::usage("flips are defined on the N = 2 torus"));
        }
        if !tiling.is_tiling() {
            return Err(Error::usage("flips apply to tilings only"));
        }
        let cubes = tiling.cubes();
        if first >= cubes.len() || second >= cubes.len() || first == second {
            return Err(Error::usage(format!("invalid cube pair ({first}, {second})")));
        }
        if shares_facet(&cubes[first], &cubes[second], tiling.params())? != Some(axis) {
            return Err(Error::usage(format!(
                "cubes {} and {} do not share a facet along axis {axis}",
                cubes[first], cubes[second]
            )));
        }
        Ok(FlipMove { tiling, pair: (first, second), axis })
    }

    pub fn tiling(&self) -> &Packing {
        &self.tiling
    }

    pub fn pair(&self) -> (usize, usize) {
        self.pair
    }

    pub fn axis(&self) -> usize {
        self.axis
    }
}

/// Shifts both cubes of the pair by `+1` along the axis. The pair fills an
/// axis column, so the result is again a tiling.
pub fn apply_flip(mv: &FlipMove) -> Packing {
    let params = *mv.tiling.params();
    let side = params.side();
    let cubes = mv
        .tiling
        .cubes()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i == mv.pair.0 || i == mv.pair.1 {
                let mut coords = c.coords().to_vec();
                coords[mv.axis] = (coords[mv.axis] + 1) % side;
                CubePosition::new(coords, &params).expect("coordinate in range")
            } else {
                c.clone()
            }
        })
        .collect();
    Packing::new(params, cubes).expect("a shifted column keeps the tiling")
}

/// Every facet-sharing pair `(i, j, axis)` with `i < j`.
pub fn facet_pairs(p: &Packing) -> Vec<(usize, usize, usize)> {
    let cubes = p.cubes();
    let mut out = Vec::new();
    for i in 0..cubes.len() {
        for j in i + 1..cubes.len() {
            if let Ok(Some(axis)) = shares_facet(&cubes[i], &cubes[j], p.params()) {
                out.push((i, j, axis));
            }
        }
    }
    out
}

/// Breadth-first search over the flip graph on tiling types.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlipReport {
    pub node_count: usize,
    pub edge_count: usize,
    pub connected: bool,
    /// Largest distance from the trivial type (over reached types).
    pub eccentricity: usize,
    /// Number of types at each distance from the trivial type.
    pub distance_counts: Vec<usize>,
    /// Every edge has its reverse.
    pub symmetric: bool,
}

pub fn flip_connectivity(n: usize) -> Result<FlipReport> {
    let types = enumerate_tilings(n)?;
    let index: HashMap<&CanonicalForm, usize> = types.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let neighbors: Vec<BTreeSet<usize>> = types
        .par_iter()
        .map(|t| {
            let tiling = t.to_packing();
            facet_pairs(&tiling)
                .into_iter()
                .map(|(i, j, axis)| {
                    let mv = FlipMove::new(tiling.clone(), i, j, axis).expect("pair shares a facet");
                    let form = canonical_form(&apply_flip(&mv));
                    *index.get(&form).expect("flip of a tiling is an enumerated type")
                })
                .collect()
        })
        .collect();
    let edges: BTreeSet<(usize, usize)> = neighbors
        .iter()
        .enumerate()
        .flat_map(|(a, ns)| ns.iter().filter(move |&&b| b != a).map(move |&b| (a.min(b), a.max(b))))
        .collect();
    let symmetric = neighbors.iter().enumerate().all(|(a, ns)| ns.iter().all(|&b| neighbors[b].contains(&a)));

    let trivial = canonical_form(&Packing::trivial_tiling(crate::model::TorusParams::binary(n)?));
    let start = index[&trivial];
    let mut dist = vec![usize::MAX; types.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(a) = queue.pop_front() {
        for &b in &neighbors[a] {
            if dist[b] == usize::MAX {
                dist[b] = dist[a] + 1;
                queue.push_back(b);
            }
        }
    }
    let reached: Vec<usize> = dist.iter().copied().filter(|&d| d != usize::MAX).collect();
    let eccentricity = reached.iter().copied().max().unwrap_or(0);
    let mut distance_counts = vec![0; eccentricity + 1];
    for d in &reached {
        distance_counts[*d] += 1;
    }
    Ok(FlipReport {
        node_count: types.len(),
        edge_count: edges.len(),
        connected: reached.len() == types.len(),
        eccentricity,
        distance_counts,
        symmetric,
    })
}

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::cover::{CoverSearch, Goal};
use super::SearchStats;
use crate::error::{Error, Result};
use crate::model::{CubePosition, Packing, PackingJson, TorusParams};
use crate::symmetry::shared_space;

/// Published `f(n)` for the gated dimensions.
pub const REFERENCE_F: [(usize, usize); 2] = [(5, 12), (6, 16)];
/// Published `h(n)` for the gated dimensions.
pub const REFERENCE_H: [(usize, usize); 2] = [(5, 10), (6, 15)];

/// Cube positions that may overlap, with no duplicates; blocking when no
/// further cube is compatible with all of them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockingSet {
    params: TorusParams,
    cubes: Vec<CubePosition>,
}

impl BlockingSet {
    pub fn new(params: TorusParams, mut cubes: Vec<CubePosition>) -> Result<Self> {
        for c in &cubes {
            CubePosition::new(c.coords().to_vec(), &params)?;
        }
        cubes.sort();
        if let Some(w) = cubes.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidPacking(format!("duplicate position {}", w[0])));
        }
        Ok(BlockingSet { params, cubes })
    }

    pub fn params(&self) -> &TorusParams {
        &self.params
    }

    pub fn cubes(&self) -> &[CubePosition] {
        &self.cubes
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    /// No position is compatible with every member.
    pub fn is_blocking(&self) -> bool {
        let (side, scale) = (self.params.side(), self.params.scale());
        self.params.positions().all(|q| {
            self.cubes
                .iter()
                .any(|c| !q.coords().iter().zip(c.coords()).any(|(&a, &b)| (a + side - b) % side == scale))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("blocking set serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Serialize for BlockingSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PackingJson {
            n: self.params.dim(),
            scale: self.params.scale(),
            cubes: self.cubes.iter().map(|c| c.coords().to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlockingSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PackingJson::deserialize(d)?;
        let params = TorusParams::new(raw.n, raw.scale).map_err(D::Error::custom)?;
        let cubes = raw.cubes.into_iter().map(CubePosition::from_raw).collect();
        BlockingSet::new(params, cubes).map_err(D::Error::custom)
    }
}

/// A minimum together with one witness.
#[derive(Clone, Debug)]
pub struct Minimum<T> {
    pub value: usize,
    pub witness: T,
    pub stats: SearchStats,
}

fn gate(n: usize, allow_long: bool, what: &str, reference: &[(usize, usize)]) -> Result<()> {
    if n == 0 {
        return Err(Error::usage("dimension must be at least 1"));
    }
    if n <= 4 {
        return Ok(());
    }
    if n <= 6 && allow_long {
        return Ok(());
    }
    let known = reference
        .iter()
        .find(|(d, _)| *d == n)
        .map(|(_, v)| format!(" (published value {what}({n}) = {v})"))
        .unwrap_or_default();
    if n <= 6 {
        Err(Error::capacity(format!("{what}({n}) is a long-running search; pass --allow-long{known}")))
    } else {
        Err(Error::capacity(format!("{what}({n}) is beyond the supported dimensions (n <= 6){known}")))
    }
}

/// `f(n)`: the fewest cubes in a non-extensible packing, with a witness.
pub fn min_nonextensible(n: usize) -> Result<Minimum<Packing>> {
    min_nonextensible_gated(n, false)
}

pub fn min_nonextensible_gated(n: usize, allow_long: bool) -> Result<Minimum<Packing>> {
    gate(n, allow_long, "f", &REFERENCE_F)?;
    let start = Instant::now();
    let (value, witness, nodes) = crate::with_width!(n, minimum(n, true));
    let params = TorusParams::binary(n)?;
    let cubes = witness.iter().map(|&p| CubePosition::from_raw(params.coords_of(p))).collect();
    let witness = Packing::new(params, cubes)?;
    Ok(Minimum { value, witness, stats: SearchStats { nodes, elapsed: start.elapsed() } })
}

/// `h(n)`: the fewest positions, overlaps allowed, leaving no room for a cube.
pub fn min_blocking(n: usize) -> Result<Minimum<BlockingSet>> {
    min_blocking_gated(n, false)
}

pub fn min_blocking_gated(n: usize, allow_long: bool) -> Result<Minimum<BlockingSet>> {
    gate(n, allow_long, "h", &REFERENCE_H)?;
    let start = Instant::now();
    let (value, witness, nodes) = crate::with_width!(n, minimum(n, false));
    let params = TorusParams::binary(n)?;
    let cubes = witness.iter().map(|&p| CubePosition::from_raw(params.coords_of(p))).collect();
    let witness = BlockingSet::new(params, cubes)?;
    Ok(Minimum { value, witness, stats: SearchStats { nodes, elapsed: start.elapsed() } })
}

/// Iterative deepening on the size; every nonempty set can be translated to
/// contain the origin.
fn minimum<const W: usize>(n: usize, packing: bool) -> (usize, Vec<usize>, u64) {
    let space = shared_space::<W>(n);
    let mut nodes = 0;
    for k in 1..=1usize << n {
        let mut search = CoverSearch::new(space, packing, k, Goal::First);
        if !packing {
            search = search.with_dominance();
        }
        let hit = search.run(&[0]);
        nodes += search.nodes;
        if hit {
            let mut w = search.found.pop().expect("hit records a witness");
            w.sort_unstable();
            return (k, w, nodes);
        }
    }
    unreachable!("the trivial tiling is a non-extensible packing")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::free_positions;

    #[test]
    fn small_dimensions() {
        let f1 = min_nonextensible(1).unwrap();
        assert_eq!(f1.value, 2);
        let h1 = min_blocking(1).unwrap();
        assert_eq!(h1.value, 2);
        let f2 = min_nonextensible(2).unwrap();
        assert_eq!(f2.value, 4);
        assert!(free_positions(&f2.witness).is_empty());
        let h2 = min_blocking(2).unwrap();
        assert_eq!(h2.value, 3);
        assert!(h2.witness.is_blocking());
    }

    #[test]
    fn gating() {
        assert!(matches!(min_nonextensible(5), Err(Error::Capacity(_))));
        let msg = min_blocking(5).unwrap_err().to_string();
        assert!(msg.contains("--allow-long") && msg.contains("h(5) = 10"), "{msg}");
        assert!(matches!(min_blocking_gated(7, true), Err(Error::Capacity(_))));
    }

    #[test]
    fn blocking_set_validation() {
        let params = TorusParams::binary(2).unwrap();
        let o = CubePosition::origin(&params);
        assert!(BlockingSet::new(params, vec![o.clone(), o.clone()]).is_err());
        let single = BlockingSet::new(params, vec![o]).unwrap();
        assert!(!single.is_blocking());
        let text = single.to_json();
        assert_eq!(BlockingSet::from_json(&text).unwrap(), single);
    }
}

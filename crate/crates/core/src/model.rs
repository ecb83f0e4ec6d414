//! The discrete position model on the torus `(Z/2NZ)^n`.
//!
//! A cube of side `N` sits at an integer position `v`; it covers the cells
//! `v + {0, .., N-1}^n` (coordinates taken modulo `2N`). Two cubes have
//! disjoint interiors exactly when some coordinate offset equals `N`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimension `n` and scale `N` of the torus `(Z/2NZ)^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TorusParams {
    n: usize,
    #[serde(rename = "N")]
    scale: u32,
}

impl TorusParams {
    pub fn new(n: usize, scale: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::usage("dimension n must be at least 1"));
        }
        if scale < 2 {
            return Err(Error::usage("scale N must be at least 2"));
        }
        if n > 16 {
            return Err(Error::capacity(format!("dimension {n} exceeds the supported maximum of 16")));
        }
        Ok(TorusParams { n, scale })
    }

    /// The default class with `N = 2`.
    pub fn binary(n: usize) -> Result<Self> {
        Self::new(n, 2)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Side length `2N` of the torus.
    pub fn side(&self) -> u32 {
        2 * self.scale
    }

    /// Number of candidate positions `(2N)^n`, or `None` on overflow.
    pub fn position_count(&self) -> Option<u64> {
        u64::from(self.side()).checked_pow(self.n as u32)
    }

    /// Cells covered by one cube, `N^n`.
    pub fn cube_volume(&self) -> Option<u64> {
        u64::from(self.scale).checked_pow(self.n as u32)
    }

    /// Volume bound on the number of cubes in a packing.
    pub fn max_cubes(&self) -> u64 {
        1u64 << self.n
    }

    pub(crate) fn position_count_checked(&self, limit: u64) -> Result<usize> {
        match self.position_count() {
            Some(c) if c <= limit => Ok(c as usize),
            _ => Err(Error::capacity(format!(
                "torus (Z/{}Z)^{} has more than {limit} positions",
                self.side(),
                self.n
            ))),
        }
    }

    /// Linear index of a coordinate vector, lexicographic with the first
    /// coordinate most significant.
    pub fn index_of(&self, coords: &[u32]) -> usize {
        let side = self.side() as usize;
        coords.iter().fold(0usize, |acc, &c| acc * side + c as usize)
    }

    pub fn coords_of(&self, mut index: usize) -> Vec<u32> {
        let side = self.side() as usize;
        let mut coords = vec![0u32; self.n];
        for c in coords.iter_mut().rev() {
            *c = (index % side) as u32;
            index /= side;
        }
        coords
    }

    /// All positions in lexicographic order. Panics if the torus is too large
    /// to enumerate in memory; callers check capacity first.
    pub fn positions(&self) -> impl Iterator<Item = CubePosition> + '_ {
        let count = self.position_count().expect("position count overflow") as usize;
        (0..count).map(move |i| CubePosition(self.coords_of(i)))
    }

    fn check(&self, v: &CubePosition) -> Result<()> {
        if v.0.len() != self.n {
            return Err(Error::usage(format!(
                "position has {} coordinates, expected {}",
                v.0.len(),
                self.n
            )));
        }
        if let Some(c) = v.0.iter().find(|&&c| c >= self.side()) {
            return Err(Error::usage(format!("coordinate {c} outside [0, {})", self.side())));
        }
        Ok(())
    }
}

/// One translation class of a cube: a vector of residues modulo `2N`.
///
/// The derived ordering is lexicographic on coordinates, which is the
/// total order used for canonical forms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CubePosition(Vec<u32>);

impl CubePosition {
    pub fn new(coords: Vec<u32>, params: &TorusParams) -> Result<Self> {
        let v = CubePosition(coords);
        params.check(&v)?;
        Ok(v)
    }

    pub(crate) fn from_raw(coords: Vec<u32>) -> Self {
        CubePosition(coords)
    }

    pub fn origin(params: &TorusParams) -> Self {
        CubePosition(vec![0; params.dim()])
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for CubePosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn compatible_unchecked(v: &[u32], w: &[u32], side: u32, scale: u32) -> bool {
    v.iter().zip(w).any(|(&a, &b)| (a + side - b) % side == scale)
}

/// Whether the cubes at `v` and `w` have disjoint interiors.
pub fn compatible(v: &CubePosition, w: &CubePosition, params: &TorusParams) -> Result<bool> {
    params.check(v)?;
    params.check(w)?;
    Ok(compatible_unchecked(&v.0, &w.0, params.side(), params.scale()))
}

/// The axis along which `v` and `w` share a facet, if any.
pub fn shares_facet(v: &CubePosition, w: &CubePosition, params: &TorusParams) -> Result<Option<usize>> {
    params.check(v)?;
    params.check(w)?;
    let side = params.side();
    let mut axis = None;
    for (i, (&a, &b)) in v.0.iter().zip(&w.0).enumerate() {
        if a == b {
            continue;
        }
        if axis.is_some() || (a + side - b) % side != params.scale() {
            return Ok(None);
        }
        axis = Some(i);
    }
    Ok(axis)
}

/// Pairwise compatible and free of duplicates.
pub fn is_packing(cubes: &[CubePosition], params: &TorusParams) -> bool {
    if cubes.iter().any(|c| params.check(c).is_err()) {
        return false;
    }
    let (side, scale) = (params.side(), params.scale());
    cubes.iter().enumerate().all(|(i, a)| {
        cubes[i + 1..]
            .iter()
            .all(|b| compatible_unchecked(&a.0, &b.0, side, scale))
    })
}

pub fn is_tiling(cubes: &[CubePosition], params: &TorusParams) -> bool {
    cubes.len() as u64 == params.max_cubes() && is_packing(cubes, params)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PackingStatus {
    Tiling,
    Extensible,
    NonExtensible,
}

/// A finite set of pairwise compatible cube positions, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Packing {
    params: TorusParams,
    cubes: Vec<CubePosition>,
}

impl Packing {
    pub fn new(params: TorusParams, mut cubes: Vec<CubePosition>) -> Result<Self> {
        for c in &cubes {
            params.check(c)?;
        }
        cubes.sort();
        if let Some(w) = cubes.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidPacking(format!("duplicate cube at {}", w[0])));
        }
        if !is_packing(&cubes, &params) {
            return Err(Error::InvalidPacking("two cubes overlap".into()));
        }
        Ok(Packing { params, cubes })
    }

    /// Internal constructor for cube lists already known to be valid.
    pub(crate) fn from_sorted_unchecked(params: TorusParams, cubes: Vec<CubePosition>) -> Self {
        debug_assert!(cubes.windows(2).all(|w| w[0] < w[1]));
        Packing { params, cubes }
    }

    pub fn empty(params: TorusParams) -> Self {
        Packing { params, cubes: Vec::new() }
    }

    /// The trivial tiling `{0, N}^n`.
    pub fn trivial_tiling(params: TorusParams) -> Self {
        let n = params.dim();
        let cubes = (0..1usize << n)
            .map(|mask| {
                CubePosition(
                    (0..n)
                        .map(|i| if mask >> (n - 1 - i) & 1 == 1 { params.scale() } else { 0 })
                        .collect(),
                )
            })
            .collect();
        Packing { params, cubes }
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

    pub fn is_tiling(&self) -> bool {
        self.cubes.len() as u64 == self.params.max_cubes()
    }

    /// Fraction of the torus covered, `|cubes| / 2^n`.
    pub fn density(&self) -> f64 {
        self.cubes.len() as f64 / self.params.max_cubes() as f64
    }

    pub fn status(&self) -> PackingStatus {
        if self.is_tiling() {
            PackingStatus::Tiling
        } else if free_positions(self).is_empty() {
            PackingStatus::NonExtensible
        } else {
            PackingStatus::Extensible
        }
    }

    /// Adds a cube, failing if it is not compatible with the packing.
    pub fn with_cube(&self, cube: CubePosition) -> Result<Self> {
        let mut cubes = self.cubes.clone();
        cubes.push(cube);
        Packing::new(self.params, cubes)
    }

    pub fn without_cube(&self, index: usize) -> Self {
        let mut cubes = self.cubes.clone();
        cubes.remove(index);
        Packing { params: self.params, cubes }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PackingJson::from(self)).expect("packing serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PackingJson = serde_json::from_str(text)?;
        raw.try_into()
    }
}

/// Interchange form `{ "n": .., "N": .., "cubes": [[..], ..] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingJson {
    pub n: usize,
    #[serde(rename = "N")]
    pub scale: u32,
    pub cubes: Vec<Vec<u32>>,
}

impl From<&Packing> for PackingJson {
    fn from(p: &Packing) -> Self {
        PackingJson {
            n: p.params.dim(),
            scale: p.params.scale(),
            cubes: p.cubes.iter().map(|c| c.0.clone()).collect(),
        }
    }
}

impl TryFrom<PackingJson> for Packing {
    type Error = Error;

    fn try_from(raw: PackingJson) -> Result<Self> {
        let params = TorusParams::new(raw.n, raw.scale)?;
        let cubes = raw
            .cubes
            .into_iter()
            .map(|c| CubePosition::new(c, &params))
            .collect::<Result<Vec<_>>>()?;
        Packing::new(params, cubes)
    }
}

impl Serialize for Packing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PackingJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Packing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PackingJson::deserialize(d)?;
        Packing::try_from(raw).map_err(serde::de::Error::custom)
    }
}

/// Every position compatible with all cubes of `p`, in lexicographic order.
pub fn free_positions(p: &Packing) -> Vec<CubePosition> {
    let params = p.params;
    let (side, scale) = (params.side(), params.scale());
    params
        .positions()
        .filter(|q| p.cubes.iter().all(|c| compatible_unchecked(&q.0, &c.0, side, scale)))
        .collect()
}

/// The uncovered cells of a packing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hole {
    params: TorusParams,
    cells: Vec<CubePosition>,
}

impl Hole {
    pub fn params(&self) -> &TorusParams {
        &self.params
    }

    pub fn cells(&self) -> &[CubePosition] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Cells of the torus covered by no cube of `p`.
pub fn hole_of(p: &Packing) -> Hole {
    let params = p.params;
    let count = params.position_count().expect("torus too large") as usize;
    let mut covered = vec![false; count];
    let (side, scale) = (params.side(), params.scale());
    let n = params.dim();
    let mut offset = vec![0u32; n];
    for cube in &p.cubes {
        offset.iter_mut().for_each(|o| *o = 0);
        loop {
            let cell: Vec<u32> = cube.0.iter().zip(&offset).map(|(&c, &o)| (c + o) % side).collect();
            covered[params.index_of(&cell)] = true;
            // odometer over {0..N-1}^n
            let mut i = 0;
            while i < n {
                offset[i] += 1;
                if offset[i] < scale {
                    break;
                }
                offset[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    let cells = covered
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| CubePosition(params.coords_of(i)))
        .collect();
    Hole { params, cells }
}

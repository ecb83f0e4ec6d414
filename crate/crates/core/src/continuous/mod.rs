//! The `N -> infinity` limit of the torus model.
//!
//! Each coordinate of a cube is a generic real parameter plus an integer part
//! modulo 2 (the shift bit). Generic parameters only differ by an integer when
//! they are the same parameter, so two cubes are compatible exactly when they
//! share a parameter on some axis with opposite shifts. Parameters are scoped
//! to their axis.

mod enumerate;
mod factorization;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use enumerate::{
    enumerate_continuous_tilings, enumerate_continuous_tilings_with, minimal_nonextensible, ContinuousCensus,
    InsertionRule,
};
pub use factorization::{
    enumerate_one_factorizations, labeled_factorizations, packing_from_one_factorization, OneFactorization,
};

/// One coordinate of a continuous cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord {
    pub param: u32,
    pub shift: u8,
}

impl Coord {
    pub fn new(param: u32, shift: u8) -> Self {
        Coord { param, shift: shift & 1 }
    }

    pub fn flipped(self) -> Self {
        Coord { param: self.param, shift: self.shift ^ 1 }
    }
}

/// A cube of the continuous model: one [`Coord`] per axis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContinuousCube(pub Vec<Coord>);

impl ContinuousCube {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Coord] {
        &self.0
    }
}

impl fmt::Display for ContinuousCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "a{}+{}", c.param, c.shift)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for ContinuousPacking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.cubes.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn compatible_unchecked(a: &ContinuousCube, b: &ContinuousCube) -> bool {
    a.0.iter().zip(&b.0).any(|(x, y)| x.param == y.param && x.shift != y.shift)
}

/// Shared parameter with opposite shift on some axis.
pub fn c_compatible(a: &ContinuousCube, b: &ContinuousCube) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::usage(format!("cube dimensions differ: {} vs {}", a.dim(), b.dim())));
    }
    Ok(compatible_unchecked(a, b))
}

/// Pairwise compatible continuous cubes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuousPacking {
    n: usize,
    cubes: Vec<ContinuousCube>,
}

impl ContinuousPacking {
    pub fn new(n: usize, cubes: Vec<ContinuousCube>) -> Result<Self> {
        if n == 0 {
            return Err(Error::usage("dimension must be at least 1"));
        }
        if let Some(c) = cubes.iter().find(|c| c.dim() != n) {
            return Err(Error::usage(format!("cube {c} does not have {n} coordinates")));
        }
        for (i, a) in cubes.iter().enumerate() {
            for b in &cubes[i + 1..] {
                if !compatible_unchecked(a, b) {
                    return Err(Error::InvalidPacking(format!("cubes {a} and {b} overlap")));
                }
            }
        }
        if cubes.len() as u64 > 1u64 << n {
            return Err(Error::InvalidPacking("more than 2^n cubes".into()));
        }
        Ok(ContinuousPacking { n, cubes })
    }

    pub fn empty(n: usize) -> Self {
        ContinuousPacking { n, cubes: Vec::new() }
    }

    /// One parameter per axis and all `2^n` shift patterns.
    pub fn trivial_tiling(n: usize) -> Self {
        let cubes = (0..1u32 << n)
            .map(|mask| ContinuousCube((0..n).map(|i| Coord::new(0, (mask >> (n - 1 - i)) as u8 & 1)).collect()))
            .collect();
        ContinuousPacking { n, cubes }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn cubes(&self) -> &[ContinuousCube] {
        &self.cubes
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn is_tiling(&self) -> bool {
        self.cubes.len() as u64 == 1u64 << self.n
    }

    pub(crate) fn push_unchecked(&mut self, cube: ContinuousCube) {
        self.cubes.push(cube);
    }

    /// Parameters used on `axis`, sorted.
    pub fn params_on(&self, axis: usize) -> Vec<u32> {
        let mut ps: Vec<u32> = self.cubes.iter().map(|c| c.0[axis].param).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// Smallest label unused on `axis`.
    pub fn fresh_param(&self, axis: usize) -> u32 {
        self.cubes.iter().map(|c| c.0[axis].param + 1).max().unwrap_or(0)
    }

    /// Canonical relabeling: the smallest encoding over axis permutations and
    /// cube orderings, parameters numbered by first appearance and each
    /// parameter's first appearance carrying shift 0.
    pub fn canonical(&self) -> ContinuousPacking {
        let code = canonical_code(self);
        decode(self.n, &code)
    }

    /// Hashable identity of the isomorphism class.
    pub fn canonical_code(&self) -> Vec<u16> {
        canonical_code(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("continuous packing serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Number of distinct `(axis, parameter)` pairs.
pub fn parameter_count(p: &ContinuousPacking) -> usize {
    (0..p.n).map(|axis| p.params_on(axis).len()).sum()
}

/// A cube that can be added to `p`, if any.
///
/// Per axis the candidate is either a fresh parameter or an existing parameter
/// of that axis with either shift; fresh coordinates never create
/// compatibility, so every existing cube must be matched on some axis.
pub fn c_extensible(p: &ContinuousPacking) -> Option<ContinuousCube> {
    let mut assignment: Vec<Option<Coord>> = vec![None; p.n];
    if find_assignment(p, 0, &mut assignment) {
        Some(ContinuousCube(
            assignment
                .iter()
                .enumerate()
                .map(|(axis, a)| a.unwrap_or(Coord::new(p.fresh_param(axis), 0)))
                .collect(),
        ))
    } else {
        None
    }
}

fn find_assignment(p: &ContinuousPacking, start: usize, assignment: &mut [Option<Coord>]) -> bool {
    let Some(idx) = (start..p.cubes.len()).find(|&i| !satisfied(&p.cubes[i], assignment)) else {
        return true;
    };
    let cube = &p.cubes[idx];
    for axis in 0..p.n {
        if assignment[axis].is_none() {
            assignment[axis] = Some(cube.0[axis].flipped());
            if find_assignment(p, idx + 1, assignment) {
                return true;
            }
            assignment[axis] = None;
        }
    }
    false
}

fn satisfied(cube: &ContinuousCube, assignment: &[Option<Coord>]) -> bool {
    cube.0
        .iter()
        .zip(assignment)
        .any(|(c, a)| matches!(a, Some(x) if x.param == c.param && x.shift != c.shift))
}

/// Every minimal partial assignment (constrained axes only) that makes a new
/// cube compatible with all of `p`. Unassigned axes take fresh parameters.
pub(crate) fn minimal_assignments(p: &ContinuousPacking) -> Vec<Vec<Option<Coord>>> {
    let mut out = Vec::new();
    let mut assignment = vec![None; p.n];
    collect_assignments(p, 0, &mut assignment, &mut out);
    out.sort();
    out.dedup();
    // drop assignments that strictly extend another one
    let constrained = |a: &Vec<Option<Coord>>| a.iter().filter(|x| x.is_some()).count();
    let snapshot = out.clone();
    out.retain(|a| {
        !snapshot.iter().any(|b| {
            b != a && constrained(b) < constrained(a) && b.iter().zip(a).all(|(x, y)| x.is_none() || x == y)
        })
    });
    out
}

fn collect_assignments(
    p: &ContinuousPacking,
    start: usize,
    assignment: &mut [Option<Coord>],
    out: &mut Vec<Vec<Option<Coord>>>,
) {
    let Some(idx) = (start..p.cubes.len()).find(|&i| !satisfied(&p.cubes[i], assignment)) else {
        out.push(assignment.to_vec());
        return;
    };
    let cube = &p.cubes[idx];
    for axis in 0..p.n {
        if assignment[axis].is_none() {
            assignment[axis] = Some(cube.0[axis].flipped());
            collect_assignments(p, idx + 1, assignment, out);
            assignment[axis] = None;
        }
    }
}

fn canonical_code(p: &ContinuousPacking) -> Vec<u16> {
    let n = p.n;
    let mut best: Option<Vec<u16>> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut perms = Vec::new();
    permute(&mut perm, 0, &mut perms);
    for perm in perms {
        let cubes: Vec<Vec<Coord>> = p.cubes.iter().map(|c| perm.iter().map(|&i| c.0[i]).collect()).collect();
        let mut labels: Vec<BTreeMap<u32, (u16, u8)>> = vec![BTreeMap::new(); n];
        let mut used = vec![false; cubes.len()];
        let mut cur = Vec::with_capacity(cubes.len() * n + 1);
        cur.push(n as u16);
        search_code(&cubes, &mut labels, &mut used, &mut cur, &mut best);
    }
    best.unwrap_or_else(|| vec![n as u16])
}

fn permute(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, out);
        v.swap(k, i);
    }
}

fn encode(cube: &[Coord], labels: &[BTreeMap<u32, (u16, u8)>]) -> Vec<u16> {
    cube.iter()
        .zip(labels)
        .map(|(c, map)| match map.get(&c.param) {
            Some(&(label, flip)) => label * 2 + u16::from(c.shift ^ flip),
            None => map.len() as u16 * 2,
        })
        .collect()
}

fn search_code(
    cubes: &[Vec<Coord>],
    labels: &mut Vec<BTreeMap<u32, (u16, u8)>>,
    used: &mut [bool],
    cur: &mut Vec<u16>,
    best: &mut Option<Vec<u16>>,
) {
    if used.iter().all(|&u| u) {
        if best.as_ref().is_none_or(|b| cur[..] < b[..]) {
            *best = Some(cur.clone());
        }
        return;
    }
    let codes: Vec<(usize, Vec<u16>)> = (0..cubes.len())
        .filter(|&i| !used[i])
        .map(|i| (i, encode(&cubes[i], labels)))
        .collect();
    let min = codes.iter().map(|(_, c)| c).min().expect("unused cube").clone();
    let len = cur.len();
    cur.extend_from_slice(&min);
    if let Some(b) = best.as_ref() {
        if cur[..] > b[..cur.len()] {
            cur.truncate(len);
            return;
        }
    }
    for (i, code) in &codes {
        if *code != min {
            continue;
        }
        let mut added = Vec::new();
        for (axis, c) in cubes[*i].iter().enumerate() {
            if !labels[axis].contains_key(&c.param) {
                let label = labels[axis].len() as u16;
                labels[axis].insert(c.param, (label, c.shift));
                added.push((axis, c.param));
            }
        }
        used[*i] = true;
        search_code(cubes, labels, used, cur, best);
        used[*i] = false;
        for (axis, param) in added {
            labels[axis].remove(&param);
        }
    }
    cur.truncate(len);
}

fn decode(n: usize, code: &[u16]) -> ContinuousPacking {
    let cubes = code[1..]
        .chunks(n)
        .map(|chunk| ContinuousCube(chunk.iter().map(|&v| Coord::new(u32::from(v / 2), (v % 2) as u8)).collect()))
        .collect();
    ContinuousPacking { n, cubes }
}

#[derive(Serialize, Deserialize)]
struct CoordJson {
    axis: usize,
    param: String,
    shift: u8,
}

#[derive(Serialize, Deserialize)]
struct PackingJson {
    n: usize,
    cubes: Vec<Vec<CoordJson>>,
}

impl Serialize for ContinuousPacking {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PackingJson {
            n: self.n,
            cubes: self
                .cubes
                .iter()
                .map(|c| {
                    c.0.iter()
                        .enumerate()
                        .map(|(axis, x)| CoordJson { axis, param: format!("a{}", x.param), shift: x.shift })
                        .collect()
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ContinuousPacking {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PackingJson::deserialize(d)?;
        let mut cubes = Vec::with_capacity(raw.cubes.len());
        for coords in raw.cubes {
            let mut cube = vec![None; raw.n];
            for c in coords {
                let label = c
                    .param
                    .strip_prefix('a')
                    .and_then(|s| s.parse::<u32>().ok())
                    .ok_or_else(|| D::Error::custom(format!("parameter {:?} is not of the form a<k>", c.param)))?;
                if c.shift > 1 {
                    return Err(D::Error::custom("shift must be 0 or 1"));
                }
                let slot = cube
                    .get_mut(c.axis)
                    .ok_or_else(|| D::Error::custom(format!("axis {} out of range", c.axis)))?;
                if slot.is_some() {
                    return Err(D::Error::custom(format!("axis {} given twice", c.axis)));
                }
                *slot = Some(Coord::new(label, c.shift));
            }
            let cube: Option<Vec<Coord>> = cube.into_iter().collect();
            cubes.push(ContinuousCube(cube.ok_or_else(|| D::Error::custom("missing axis"))?));
        }
        ContinuousPacking::new(raw.n, cubes).map_err(D::Error::custom)
    }
}

/// Replaces parameter `k` of an axis with the integer `k` and the shift with
/// `+N`, giving a packing of the scale-`N` torus.
pub fn to_discrete(p: &ContinuousPacking, scale: u32) -> Result<crate::model::Packing> {
    use crate::model::{CubePosition, Packing, TorusParams};
    let params = TorusParams::new(p.n, scale)?;
    let mut cubes = Vec::with_capacity(p.len());
    for cube in &p.cubes {
        let mut coords = Vec::with_capacity(p.n);
        for (axis, c) in cube.0.iter().enumerate() {
            let rank = p.params_on(axis).binary_search(&c.param).expect("parameter present") as u32;
            if rank >= scale {
                return Err(Error::usage(format!("axis {axis} needs scale at least {}", rank + 1)));
            }
            coords.push(rank + scale * u32::from(c.shift));
        }
        cubes.push(CubePosition::new(coords, &params)?);
    }
    Packing::new(params, cubes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(c: &[(u32, u8)]) -> ContinuousCube {
        ContinuousCube(c.iter().map(|&(p, s)| Coord::new(p, s)).collect())
    }

    #[test]
    fn compatibility_examples() {
        assert!(c_compatible(&cube(&[(0, 0), (1, 0)]), &cube(&[(0, 1), (2, 0)])).unwrap());
        assert!(!c_compatible(&cube(&[(0, 0), (1, 0)]), &cube(&[(3, 0), (2, 1)])).unwrap());
        assert!(!c_compatible(&cube(&[(0, 0), (1, 1)]), &cube(&[(0, 0), (1, 1)])).unwrap());
        assert!(c_compatible(&cube(&[(0, 0)]), &cube(&[(0, 0), (1, 1)])).is_err());
    }

    #[test]
    fn empty_packing_is_extensible() {
        for n in 1..=4 {
            let w = c_extensible(&ContinuousPacking::empty(n)).unwrap();
            assert_eq!(w.dim(), n);
        }
    }

    #[test]
    fn tilings_are_not_extensible() {
        for n in 1..=4 {
            let t = ContinuousPacking::trivial_tiling(n);
            assert!(t.is_tiling());
            assert!(c_extensible(&t).is_none());
            assert_eq!(parameter_count(&t), n);
        }
    }

    #[test]
    fn witness_is_compatible() {
        let p = ContinuousPacking::new(2, vec![cube(&[(0, 0), (0, 0)]), cube(&[(0, 1), (1, 0)])]).unwrap();
        let w = c_extensible(&p).unwrap();
        assert!(p.cubes().iter().all(|c| c_compatible(c, &w).unwrap()));
    }

    #[test]
    fn canonical_form_ignores_labels_and_order() {
        let a = ContinuousPacking::new(2, vec![cube(&[(0, 0), (5, 0)]), cube(&[(0, 1), (7, 1)])]).unwrap();
        let b = ContinuousPacking::new(2, vec![cube(&[(9, 0), (3, 1)]), cube(&[(2, 1), (3, 0)])]).unwrap();
        assert_eq!(a.canonical_code(), b.canonical_code());
        let c = ContinuousPacking::new(2, vec![cube(&[(0, 0), (5, 0)]), cube(&[(0, 1), (5, 1)])]).unwrap();
        assert_ne!(a.canonical_code(), c.canonical_code());
        assert_eq!(a.canonical().canonical_code(), a.canonical_code());
    }

    #[test]
    fn json_round_trip() {
        let t = ContinuousPacking::trivial_tiling(2);
        let text = t.to_json();
        assert!(text.starts_with(r#"{"n":2,"cubes":[[{"axis":0,"param":"a0","shift":0}"#));
        assert_eq!(ContinuousPacking::from_json(&text).unwrap(), t);
        assert!(ContinuousPacking::from_json(r#"{"n":1,"cubes":[[{"axis":0,"param":"x","shift":0}]]}"#).is_err());
    }

    #[test]
    fn discrete_image_of_trivial_tiling() {
        let p = to_discrete(&ContinuousPacking::trivial_tiling(3), 2).unwrap();
        assert!(p.is_tiling());
    }
}

use std::collections::{HashMap, HashSet};

use super::{c_extensible, minimal_assignments, Coord, ContinuousCube, ContinuousPacking};
use crate::error::{Error, Result};

/// Which insertions the sequential process may perform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertionRule {
    /// The new cube keeps as many fresh coordinates as any compatible cube
    /// could; positions with fewer free coordinates have probability zero in
    /// the limit.
    PositiveProbability,
    /// Any compatible cube; reaches every combinatorial packing.
    AnyCompatible,
}

/// Terminal types reached by the sequential process.
#[derive(Clone, Debug, Default)]
pub struct ContinuousCensus {
    /// Tiling types, sorted by canonical code.
    pub tilings: Vec<ContinuousPacking>,
    /// Non-extensible types with fewer than `2^n` cubes.
    pub nonextensible: Vec<ContinuousPacking>,
    /// Distinct intermediate states visited.
    pub states: usize,
}

/// Tilings obtained with positive probability, up to isomorphism.
pub fn enumerate_continuous_tilings(n: usize) -> Result<Vec<ContinuousPacking>> {
    Ok(enumerate_continuous_tilings_with(n, InsertionRule::PositiveProbability)?.tilings)
}

pub fn enumerate_continuous_tilings_with(n: usize, rule: InsertionRule) -> Result<ContinuousCensus> {
    check_dim(n, rule)?;
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    let mut stack = vec![ContinuousPacking::empty(n)];
    seen.insert(stack[0].canonical_code());
    let mut tilings = HashMap::new();
    let mut nonext = HashMap::new();
    while let Some(state) = stack.pop() {
        let next = successors(&state, rule);
        if next.is_empty() {
            let code = state.canonical_code();
            if state.is_tiling() {
                tilings.insert(code, state);
            } else {
                nonext.insert(code, state);
            }
            continue;
        }
        for child in next {
            let code = child.canonical_code();
            if seen.insert(code.clone()) {
                stack.push(super::decode(n, &code));
            }
        }
    }
    Ok(ContinuousCensus { tilings: sorted(tilings), nonextensible: sorted(nonext), states: seen.len() })
}

fn check_dim(n: usize, rule: InsertionRule) -> Result<()> {
    if n == 0 {
        return Err(Error::usage("dimension must be at least 1"));
    }
    let limit = match rule {
        InsertionRule::PositiveProbability => 4,
        InsertionRule::AnyCompatible => 3,
    };
    if n > limit {
        return Err(Error::capacity(format!(
            "continuous enumeration with {rule:?} supports n <= {limit} (n = {n} requested)"
        )));
    }
    Ok(())
}

fn sorted(map: HashMap<Vec<u16>, ContinuousPacking>) -> Vec<ContinuousPacking> {
    let mut v: Vec<_> = map.into_iter().collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v.into_iter().map(|(_, p)| p).collect()
}

/// Packings reachable from `p` by one insertion under `rule` (not deduplicated).
pub(crate) fn successors(p: &ContinuousPacking, rule: InsertionRule) -> Vec<ContinuousPacking> {
    if p.is_tiling() {
        return Vec::new();
    }
    let minimal = minimal_assignments(p);
    let n = p.dim();
    let assignments: Vec<Vec<Option<Coord>>> = match rule {
        InsertionRule::PositiveProbability => {
            let least = minimal.iter().map(|a| a.iter().flatten().count()).min();
            minimal.into_iter().filter(|a| Some(a.iter().flatten().count()) == least).collect()
        }
        InsertionRule::AnyCompatible => {
            let mut all = Vec::new();
            for a in minimal {
                expand_free_axes(p, &a, 0, &mut a.clone(), &mut all);
            }
            all.sort();
            all.dedup();
            all
        }
    };
    assignments
        .into_iter()
        .map(|a| {
            let cube = ContinuousCube(
                a.iter()
                    .enumerate()
                    .map(|(axis, c)| c.unwrap_or(Coord::new(p.fresh_param(axis), 0)))
                    .collect(),
            );
            let mut child = p.clone();
            child.push_unchecked(cube);
            debug_assert_eq!(child.dim(), n);
            child
        })
        .collect()
}

fn expand_free_axes(
    p: &ContinuousPacking,
    base: &[Option<Coord>],
    axis: usize,
    cur: &mut Vec<Option<Coord>>,
    out: &mut Vec<Vec<Option<Coord>>>,
) {
    if axis == base.len() {
        // the new cube must not coincide with an existing one
        let duplicate = cur.iter().all(|c| c.is_some())
            && p.cubes().iter().any(|c| c.0.iter().zip(cur.iter()).all(|(x, y)| Some(*x) == *y));
        if !duplicate {
            out.push(cur.clone());
        }
        return;
    }
    if base[axis].is_some() {
        expand_free_axes(p, base, axis + 1, cur, out);
        return;
    }
    cur[axis] = None;
    expand_free_axes(p, base, axis + 1, cur, out);
    for param in p.params_on(axis) {
        for shift in 0..2 {
            cur[axis] = Some(Coord::new(param, shift));
            expand_free_axes(p, base, axis + 1, cur, out);
        }
    }
    cur[axis] = None;
}

/// Smallest size of a non-extensible packing of the combinatorial model and
/// all its types, by breadth-first growth over isomorphism classes.
pub fn minimal_nonextensible(n: usize) -> Result<(usize, Vec<ContinuousPacking>)> {
    if n == 0 {
        return Err(Error::usage("dimension must be at least 1"));
    }
    if n > 4 {
        return Err(Error::capacity(format!("minimal continuous search supports n <= 4 (n = {n} requested)")));
    }
    let mut level = vec![ContinuousPacking::empty(n)];
    loop {
        let found: HashMap<Vec<u16>, ContinuousPacking> = level
            .iter()
            .filter(|p| c_extensible(p).is_none())
            .map(|p| (p.canonical_code(), p.clone()))
            .collect();
        if !found.is_empty() {
            let size = level[0].len();
            return Ok((size, sorted(found)));
        }
        let mut next: HashMap<Vec<u16>, ContinuousPacking> = HashMap::new();
        for p in &level {
            for child in successors(p, InsertionRule::AnyCompatible) {
                next.entry(child.canonical_code()).or_insert_with_key(|code| super::decode(n, code));
            }
        }
        level = sorted(next);
    }
}

//! One-factorizations of complete graphs `K_{2m}` and the continuous packings
//! they encode.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{Coord, ContinuousCube, ContinuousPacking};
use crate::error::{Error, Result};

/// A partition of the edges of `K_{2m}` into `2m - 1` perfect matchings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OneFactorization {
    m: usize,
    factors: Vec<Vec<[usize; 2]>>,
}

impl OneFactorization {
    pub fn new(m: usize, factors: Vec<Vec<[usize; 2]>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::usage("m must be at least 1"));
        }
        let v = 2 * m;
        if factors.len() != v - 1 {
            return Err(Error::usage(format!("K_{v} needs {} factors, got {}", v - 1, factors.len())));
        }
        let mut seen = HashSet::new();
        for (k, f) in factors.iter().enumerate() {
            let mut covered = vec![false; v];
            if f.len() != m {
                return Err(Error::usage(format!("factor {k} has {} edges, expected {m}", f.len())));
            }
            for &[a, b] in f {
                if a >= v || b >= v || a == b {
                    return Err(Error::usage(format!("factor {k} has invalid edge ({a}, {b})")));
                }
                if covered[a] || covered[b] {
                    return Err(Error::usage(format!("factor {k} is not a matching")));
                }
                covered[a] = true;
                covered[b] = true;
                if !seen.insert((a.min(b), a.max(b))) {
                    return Err(Error::usage(format!("edge ({a}, {b}) appears twice")));
                }
            }
        }
        Ok(Self::normalized(m, factors))
    }

    /// Edges stored as `[small, large]`, each factor sorted, factors sorted.
    fn normalized(m: usize, mut factors: Vec<Vec<[usize; 2]>>) -> Self {
        for f in &mut factors {
            for e in f.iter_mut() {
                if e[0] > e[1] {
                    e.swap(0, 1);
                }
            }
            f.sort_unstable();
        }
        factors.sort();
        OneFactorization { m, factors }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn factors(&self) -> &[Vec<[usize; 2]>] {
        &self.factors
    }

    /// Image under a vertex relabeling.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let factors = self.factors.iter().map(|f| f.iter().map(|&[a, b]| [perm[a], perm[b]]).collect()).collect();
        Self::normalized(self.m, factors)
    }

    /// Smallest normalized image over all vertex permutations.
    pub fn canonical(&self) -> Self {
        let mut best = self.clone();
        let mut perm: Vec<usize> = (0..2 * self.m).collect();
        for_each_permutation(&mut perm, 0, &mut |p| {
            let img = self.relabeled(p);
            if img.factors < best.factors {
                best = img;
            }
        });
        best
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("factorization serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: OneFactorization = serde_json::from_str(text)?;
        OneFactorization::new(raw.m, raw.factors)
    }
}

fn for_each_permutation(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        for_each_permutation(v, k + 1, f);
        v.swap(k, i);
    }
}

/// One-factorizations of `K_{2m}` up to isomorphism, `m <= 4`.
///
/// All labeled factorizations are generated with factor `k` holding the edge
/// `{0, k + 1}`; isomorphism classes are then separated by orbit marking under
/// the full vertex symmetric group.
pub fn enumerate_one_factorizations(m: usize) -> Result<Vec<OneFactorization>> {
    if m == 0 {
        return Err(Error::usage("m must be at least 1"));
    }
    if m > 4 {
        return Err(Error::capacity(format!(
            "one-factorization enumeration supports m <= 4; K_{} has over 10^9 labeled factorizations",
            2 * m
        )));
    }
    let labeled = labeled_factorizations(m);
    let mut seen: HashSet<OneFactorization> = HashSet::new();
    let mut classes = Vec::new();
    for f in &labeled {
        if seen.contains(f) {
            continue;
        }
        let mut perm: Vec<usize> = (0..2 * m).collect();
        for_each_permutation(&mut perm, 0, &mut |p| {
            seen.insert(f.relabeled(p));
        });
        classes.push(f.canonical());
    }
    classes.sort_by(|a, b| a.factors.cmp(&b.factors));
    Ok(classes)
}

/// Every labeled one-factorization of `K_{2m}` (as an unordered set of factors).
pub fn labeled_factorizations(m: usize) -> Vec<OneFactorization> {
    let v = 2 * m;
    let mut used = vec![vec![false; v]; v];
    let mut factors: Vec<Vec<[usize; 2]>> = Vec::new();
    let mut out = Vec::new();
    build_factor(m, &mut used, &mut factors, &mut Vec::new(), &mut vec![false; v], &mut out);
    out
}

fn build_factor(
    m: usize,
    used: &mut Vec<Vec<bool>>,
    factors: &mut Vec<Vec<[usize; 2]>>,
    current: &mut Vec<[usize; 2]>,
    matched: &mut Vec<bool>,
    out: &mut Vec<OneFactorization>,
) {
    let v = 2 * m;
    if factors.len() == v - 1 {
        out.push(OneFactorization::normalized(m, factors.clone()));
        return;
    }
    let Some(a) = (0..v).find(|&x| !matched[x]) else {
        // factor complete
        let f = std::mem::take(current);
        factors.push(f);
        let mut fresh = vec![false; v];
        build_factor(m, used, factors, &mut Vec::new(), &mut fresh, out);
        *current = factors.pop().expect("pushed above");
        return;
    };
    // factor k is anchored by the edge {0, k + 1}
    let candidates: Vec<usize> = if a == 0 {
        vec![factors.len() + 1]
    } else {
        (a + 1..v).filter(|&b| !matched[b] && !used[a][b]).collect()
    };
    for b in candidates {
        if matched[b] || used[a][b] {
            continue;
        }
        used[a][b] = true;
        used[b][a] = true;
        matched[a] = true;
        matched[b] = true;
        current.push([a, b]);
        build_factor(m, used, factors, current, matched, out);
        current.pop();
        matched[a] = false;
        matched[b] = false;
        used[a][b] = false;
        used[b][a] = false;
    }
}

/// Axis `k` carries factor `k`; the endpoints of each edge share a fresh
/// parameter with opposite shifts, the smaller endpoint taking shift 0.
pub fn packing_from_one_factorization(f: &OneFactorization) -> Result<ContinuousPacking> {
    let f = OneFactorization::new(f.m, f.factors.clone())?;
    let v = 2 * f.m;
    let n = v - 1;
    let mut cubes = vec![vec![Coord::new(0, 0); n]; v];
    for (axis, factor) in f.factors.iter().enumerate() {
        for (param, &[a, b]) in factor.iter().enumerate() {
            cubes[a][axis] = Coord::new(param as u32, 0);
            cubes[b][axis] = Coord::new(param as u32, 1);
        }
    }
    ContinuousPacking::new(n, cubes.into_iter().map(ContinuousCube).collect())
}

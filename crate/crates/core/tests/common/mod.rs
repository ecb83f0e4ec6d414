//! Independent brute-force oracles shared by the integration tests. Nothing
//! here uses the library's search code; only plain coordinate vectors.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

pub type Point = Vec<u32>;

pub fn compatible(a: &[u32], b: &[u32], scale: u32) -> bool {
    let side = 2 * scale;
    a.iter().zip(b).any(|(&x, &y)| (x + side - y) % side == scale)
}

pub fn all_points(n: usize, side: u32) -> Vec<Point> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|p: Point| (0..side).map(move |c| [p.clone(), vec![c]].concat())).collect();
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Lexicographically least sorted image under every translation, axis
/// permutation and reflection, found by trying all of them.
pub fn naive_canonical(points: &[Point], n: usize, scale: u32) -> Vec<Point> {
    let side = 2 * scale;
    let mut best: Option<Vec<Point>> = None;
    for perm in permutations(n) {
        for signs in 0..1u32 << n {
            for t in all_points(n, side) {
                let mut img: Vec<Point> = points
                    .iter()
                    .map(|p| {
                        let mut q = vec![0; n];
                        for i in 0..n {
                            let c = if signs >> i & 1 == 1 { (side - p[i]) % side } else { p[i] };
                            q[perm[i]] = (c + t[perm[i]]) % side;
                        }
                        q
                    })
                    .collect();
                img.sort();
                if best.as_ref().is_none_or(|b| img < *b) {
                    best = Some(img);
                }
            }
        }
    }
    best.unwrap_or_default()
}

/// Every tiling of `(Z/4Z)^n` by cubes of side 2, by exact cover of the cells.
pub fn exact_cover_tilings(n: usize) -> Vec<Vec<Point>> {
    let cells = all_points(n, 4);
    let index = |p: &[u32]| p.iter().fold(0usize, |acc, &c| acc * 4 + c as usize);
    let offsets = all_points(n, 2);
    let cover = |cube: &[u32]| -> Vec<usize> {
        offsets.iter().map(|o| index(&cube.iter().zip(o).map(|(&c, &d)| (c + d) % 4).collect::<Vec<_>>())).collect()
    };
    fn go(
        cells: &[Point],
        covered: &mut Vec<bool>,
        chosen: &mut Vec<Point>,
        offsets: &[Point],
        cover: &dyn Fn(&[u32]) -> Vec<usize>,
        out: &mut Vec<Vec<Point>>,
    ) {
        let Some(first) = covered.iter().position(|&c| !c) else {
            let mut t = chosen.clone();
            t.sort();
            out.push(t);
            return;
        };
        for o in offsets {
            let cube: Point = cells[first].iter().zip(o).map(|(&c, &d)| (c + 4 - d) % 4).collect();
            let footprint = cover(&cube);
            if footprint.iter().any(|&c| covered[c]) {
                continue;
            }
            for &c in &footprint {
                covered[c] = true;
            }
            chosen.push(cube);
            go(cells, covered, chosen, offsets, cover, out);
            chosen.pop();
            for &c in &footprint {
                covered[c] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&cells, &mut vec![false; cells.len()], &mut Vec::new(), &offsets, &cover, &mut out);
    out
}

/// Orbits of a family of point sets under the full group.
pub fn naive_types(sets: &[Vec<Point>], n: usize, scale: u32) -> BTreeSet<Vec<Point>> {
    sets.iter().map(|s| naive_canonical(s, n, scale)).collect()
}

/// Largest clique by scanning every vertex subset (at most ~20 vertices).
pub fn clique_number_scan(adj: &[Vec<bool>]) -> usize {
    let v = adj.len();
    assert!(v <= 24);
    let masks: Vec<u32> = (0..v).map(|i| (0..v).filter(|&j| adj[i][j]).fold(1 << i, |m, j| m | 1 << j)).collect();
    let mut best = 0;
    for s in 0u32..1 << v {
        let size = s.count_ones() as usize;
        if size <= best {
            continue;
        }
        if (0..v).filter(|&i| s >> i & 1 == 1).all(|i| s & !masks[i] == 0) {
            best = size;
        }
    }
    best
}

// ---------------------------------------------------------------------------
// continuous model

/// A cube as `(param, shift)` per axis.
pub type CCube = Vec<(u32, u8)>;

fn c_compat(a: &CCube, b: &CCube) -> bool {
    a.iter().zip(b).any(|(x, y)| x.0 == y.0 && x.1 != y.1)
}

/// Compatible cubes with the fewest reused coordinates; a coordinate is
/// either a fresh parameter or an existing parameter of that axis with either
/// shift.
fn positive_probability_moves(cubes: &[CCube], n: usize) -> Vec<CCube> {
    let mut choices: Vec<Vec<Option<(u32, u8)>>> = Vec::new();
    for axis in 0..n {
        let params: BTreeSet<u32> = cubes.iter().map(|c| c[axis].0).collect();
        let mut opts = vec![None];
        for p in params {
            opts.push(Some((p, 0)));
            opts.push(Some((p, 1)));
        }
        choices.push(opts);
    }
    let mut candidates: Vec<(usize, CCube)> = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let mut cube = Vec::with_capacity(n);
        let mut reused = 0;
        for axis in 0..n {
            match choices[axis][idx[axis]] {
                Some(c) => {
                    reused += 1;
                    cube.push(c);
                }
                None => {
                    let fresh = cubes.iter().map(|c| c[axis].0 + 1).max().unwrap_or(0);
                    cube.push((fresh, 0));
                }
            }
        }
        if cubes.iter().all(|c| c_compat(c, &cube)) {
            candidates.push((reused, cube));
        }
        let mut axis = 0;
        while axis < n {
            idx[axis] += 1;
            if idx[axis] < choices[axis].len() {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
        if axis == n {
            break;
        }
    }
    let least = candidates.iter().map(|c| c.0).min();
    candidates.into_iter().filter(|c| Some(c.0) == least).map(|c| c.1).collect()
}

/// Terminal tilings of the positive-probability process, explored without
/// any symmetry reduction (states are labeled cube sets).
pub fn continuous_terminals_brute(n: usize) -> Vec<Vec<CCube>> {
    let mut seen: HashSet<Vec<CCube>> = HashSet::new();
    let mut stack: Vec<Vec<CCube>> = vec![Vec::new()];
    let mut terminals = Vec::new();
    while let Some(state) = stack.pop() {
        let moves = positive_probability_moves(&state, n);
        if moves.is_empty() {
            terminals.push(state);
            continue;
        }
        for m in moves {
            let mut next = state.clone();
            next.push(m);
            next.sort();
            if seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    terminals
}

/// Isomorphism test: an axis permutation plus, per axis, a bijection of
/// parameters each possibly swapping its two shifts.
pub fn continuous_isomorphic(a: &[CCube], b: &[CCube], n: usize) -> bool {
    if a.len() != b.len() {
        return false;
    }
    type Maps = Vec<(HashMap<u32, (u32, u8)>, HashMap<u32, u32>)>;
    fn extend(a: &[CCube], b: &[CCube], perm: &[usize], i: usize, used: &mut Vec<bool>, maps: &mut Maps) -> bool {
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if used[j] {
                continue;
            }
            let saved = maps.clone();
            let mut ok = true;
            for axis in 0..a[i].len() {
                let (p, s) = a[i][axis];
                let (q, t) = b[j][perm[axis]];
                let (fwd, back) = &mut maps[axis];
                match fwd.get(&p) {
                    Some(&(q2, flip)) => ok &= q2 == q && (s ^ flip) == t,
                    None => {
                        if let std::collections::hash_map::Entry::Vacant(e) = back.entry(q) {
                            e.insert(p);
                            fwd.insert(p, (q, s ^ t));
                        } else {
                            ok = false;
                        }
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok {
                used[j] = true;
                if extend(a, b, perm, i + 1, used, maps) {
                    return true;
                }
                used[j] = false;
            }
            *maps = saved;
        }
        false
    }
    permutations(n).into_iter().any(|perm| {
        let mut maps: Maps = vec![(HashMap::new(), HashMap::new()); n];
        extend(a, b, &perm, 0, &mut vec![false; b.len()], &mut maps)
    })
}

/// Representatives of the isomorphism classes among `packings`.
pub fn continuous_classes(packings: &[Vec<CCube>], n: usize) -> Vec<Vec<CCube>> {
    let mut reps: Vec<Vec<CCube>> = Vec::new();
    for p in packings {
        if !reps.iter().any(|r| continuous_isomorphic(r, p, n)) {
            reps.push(p.clone());
        }
    }
    reps
}

// ---------------------------------------------------------------------------
// one-factorizations

pub type Matching = Vec<(usize, usize)>;

pub fn perfect_matchings(v: usize) -> Vec<Matching> {
    fn go(free: &mut Vec<usize>, cur: &mut Matching, out: &mut Vec<Matching>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            cur.push((a, b));
            go(free, cur, out);
            cur.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    go(&mut (0..v).collect(), &mut Vec::new(), &mut out);
    out
}

/// Labeled one-factorizations of `K_v` as sets of matchings, by exact cover of
/// the edges with perfect matchings.
pub fn labeled_one_factorizations(v: usize) -> Vec<BTreeSet<Matching>> {
    let matchings = perfect_matchings(v);
    let edge_index = |a: usize, b: usize| a * v + b;
    let masks: Vec<u128> = matchings
        .iter()
        .map(|m| m.iter().fold(0u128, |acc, &(a, b)| acc | 1 << edge_index(a, b)))
        .collect();
    let all_edges: u128 = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).fold(0, |acc, (a, b)| acc | 1 << edge_index(a, b));
    fn go(masks: &[u128], covered: u128, all: u128, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if covered == all {
            out.push(chosen.clone());
            return;
        }
        // the lowest uncovered edge must be in exactly one chosen matching
        let edge = (all & !covered).trailing_zeros();
        for (i, &m) in masks.iter().enumerate() {
            if m >> edge & 1 == 1 && m & covered == 0 {
                chosen.push(i);
                go(masks, covered | m, all, chosen, out);
                chosen.pop();
            }
        }
    }
    let mut raw = Vec::new();
    go(&masks, 0, all_edges, &mut Vec::new(), &mut raw);
    raw.into_iter().map(|idx| idx.into_iter().map(|i| matchings[i].clone()).collect()).collect()
}

pub fn relabel(f: &BTreeSet<Matching>, perm: &[usize]) -> BTreeSet<Matching> {
    f.iter()
        .map(|m| {
            let mut e: Matching = m.iter().map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b]))).collect();
            e.sort();
            e
        })
        .collect()
}

pub fn all_permutations(v: usize) -> Vec<Vec<usize>> {
    permutations(v)
}

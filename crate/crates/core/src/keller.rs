//! Keller graphs, exact maximum cliques and DIMACS interchange.
//!
//! Vertices of `G_n` are the positions of `(Z/4Z)^n` in lexicographic order.
//! Two vertices are adjacent when some coordinate differs by 2 and they differ
//! in at least two coordinates, i.e. when the cubes are compatible without
//! sharing a facet. A clique of size `2^n` would be a tiling with no
//! facet-sharing pair.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CubePosition, TorusParams};
use crate::search::enumerate_tilings;
use crate::symmetry::canonical_points;

/// Published clique number of `G_7`; far beyond what is computed here.
pub const REFERENCE_OMEGA_7: usize = 124;

/// Largest dimension built in memory.
pub const MAX_GRAPH_DIM: usize = 5;
/// Largest dimension for streaming DIMACS export.
pub const MAX_EXPORT_DIM: usize = 7;

/// Undirected simple graph with bitset adjacency rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    order: usize,
    words: usize,
    rows: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph {{ order: {}, edges: {} }}", self.order, self.edge_count())
    }
}

impl Graph {
    pub fn empty(order: usize) -> Self {
        let words = order.div_ceil(64).max(1);
        Graph { order, words, rows: vec![0; order * words] }
    }

    pub fn from_edges(order: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(order);
        for (u, v) in edges {
            if u >= order || v >= order || u == v {
                return Err(Error::usage(format!("invalid edge ({u}, {v}) for {order} vertices")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.order).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row(v))
    }

    /// Edges `(u, v)` with `u < v`, in order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &u)| vertices[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v)))
    }

    /// Subgraph induced by `vertices`, relabeled `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }
}

fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

fn first_bit(words: &[u64]) -> Option<usize> {
    words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn digits(mut v: usize, n: usize) -> impl Iterator<Item = usize> {
    (0..n).map(move |_| {
        let d = v & 3;
        v >>= 2;
        d
    })
}

/// Keller adjacency on vertex indices of `{0,1,2,3}^n`.
pub fn keller_adjacent(u: usize, v: usize, n: usize) -> bool {
    let mut opposite = false;
    let mut differ = 0;
    for (a, b) in digits(u, n).zip(digits(v, n)) {
        opposite |= (a + 4 - b) % 4 == 2;
        differ += usize::from(a != b);
    }
    opposite && differ >= 2
}

/// Cube compatibility (`N = 2`) on vertex indices.
pub fn compatible_adjacent(u: usize, v: usize, n: usize) -> bool {
    digits(u, n).zip(digits(v, n)).any(|(a, b)| (a + 4 - b) % 4 == 2)
}

fn check_dim(n: usize, max: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::usage("dimension must be at least 1"));
    }
    if n > max {
        return Err(Error::capacity(format!(
            "graphs on 4^{n} vertices are supported for n <= {max} (G_7 has clique number {REFERENCE_OMEGA_7}, not computed here)"
        )));
    }
    Ok(())
}

fn build(n: usize, adjacent: fn(usize, usize, usize) -> bool) -> Graph {
    let order = 1 << (2 * n);
    let mut g = Graph::empty(order);
    let rows: Vec<Vec<u64>> = (0..order)
        .into_par_iter()
        .map(|u| {
            let mut row = vec![0u64; g.words];
            for v in 0..order {
                if adjacent(u, v, n) {
                    row[v / 64] |= 1 << (v % 64);
                }
            }
            row
        })
        .collect();
    for (u, row) in rows.into_iter().enumerate() {
        g.rows[u * g.words..(u + 1) * g.words].copy_from_slice(&row);
    }
    g
}

/// The Keller graph `G_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KellerGraph {
    n: usize,
    graph: Graph,
}

impl KellerGraph {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Common degree `4^n - 3^n - n` of every vertex.
    pub fn expected_degree(n: usize) -> u64 {
        4u64.pow(n as u32) - 3u64.pow(n as u32) - n as u64
    }

    pub fn expected_edge_count(n: usize) -> u64 {
        4u64.pow(n as u32) * Self::expected_degree(n) / 2
    }
}

/// Compatibility graph of `N = 2` cube positions: Keller edges plus
/// facet-sharing pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityGraph {
    n: usize,
    graph: Graph,
}

impl CompatibilityGraph {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

pub fn build_keller_graph(n: usize) -> Result<KellerGraph> {
    check_dim(n, MAX_GRAPH_DIM)?;
    Ok(KellerGraph { n, graph: build(n, keller_adjacent) })
}

pub fn build_compatibility_graph(n: usize) -> Result<CompatibilityGraph> {
    check_dim(n, MAX_GRAPH_DIM)?;
    Ok(CompatibilityGraph { n, graph: build(n, compatible_adjacent) })
}

/// Result of a maximum-clique search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueResult {
    pub size: usize,
    pub witness: Vec<usize>,
    /// False when the node budget ran out; `size` is then only a lower bound.
    pub complete: bool,
    pub nodes: u64,
}

/// Exact maximum clique by branch and bound with a greedy coloring bound.
/// `budget` caps node expansions; `threads` (default: all cores) splits the
/// top-level branches.
pub fn max_clique(graph: &Graph, budget: Option<u64>, threads: Option<usize>) -> Result<CliqueResult> {
    max_clique_with(graph, budget, threads, &[])
}

/// Maximum clique containing the given (pairwise adjacent) vertices. In a
/// vertex-transitive graph, fixing one vertex loses nothing.
pub fn max_clique_with(graph: &Graph, budget: Option<u64>, threads: Option<usize>, fixed: &[usize]) -> Result<CliqueResult> {
    if !graph.is_clique(fixed) {
        return Err(Error::usage("fixed vertices must form a clique"));
    }
    if threads == Some(0) {
        return Err(Error::usage("threads must be positive"));
    }
    let cand: Vec<usize> = (0..graph.order()).filter(|&v| fixed.iter().all(|&f| graph.has_edge(f, v))).collect();
    let order = degeneracy_order(graph, &cand);
    let local = graph.induced(&order);
    let solver = Solver {
        g: &local,
        words: local.words,
        best: AtomicUsize::new(0),
        witness: Mutex::new(Vec::new()),
        nodes: AtomicU64::new(0),
        budget: budget.unwrap_or(u64::MAX),
        stopped: AtomicBool::new(false),
    };
    let run = || solver.top();
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::usage(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
    let mut witness: Vec<usize> = solver.witness.into_inner().expect("witness lock").iter().map(|&i| order[i]).collect();
    witness.extend_from_slice(fixed);
    witness.sort_unstable();
    Ok(CliqueResult {
        size: witness.len(),
        witness,
        complete: !solver.stopped.load(Ordering::Relaxed),
        nodes: solver.nodes.load(Ordering::Relaxed),
    })
}

/// Vertices ordered with the densest core first.
fn degeneracy_order(graph: &Graph, vertices: &[usize]) -> Vec<usize> {
    let inside: BTreeSet<usize> = vertices.iter().copied().collect();
    let mut deg: Vec<usize> = vertices.iter().map(|&v| graph.neighbors(v).filter(|u| inside.contains(u)).count()).collect();
    let mut removed = vec![false; vertices.len()];
    let index: std::collections::HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut out = Vec::with_capacity(vertices.len());
    for _ in 0..vertices.len() {
        let i = (0..vertices.len()).filter(|&i| !removed[i]).min_by_key(|&i| (deg[i], i)).expect("vertex left");
        removed[i] = true;
        out.push(vertices[i]);
        for u in graph.neighbors(vertices[i]) {
            if let Some(&j) = index.get(&u) {
                if !removed[j] {
                    deg[j] -= 1;
                }
            }
        }
    }
    out.reverse();
    out
}

struct Solver<'a> {
    g: &'a Graph,
    words: usize,
    best: AtomicUsize,
    witness: Mutex<Vec<usize>>,
    nodes: AtomicU64,
    budget: u64,
    stopped: AtomicBool,
}

impl Solver<'_> {
    fn top(&self) {
        let mut all = vec![0u64; self.words];
        for v in 0..self.g.order() {
            all[v / 64] |= 1 << (v % 64);
        }
        let colored = self.color(&all, 0);
        // branch i may use only the vertices colored before it
        let branches: Vec<(usize, usize, Vec<u64>)> = colored
            .iter()
            .enumerate()
            .map(|(i, &(v, c))| {
                let mut p = vec![0u64; self.words];
                for &(u, _) in &colored[..i] {
                    p[u / 64] |= 1 << (u % 64);
                }
                (v, c, p)
            })
            .collect();
        branches.into_par_iter().rev().for_each(|(v, c, p)| {
            if c <= self.best.load(Ordering::Relaxed) || self.stopped.load(Ordering::Relaxed) {
                return;
            }
            let next: Vec<u64> = p.iter().zip(self.g.row(v)).map(|(a, b)| a & b).collect();
            let mut clique = vec![v];
            self.expand(&mut clique, next);
        });
    }

    fn record(&self, clique: &[usize]) {
        let mut w = self.witness.lock().expect("witness lock");
        if clique.len() > w.len() {
            *w = clique.to_vec();
            self.best.fetch_max(clique.len(), Ordering::Relaxed);
        }
    }

    /// Greedy sequential coloring; returns `(vertex, color)` by increasing
    /// color, skipping vertices whose color cannot beat `skip_below`.
    fn color(&self, p: &[u64], skip_below: usize) -> Vec<(usize, usize)> {
        let mut uncolored = p.to_vec();
        let mut out = Vec::new();
        let mut color = 0;
        while uncolored.iter().any(|&w| w != 0) {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = first_bit(&q) {
                q[v / 64] &= !(1 << (v % 64));
                uncolored[v / 64] &= !(1 << (v % 64));
                for (a, b) in q.iter_mut().zip(self.g.row(v)) {
                    *a &= !b;
                }
                if color >= skip_below {
                    out.push((v, color));
                }
            }
        }
        out
    }

    fn expand(&self, clique: &mut Vec<usize>, mut p: Vec<u64>) {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.stopped.store(true, Ordering::Relaxed);
            return;
        }
        if p.iter().all(|&w| w == 0) {
            if clique.len() > self.best.load(Ordering::Relaxed) {
                self.record(clique);
            }
            return;
        }
        let best = self.best.load(Ordering::Relaxed);
        let skip = (best + 1).saturating_sub(clique.len());
        let colored = self.color(&p, skip);
        for &(v, c) in colored.iter().rev() {
            if clique.len() + c <= self.best.load(Ordering::Relaxed) || self.stopped.load(Ordering::Relaxed) {
                return;
            }
            let next: Vec<u64> = p.iter().zip(self.g.row(v)).map(|(a, b)| a & b).collect();
            clique.push(v);
            self.expand(clique, next);
            clique.pop();
            p[v / 64] &= !(1 << (v % 64));
        }
    }
}

/// Clique number of `G_n`, fixing vertex 0 (the graph is vertex-transitive).
pub fn keller_clique_number(n: usize, budget: Option<u64>, threads: Option<usize>) -> Result<CliqueResult> {
    let g = build_keller_graph(n)?;
    max_clique_with(g.graph(), budget, threads, &[0])
}

/// Every clique of exactly `size` vertices.
pub fn cliques_of_size(graph: &Graph, size: usize) -> Vec<Vec<usize>> {
    fn go(g: &Graph, size: usize, cur: &mut Vec<usize>, cand: Vec<u64>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        let count: usize = cand.iter().map(|w| w.count_ones() as usize).sum();
        if cur.len() + count < size {
            return;
        }
        for v in bits(&cand).collect::<Vec<_>>() {
            // only later vertices, so each clique appears once in increasing order
            let next: Vec<u64> = cand
                .iter()
                .zip(g.row(v))
                .enumerate()
                .map(|(i, (a, b))| {
                    let above = if i * 64 + 63 <= v {
                        0
                    } else if i * 64 > v {
                        u64::MAX
                    } else {
                        u64::MAX << (v % 64) << 1
                    };
                    a & b & above
                })
                .collect();
            cur.push(v);
            go(g, size, cur, next, out);
            cur.pop();
        }
    }
    let mut all = vec![0u64; graph.words];
    for v in 0..graph.order() {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut out = Vec::new();
    if size == 0 {
        return vec![Vec::new()];
    }
    go(graph, size, &mut Vec::new(), all, &mut out);
    out
}

/// Outcome of checking that tilings are exactly the `2^n`-cliques of the
/// compatibility graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueTilingReport {
    pub n: usize,
    pub compatibility_cliques: usize,
    /// Cliques that are tilings (should be all of them).
    pub tiling_cliques: usize,
    /// Distinct types among the cliques.
    pub clique_types: usize,
    /// Types from the tiling enumeration.
    pub enumerated_types: usize,
    pub types_agree: bool,
    /// `2^n`-cliques of the Keller graph (tilings without facet-sharing pairs).
    pub keller_cliques: usize,
}

impl CliqueTilingReport {
    pub fn holds(&self) -> bool {
        self.compatibility_cliques == self.tiling_cliques && self.types_agree && self.keller_cliques == 0
    }
}

pub fn tilings_as_cliques(n: usize) -> Result<CliqueTilingReport> {
    check_dim(n, 3)?;
    let params = TorusParams::binary(n)?;
    let size = 1 << n;
    let compat = build_compatibility_graph(n)?;
    let keller = build_keller_graph(n)?;
    let cliques = cliques_of_size(compat.graph(), size);
    let mut tilings = 0;
    let mut types = BTreeSet::new();
    for c in &cliques {
        let cubes: Vec<CubePosition> = c.iter().map(|&v| CubePosition::new(params.coords_of(v), &params)).collect::<Result<_>>()?;
        if crate::model::is_tiling(&cubes, &params) {
            tilings += 1;
        }
        types.insert(canonical_points(&params, &cubes));
    }
    let enumerated: BTreeSet<Vec<CubePosition>> =
        enumerate_tilings(n)?.into_iter().map(|f| f.representative().to_vec()).collect();
    Ok(CliqueTilingReport {
        n,
        compatibility_cliques: cliques.len(),
        tiling_cliques: tilings,
        clique_types: types.len(),
        enumerated_types: enumerated.len(),
        types_agree: types == enumerated,
        keller_cliques: cliques_of_size(keller.graph(), size).len(),
    })
}

/// Writes `graph` in DIMACS edge format (1-indexed, each edge once).
pub fn export_dimacs(graph: &Graph, sink: &mut impl Write) -> Result<()> {
    writeln!(sink, "p edge {} {}", graph.order(), graph.edge_count())?;
    for (u, v) in graph.edges() {
        writeln!(sink, "e {} {}", u + 1, v + 1)?;
    }
    Ok(())
}

/// Streams `G_n` in DIMACS format without building it, for `n <= 7`.
pub fn export_keller_dimacs(n: usize, sink: &mut impl Write) -> Result<()> {
    check_dim(n, MAX_EXPORT_DIM)?;
    let order = 1usize << (2 * n);
    writeln!(sink, "c Keller graph G_{n}")?;
    writeln!(sink, "p edge {order} {}", KellerGraph::expected_edge_count(n))?;
    let mut line = String::new();
    for u in 0..order {
        line.clear();
        for v in u + 1..order {
            if keller_adjacent(u, v, n) {
                use std::fmt::Write as _;
                writeln!(line, "e {} {}", u + 1, v + 1).expect("writing to a string");
            }
        }
        sink.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Reads a DIMACS edge file; comment lines start with `c`.
pub fn import_dimacs(source: impl BufRead) -> Result<Graph> {
    let mut graph: Option<(Graph, usize)> = None;
    let mut seen = 0usize;
    let mut last = 0;
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        last = lineno;
        let err = |message: String| Error::Parse { line: lineno, message };
        let mut parts = line.split_whitespace();
        match parts.next() {
            None | Some("c") => {}
            Some("p") => {
                if graph.is_some() {
                    return Err(err("duplicate problem line".into()));
                }
                let kind = parts.next().ok_or_else(|| err("missing problem kind".into()))?;
                if kind != "edge" && kind != "col" {
                    return Err(err(format!("unsupported problem kind {kind:?}")));
                }
                let order: usize = number(parts.next(), "vertex count").map_err(err)?;
                let edges: usize = number(parts.next(), "edge count").map_err(err)?;
                if parts.next().is_some() {
                    return Err(err("trailing tokens on problem line".into()));
                }
                graph = Some((Graph::empty(order), edges));
            }
            Some("e") => {
                let (g, _) = graph.as_mut().ok_or_else(|| err("edge before problem line".into()))?;
                let u: usize = number(parts.next(), "endpoint").map_err(err)?;
                let v: usize = number(parts.next(), "endpoint").map_err(err)?;
                if parts.next().is_some() {
                    return Err(err("trailing tokens on edge line".into()));
                }
                if u == 0 || v == 0 || u > g.order() || v > g.order() {
                    return Err(err(format!("vertex out of range 1..={}", g.order())));
                }
                if u == v {
                    return Err(err(format!("self-loop at {u}")));
                }
                g.add_edge(u - 1, v - 1);
                seen += 1;
            }
            Some(other) => return Err(err(format!("unknown line type {other:?}"))),
        }
    }
    let (g, edges) = graph.ok_or(Error::Parse { line: last, message: "missing problem line".into() })?;
    if seen != edges {
        return Err(Error::Parse { line: last, message: format!("header declares {edges} edges, found {seen}") });
    }
    Ok(g)
}

fn number(token: Option<&str>, what: &str) -> std::result::Result<usize, String> {
    let t = token.ok_or_else(|| format!("missing {what}"))?;
    t.parse().map_err(|_| format!("invalid {what} {t:?}"))
}

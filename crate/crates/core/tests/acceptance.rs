//! Acceptance criteria 1 to 9. Each test writes one PASS/FAIL line straight to
//! stderr (visible without `--nocapture`) and then asserts.
//!
//! cargo test --release --test acceptance

mod common;

use std::collections::HashMap;
use std::io::Write;
use std::time::{Duration, Instant};

use cubepack::cli::{run, RunManifest};
use cubepack::continuous::{
    c_compatible, c_extensible, enumerate_continuous_tilings, enumerate_one_factorizations,
    packing_from_one_factorization, parameter_count, ContinuousPacking, OneFactorization,
};
use cubepack::keller::{
    build_compatibility_graph, build_keller_graph, cliques_of_size, export_dimacs, import_dimacs, max_clique,
};
use cubepack::random::{
    exact_terminal_distribution, explore_process_tree, simulate, to_f64, SimulationConfig, TerminalDistribution,
};
use cubepack::search::{
    apply_flip, classify_holes, enumerate_tilings, facet_pairs, flip_connectivity, min_blocking, min_nonextensible,
    BlockingSet, FlipMove,
};
use cubepack::{canonical_form, is_tiling, CanonicalForm, CubePosition, Packing, TorusParams};

fn report(id: u32, title: &str, failures: &[String], detail: String) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut line = format!("[acceptance] criterion {id} {status}: {title} ({detail})");
    for f in failures {
        line.push_str(&format!("\n    - {f}"));
    }
    let _ = writeln!(std::io::stderr(), "{line}");
    assert!(failures.is_empty(), "criterion {id} failed: {failures:?}");
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl Into<String>) {
    if !ok {
        failures.push(what.into());
    }
}

#[test]
fn criterion_1_tiling_types() {
    let mut fails = Vec::new();
    let mut detail = Vec::new();
    for (n, expected, limit) in [(2, 2, Duration::from_secs(1)), (3, 9, Duration::from_secs(1)), (4, 744, Duration::from_secs(600))] {
        let start = Instant::now();
        let count = enumerate_tilings(n).unwrap().len();
        let took = start.elapsed();
        check(&mut fails, count == expected, format!("n = {n}: {count} types, expected {expected}"));
        check(&mut fails, took < limit, format!("n = {n} took {took:.2?} (limit {limit:?})"));
        detail.push(format!("n={n}: {count} in {took:.2?}"));
    }
    // independent exact-cover oracle for the small cases
    for (n, expected) in [(2, 2), (3, 9)] {
        let naive = common::naive_types(&common::exact_cover_tilings(n), n, 2).len();
        check(&mut fails, naive == expected, format!("exact-cover oracle gives {naive} types for n = {n}"));
    }
    report(1, "tiling types 2 / 9 / 744", &fails, detail.join(", "));
}

#[test]
fn criterion_2_extremal_sizes() {
    let mut fails = Vec::new();
    let mut detail = Vec::new();
    for (n, f, h, limit) in [
        (2, 4, 3, Duration::from_secs(1)),
        (3, 4, 4, Duration::from_secs(1)),
        (4, 8, 7, Duration::from_secs(1800)),
    ] {
        let start = Instant::now();
        let mf = min_nonextensible(n).unwrap();
        let tf = start.elapsed();
        let start = Instant::now();
        let mh = min_blocking(n).unwrap();
        let th = start.elapsed();
        check(&mut fails, mf.value == f, format!("f({n}) = {}, expected {f}", mf.value));
        check(&mut fails, mh.value == h, format!("h({n}) = {}, expected {h}", mh.value));
        check(&mut fails, cubepack::free_positions(&mf.witness).is_empty(), format!("f({n}) witness is extensible"));
        check(&mut fails, mh.witness.is_blocking(), format!("h({n}) witness does not block"));
        check(&mut fails, tf < limit && th < limit, format!("n = {n} took {tf:.2?} / {th:.2?} (limit {limit:?})"));
        detail.push(format!("f({n})={} h({n})={} in {tf:.1?}/{th:.1?}", mf.value, mh.value));
    }
    report(2, "f(n) and h(n) for n <= 4", &fails, detail.join(", "));
}

#[test]
fn criterion_3_holes() {
    let mut fails = Vec::new();
    for n in 2..=4usize {
        for l in 1..=3usize {
            if l < 1 << n {
                let classes = classify_holes(n, l).unwrap();
                check(&mut fails, classes.is_empty(), format!("n = {n}, l = {l}: {} hole types", classes.len()));
            }
        }
    }
    let classes = classify_holes(3, 4).unwrap();
    check(&mut fails, classes.len() == 1, format!("n = 3, l = 4: {} types, expected 1", classes.len()));
    if let Some(c) = classes.first() {
        check(&mut fails, c.packings.len() == 1, format!("{} packing types behind the hole", c.packings.len()));
        let p = c.packings[0].to_packing();
        check(&mut fails, p.len() == 4, format!("packing has {} cubes", p.len()));
        check(&mut fails, p.density() == 0.5, format!("density {}", p.density()));
        check(&mut fails, c.cells.len() == 32, format!("hole has {} cells", c.cells.len()));
    }
    report(3, "holes empty for l <= 3, unique for n = 3, l = 4", &fails, "n <= 4".into());
}

#[test]
fn criterion_4_random_process() {
    let mut fails = Vec::new();
    for n in 1..=2 {
        let tree = explore_process_tree(&TorusParams::binary(n).unwrap()).unwrap();
        check(&mut fails, tree.all_tilings(), format!("n = {n}: non-tiling terminal in the process tree ({tree:?})"));
    }
    let params = TorusParams::binary(3).unwrap();
    let law = exact_terminal_distribution(&params).unwrap();
    check(&mut fails, law.total() == num_rational::BigRational::from_integer(1.into()), "probabilities do not sum to 1");
    let p4 = law.size_probability(4);
    check(&mut fails, to_f64(&p4) > 0.0, "the 4-cube type has probability 0");

    let trials = 100_000u64;
    let config = SimulationConfig::new(params, trials, 20240601, 4).unwrap();
    let mut counts: HashMap<CanonicalForm, u64> = HashMap::new();
    for p in simulate(&config).unwrap() {
        *counts.entry(canonical_form(&p)).or_insert(0) += 1;
    }
    let mut worst: f64 = 0.0;
    for (form, p) in law.entries() {
        let p = to_f64(p);
        let freq = *counts.get(form).unwrap_or(&0) as f64 / trials as f64;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        let z = (freq - p).abs() / se;
        worst = worst.max(z);
        check(&mut fails, z <= 3.0, format!("{}-cube type: simulated {freq:.5}, exact {p:.5} ({z:.2} SE)", form.len()));
    }
    check(&mut fails, counts.keys().all(|f| law.probability(f) > num_rational::BigRational::from_integer(0.into())), "simulation reached a type outside the exact support");
    report(
        4,
        "random process",
        &fails,
        format!("P(4 cubes) = {p4}, {} types, max deviation {worst:.2} SE over {trials} trials", law.len()),
    );
}

#[test]
fn criterion_5_keller() {
    let mut fails = Vec::new();
    let mut detail = Vec::new();
    let g1 = build_keller_graph(1).unwrap();
    check(&mut fails, g1.graph().edge_count() == 0, "G_1 has edges");
    for n in 2..=4usize {
        let g = build_keller_graph(n).unwrap();
        let start = Instant::now();
        let r = max_clique(g.graph(), None, None).unwrap();
        let took = start.elapsed();
        check(&mut fails, r.complete, format!("n = {n}: search incomplete"));
        check(&mut fails, r.size < 1 << n, format!("omega(G_{n}) = {} is not below {}", r.size, 1 << n));
        check(&mut fails, g.graph().is_clique(&r.witness), format!("n = {n}: witness is not a clique"));
        if n == 4 {
            check(&mut fails, took < Duration::from_secs(300), format!("n = 4 took {took:.2?}"));
        }
        detail.push(format!("omega(G_{n})={} in {took:.2?}", r.size));
    }
    for n in 1..=3usize {
        let params = TorusParams::binary(n).unwrap();
        let compat = build_compatibility_graph(n).unwrap();
        for c in cliques_of_size(compat.graph(), 1 << n) {
            let cubes: Vec<CubePosition> = c.iter().map(|&v| CubePosition::new(params.coords_of(v), &params).unwrap()).collect();
            check(&mut fails, is_tiling(&cubes, &params), format!("n = {n}: clique {c:?} is not a tiling"));
        }
        let keller = cliques_of_size(build_keller_graph(n).unwrap().graph(), 1 << n);
        check(&mut fails, keller.is_empty(), format!("G_{n} has {} cliques of size {}", keller.len(), 1 << n));
    }
    report(5, "Keller graph clique numbers below 2^n", &fails, detail.join(", "));
}

#[test]
fn criterion_6_flips() {
    let mut fails = Vec::new();
    let mut detail = Vec::new();
    for (n, nodes) in [(2, 2), (3, 9), (4, 744)] {
        let r = flip_connectivity(n).unwrap();
        check(&mut fails, r.node_count == nodes, format!("n = {n}: {} nodes, expected {nodes}", r.node_count));
        check(&mut fails, r.connected, format!("n = {n}: flip graph disconnected"));
        detail.push(format!("n={n}: {} nodes, {} edges", r.node_count, r.edge_count));
    }
    let mut flips = 0;
    for n in 1..=3 {
        for t in enumerate_tilings(n).unwrap() {
            let p = t.to_packing();
            for (i, j, axis) in facet_pairs(&p) {
                flips += 1;
                let q = apply_flip(&FlipMove::new(p.clone(), i, j, axis).unwrap());
                check(&mut fails, q.is_tiling(), format!("flip of {i},{j} on axis {axis} is not a tiling"));
            }
        }
    }
    detail.push(format!("{flips} flips checked"));
    report(6, "flip graph connected", &fails, detail.join(", "));
}

fn to_ccubes(p: &ContinuousPacking) -> Vec<common::CCube> {
    p.cubes().iter().map(|c| c.coords().iter().map(|x| (x.param, x.shift)).collect()).collect()
}

#[test]
fn criterion_7_continuous() {
    let mut fails = Vec::new();
    let start = Instant::now();
    let four = enumerate_continuous_tilings(4).unwrap().len();
    let took = start.elapsed();
    check(&mut fails, four == 32, format!("n = 4: {four} types, expected 32"));
    check(&mut fails, took < Duration::from_secs(600), format!("n = 4 took {took:.2?}"));
    let mut detail = vec![format!("n=4: {four} in {took:.1?}")];
    for n in 2..=3 {
        let lib = enumerate_continuous_tilings(n).unwrap();
        let terminals: Vec<_> = common::continuous_terminals_brute(n).into_iter().filter(|t| t.len() == 1 << n).collect();
        let oracle = common::continuous_classes(&terminals, n);
        check(&mut fails, lib.len() == oracle.len(), format!("n = {n}: {} types, oracle {}", lib.len(), oracle.len()));
        let distinct = lib.iter().all(|p| oracle.iter().filter(|r| common::continuous_isomorphic(r, &to_ccubes(p), n)).count() == 1);
        check(&mut fails, distinct, format!("n = {n}: types do not match oracle classes one to one"));
        detail.push(format!("n={n}: {} (oracle {})", lib.len(), oracle.len()));
    }
    report(7, "continuous tiling types", &fails, detail.join(", "));
}

#[test]
fn criterion_8_one_factorizations() {
    let mut fails = Vec::new();
    let mut counts = Vec::new();
    for (m, expected) in [(2, 1), (3, 1), (4, 6)] {
        let classes = enumerate_one_factorizations(m).unwrap();
        check(&mut fails, classes.len() == expected, format!("K_{}: {} classes, expected {expected}", 2 * m, classes.len()));
        counts.push(classes.len());
    }
    // brute-force orbit count for K_4 and K_6
    for (v, expected) in [(4, 1), (6, 1)] {
        let perms = common::all_permutations(v);
        let mut orbits = std::collections::BTreeSet::new();
        for f in common::labeled_one_factorizations(v) {
            orbits.insert(perms.iter().map(|p| common::relabel(&f, p)).min().unwrap());
        }
        check(&mut fails, orbits.len() == expected, format!("brute force finds {} classes for K_{v}", orbits.len()));
    }
    for m in [2, 3] {
        let n = 2 * m - 1;
        for f in enumerate_one_factorizations(m).unwrap() {
            let p = packing_from_one_factorization(&f).unwrap();
            let pairwise = p.cubes().iter().enumerate().all(|(i, a)| p.cubes()[i + 1..].iter().all(|b| c_compatible(a, b).unwrap()));
            check(&mut fails, pairwise, format!("n = {n}: cubes not pairwise compatible"));
            check(&mut fails, c_extensible(&p).is_none(), format!("n = {n}: packing is extensible"));
            check(&mut fails, p.len() == n + 1, format!("n = {n}: {} cubes", p.len()));
            let params = parameter_count(&p);
            check(&mut fails, params == n * (n + 1) / 2, format!("n = {n}: {params} parameters"));
        }
    }
    report(8, "one-factorizations 1 / 1 / 6", &fails, format!("counts {counts:?}"));
}

#[test]
fn criterion_9_determinism_and_round_trips() {
    let mut fails = Vec::new();
    let runs: [&[&str]; 3] = [
        &["simulate", "--n", "3", "--trials", "2000", "--seed", "99", "--workers", "1"],
        &["simulate", "--n", "2", "--N", "3", "--trials", "500", "--seed", "5", "--workers", "1", "--format", "csv"],
        &["exact-dist", "--n", "3"],
    ];
    for args in runs {
        let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
        let mut artifacts = Vec::new();
        for d in &dirs {
            let mut argv = vec!["cubepack"];
            argv.extend_from_slice(args);
            argv.extend_from_slice(&["--out", d.path().to_str().unwrap()]);
            check(&mut fails, run(argv) == 0, format!("{args:?} failed"));
            let m = RunManifest::from_json(&std::fs::read_to_string(d.path().join(format!("{}.manifest.json", args[0]))).unwrap()).unwrap();
            check(&mut fails, m.verify(d.path()).unwrap(), format!("{args:?}: manifest digest mismatch"));
            check(&mut fails, RunManifest::from_json(&m.to_json()).unwrap() == m, "manifest round trip");
            let bytes: Vec<Vec<u8>> = m.artifacts.iter().map(|a| std::fs::read(d.path().join(a)).unwrap()).collect();
            artifacts.push(bytes);
        }
        check(&mut fails, artifacts[0] == artifacts[1], format!("{args:?}: artifacts differ between runs"));
    }

    for n in 1..=3 {
        let g = build_keller_graph(n).unwrap();
        let mut text = Vec::new();
        export_dimacs(g.graph(), &mut text).unwrap();
        check(&mut fails, &import_dimacs(&text[..]).unwrap() == g.graph(), format!("DIMACS round trip of G_{n}"));
    }

    let params = TorusParams::binary(3).unwrap();
    let p = cubepack::random::simulate_one(&params, 3).unwrap();
    check(&mut fails, Packing::from_json(&p.to_json()).unwrap() == p, "packing JSON");
    let form = canonical_form(&p);
    check(&mut fails, CanonicalForm::from_json(&form.to_json()).unwrap() == form, "canonical form JSON");
    let law = exact_terminal_distribution(&params).unwrap();
    check(&mut fails, TerminalDistribution::from_json(&law.to_json()).unwrap() == law, "distribution JSON");
    let blocking = min_blocking(3).unwrap().witness;
    check(&mut fails, BlockingSet::from_json(&blocking.to_json()).unwrap() == blocking, "blocking set JSON");
    for c in enumerate_continuous_tilings(3).unwrap() {
        check(&mut fails, ContinuousPacking::from_json(&c.to_json()).unwrap() == c, "continuous packing JSON");
    }
    for f in enumerate_one_factorizations(4).unwrap() {
        check(&mut fails, OneFactorization::from_json(&f.to_json()).unwrap() == f, "one-factorization JSON");
    }
    report(9, "determinism and format round trips", &fails, "simulate/exact-dist artifacts, DIMACS, JSON".into());
}

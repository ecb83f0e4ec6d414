//! Sequential random packing: cubes are inserted at positions drawn uniformly
//! from the current free set until none is left.
//!
//! Drawing from the free set gives the same law over states as drawing from
//! all positions and rejecting overlaps, without the rejection loop.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`): the generator is seeded with
//! `seed_from_u64(seed)` and worker `w` uses stream `w`, so a run is
//! reproducible on any platform from `(seed, workers)`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CubePosition, Packing, TorusParams};
use crate::space::PosSet;
use crate::symmetry::{canonical_form, require_binary, shared_space, CanonicalForm};

/// Largest torus (in positions) the simulator will index.
pub const MAX_SIMULATION_POSITIONS: u64 = 1 << 22;

/// Monte Carlo run parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub params: TorusParams,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

impl SimulationConfig {
    pub fn new(params: TorusParams, trials: u64, seed: u64, workers: usize) -> Result<Self> {
        if trials == 0 {
            return Err(Error::usage("trials must be positive"));
        }
        if workers == 0 {
            return Err(Error::usage("workers must be positive"));
        }
        Ok(SimulationConfig { params, trials, seed, workers })
    }
}

/// Position table shared by the trials of one run.
struct Torus {
    params: TorusParams,
    coords: Vec<Vec<u32>>,
}

impl Torus {
    fn new(params: TorusParams) -> Result<Self> {
        let count = params.position_count_checked(MAX_SIMULATION_POSITIONS)?;
        Ok(Torus { params, coords: (0..count).map(|i| params.coords_of(i)).collect() })
    }

    fn compatible(&self, a: usize, b: usize) -> bool {
        let (side, scale) = (self.params.side(), self.params.scale());
        self.coords[a].iter().zip(&self.coords[b]).any(|(&x, &y)| (x + side - y) % side == scale)
    }

    /// One run of the process; returns the chosen position indices.
    fn run(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let mut free: Vec<usize> = (0..self.coords.len()).collect();
        let mut chosen = Vec::new();
        while !free.is_empty() {
            let v = free[rng.random_range(0..free.len())];
            chosen.push(v);
            free.retain(|&q| self.compatible(q, v));
        }
        chosen
    }

    fn packing(&self, chosen: &[usize]) -> Packing {
        let cubes = chosen.iter().map(|&i| CubePosition::from_raw(self.coords[i].clone())).collect();
        Packing::new(self.params, cubes).expect("the process only inserts compatible cubes")
    }
}

fn worker_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64);
    rng
}

/// A single terminal packing.
pub fn simulate_one(params: &TorusParams, seed: u64) -> Result<Packing> {
    let torus = Torus::new(*params)?;
    Ok(torus.packing(&torus.run(&mut worker_rng(seed, 0))))
}

/// Trials handled by each worker: contiguous blocks, earlier workers taking
/// the remainder.
fn split(trials: u64, workers: usize) -> Vec<u64> {
    let w = workers as u64;
    (0..w).map(|i| trials / w + u64::from(i < trials % w)).collect()
}

fn run_workers<T: Send>(config: &SimulationConfig, f: impl Fn(&Torus, &mut ChaCha8Rng, u64) -> T + Sync) -> Result<Vec<T>> {
    if config.trials == 0 || config.workers == 0 {
        return Err(Error::usage("trials and workers must be positive"));
    }
    let torus = Torus::new(config.params)?;
    let counts = split(config.trials, config.workers);
    let results = std::thread::scope(|scope| {
        let handles: Vec<_> = counts
            .iter()
            .enumerate()
            .map(|(w, &count)| {
                let (torus, f) = (&torus, &f);
                scope.spawn(move || f(torus, &mut worker_rng(config.seed, w), count))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    Ok(results)
}

/// Every terminal packing of a run, in worker order.
pub fn simulate(config: &SimulationConfig) -> Result<Vec<Packing>> {
    let per_worker = run_workers(config, |torus, rng, count| {
        (0..count).map(|_| torus.packing(&torus.run(rng))).collect::<Vec<_>>()
    })?;
    Ok(per_worker.into_iter().flatten().collect())
}

/// Aggregate statistics of terminal sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityStats {
    pub params: TorusParams,
    pub trials: u64,
    pub mean_density: f64,
    /// Unbiased sample variance of the density (0 for a single trial).
    pub var_density: f64,
    /// Terminal cube count to number of trials.
    pub histogram: BTreeMap<usize, u64>,
}

impl DensityStats {
    fn from_histogram(params: TorusParams, histogram: BTreeMap<usize, u64>) -> Self {
        let trials: u64 = histogram.values().sum();
        let full = params.max_cubes() as f64;
        let t = trials as f64;
        let mean = histogram.iter().map(|(&s, &c)| s as f64 / full * c as f64).sum::<f64>() / t;
        let var = if trials > 1 {
            histogram.iter().map(|(&s, &c)| (s as f64 / full - mean).powi(2) * c as f64).sum::<f64>() / (t - 1.0)
        } else {
            0.0
        };
        DensityStats { params, trials, mean_density: mean, var_density: var, histogram }
    }

    /// Standard error of the mean density.
    pub fn standard_error(&self) -> f64 {
        (self.var_density / self.trials as f64).sqrt()
    }

    /// Empirical frequency of a terminal size.
    pub fn frequency(&self, size: usize) -> f64 {
        *self.histogram.get(&size).unwrap_or(&0) as f64 / self.trials as f64
    }

    /// One row per histogram entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial_count,n,N,mean_density,var_density,size,size_count\n");
        for (size, count) in &self.histogram {
            writeln!(
                out,
                "{},{},{},{},{},{size},{count}",
                self.trials,
                self.params.dim(),
                self.params.scale(),
                self.mean_density,
                self.var_density
            )
            .expect("writing to a string");
        }
        out
    }
}

pub fn density_stats(config: &SimulationConfig) -> Result<DensityStats> {
    let per_worker = run_workers(config, |torus, rng, count| {
        let mut hist = BTreeMap::new();
        for _ in 0..count {
            *hist.entry(torus.run(rng).len()).or_insert(0u64) += 1;
        }
        hist
    })?;
    let mut histogram = BTreeMap::new();
    for hist in per_worker {
        for (size, count) in hist {
            *histogram.entry(size).or_insert(0) += count;
        }
    }
    Ok(DensityStats::from_histogram(config.params, histogram))
}

/// Exact law of the terminal type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminalDistribution {
    entries: BTreeMap<CanonicalForm, BigRational>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    #[serde(rename = "type")]
    form: CanonicalForm,
    prob_num: String,
    prob_den: String,
}

impl TerminalDistribution {
    pub fn entries(&self) -> impl Iterator<Item = (&CanonicalForm, &BigRational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn probability(&self, form: &CanonicalForm) -> BigRational {
        self.entries.get(form).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.entries.values().fold(BigRational::zero(), |acc, p| acc + p)
    }

    /// Probability that the terminal packing has `size` cubes.
    pub fn size_probability(&self, size: usize) -> BigRational {
        self.entries.iter().filter(|(f, _)| f.len() == size).fold(BigRational::zero(), |acc, (_, p)| acc + p)
    }

    pub fn expected_density(&self) -> BigRational {
        self.entries.iter().fold(BigRational::zero(), |acc, (f, p)| {
            let full = BigInt::from(f.params().max_cubes());
            acc + p * BigRational::new(BigInt::from(f.len()), full)
        })
    }

    pub fn to_json(&self) -> String {
        let list: Vec<EntryJson> = self
            .entries
            .iter()
            .map(|(form, p)| EntryJson { form: form.clone(), prob_num: p.numer().to_string(), prob_den: p.denom().to_string() })
            .collect();
        serde_json::to_string(&list).expect("distribution serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let list: Vec<EntryJson> = serde_json::from_str(text)?;
        let mut entries = BTreeMap::new();
        for e in list {
            let num: BigInt = e.prob_num.parse().map_err(|_| Error::usage(format!("bad numerator {:?}", e.prob_num)))?;
            let den: BigInt = e.prob_den.parse().map_err(|_| Error::usage(format!("bad denominator {:?}", e.prob_den)))?;
            if den.is_zero() {
                return Err(Error::usage("zero denominator"));
            }
            entries.insert(e.form, BigRational::new(num, den));
        }
        Ok(TerminalDistribution { entries })
    }
}

/// Exact terminal law for `N = 2`, `n <= 3`.
pub fn exact_terminal_distribution(params: &TorusParams) -> Result<TerminalDistribution> {
    exact_terminal_distribution_gated(params, false)
}

/// As [`exact_terminal_distribution`]; `allow_long` admits `n = 4`.
pub fn exact_terminal_distribution_gated(params: &TorusParams, allow_long: bool) -> Result<TerminalDistribution> {
    require_binary(params)?;
    let n = params.dim();
    if n == 4 && !allow_long {
        return Err(Error::capacity("the exact law for n = 4 is a long-running recursion; pass --allow-long"));
    }
    if n > 4 {
        return Err(Error::capacity(format!(
            "the exact law is computed for n <= 4 only (n = {n}); the n = 5 torus already has 899,710,227 tiling types"
        )));
    }
    Ok(crate::with_width!(n, exact(n)))
}

type Law<const W: usize> = HashMap<PosSet<W>, BigRational>;

fn exact<const W: usize>(n: usize) -> TerminalDistribution {
    let space = shared_space::<W>(n);
    let mut memo: HashMap<PosSet<W>, Law<W>> = HashMap::new();
    let law = terminal_law(space, PosSet::EMPTY, &mut memo);
    let entries = law
        .into_iter()
        .map(|(set, p)| (canonical_form(&space.packing_of(&set)), p))
        .collect();
    TerminalDistribution { entries }
}

/// Law of the terminal canonical state from canonical state `state`.
fn terminal_law<const W: usize>(
    space: &crate::space::Space<W>,
    state: PosSet<W>,
    memo: &mut HashMap<PosSet<W>, Law<W>>,
) -> Law<W> {
    if let Some(law) = memo.get(&state) {
        return law.clone();
    }
    let free = space.free(&state);
    let law = if free.is_empty() {
        HashMap::from([(state, BigRational::one())])
    } else {
        let elems = state.to_vec();
        let mut children: HashMap<PosSet<W>, u64> = HashMap::new();
        let mut next = elems.clone();
        for q in free.iter() {
            next.truncate(elems.len());
            next.push(q);
            *children.entry(space.canonical(&next)).or_insert(0) += 1;
        }
        let total = BigInt::from(free.len());
        let mut law: Law<W> = HashMap::new();
        for (child, count) in children {
            let weight = BigRational::new(BigInt::from(count), total.clone());
            for (terminal, p) in terminal_law(space, child, memo) {
                *law.entry(terminal).or_insert_with(BigRational::zero) += &weight * p;
            }
        }
        law
    };
    memo.insert(state, law.clone());
    law
}

/// Outcome of exploring every insertion sequence of the process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcessTree {
    /// Distinct packings reachable from the empty packing.
    pub states: usize,
    /// Distinct terminal packings.
    pub terminals: usize,
    /// Terminal packings that are tilings.
    pub tiling_terminals: usize,
}

impl ProcessTree {
    pub fn all_tilings(&self) -> bool {
        self.terminals == self.tiling_terminals
    }
}

/// Largest torus the process-tree explorer accepts, in positions.
pub const MAX_TREE_POSITIONS: u64 = 64;

/// Explores the full process tree (without symmetry reduction). Every node
/// of the tree is a packing, so it suffices to visit each reachable packing
/// once.
pub fn explore_process_tree(params: &TorusParams) -> Result<ProcessTree> {
    let torus = Torus::new(*params)?;
    if torus.coords.len() as u64 > MAX_TREE_POSITIONS {
        return Err(Error::capacity(format!(
            "process tree exploration is limited to {MAX_TREE_POSITIONS} positions ({} requested)",
            torus.coords.len()
        )));
    }
    let count = torus.coords.len();
    let compat: Vec<u64> = (0..count)
        .map(|a| (0..count).filter(|&b| torus.compatible(a, b)).fold(0u64, |m, b| m | 1 << b))
        .collect();
    let all = if count == 64 { u64::MAX } else { (1u64 << count) - 1 };
    let full = params.max_cubes() as u32;
    let mut seen: HashSet<u64> = HashSet::new();
    let mut stack = vec![(0u64, all)];
    let (mut terminals, mut tilings) = (0, 0);
    seen.insert(0);
    while let Some((set, free)) = stack.pop() {
        if free == 0 {
            terminals += 1;
            tilings += usize::from(set.count_ones() == full);
            continue;
        }
        let mut rest = free;
        while rest != 0 {
            let q = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let next = set | 1 << q;
            if seen.insert(next) {
                stack.push((next, free & compat[q]));
            }
        }
    }
    Ok(ProcessTree { states: seen.len(), terminals, tiling_terminals: tilings })
}

/// Floating-point view of an exact probability.
pub fn to_f64(p: &BigRational) -> f64 {
    p.numer().to_f64().unwrap_or(f64::NAN) / p.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::free_positions;

    #[test]
    fn low_dimensions_always_tile() {
        for n in 1..=2 {
            let params = TorusParams::binary(n).unwrap();
            for seed in 0..20 {
                let p = simulate_one(&params, seed).unwrap();
                assert!(p.is_tiling());
            }
        }
    }

    #[test]
    fn terminal_states_are_non_extensible() {
        let params = TorusParams::new(3, 3).unwrap();
        for seed in 0..10 {
            assert!(free_positions(&simulate_one(&params, seed).unwrap()).is_empty());
        }
    }

    #[test]
    fn zero_trials_is_a_usage_error() {
        let params = TorusParams::binary(1).unwrap();
        assert!(matches!(SimulationConfig::new(params, 0, 1, 1), Err(Error::Usage(_))));
        let bad = SimulationConfig { params, trials: 0, seed: 1, workers: 1 };
        assert!(matches!(density_stats(&bad), Err(Error::Usage(_))));
    }

    #[test]
    fn statistics_are_reproducible() {
        let params = TorusParams::binary(3).unwrap();
        let config = SimulationConfig::new(params, 500, 11, 3).unwrap();
        let a = density_stats(&config).unwrap();
        assert_eq!(a, density_stats(&config).unwrap());
        assert_eq!(a.histogram.values().sum::<u64>(), 500);
        assert!(a.histogram.keys().all(|&s| s == 4 || s == 8));
    }

    #[test]
    fn exact_law_in_dimension_one() {
        let d = exact_terminal_distribution(&TorusParams::binary(1).unwrap()).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.total(), BigRational::one());
    }

    #[test]
    fn distribution_json_round_trip() {
        let d = exact_terminal_distribution(&TorusParams::binary(2).unwrap()).unwrap();
        assert_eq!(TerminalDistribution::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn capacity_limits() {
        assert!(matches!(exact_terminal_distribution(&TorusParams::binary(4).unwrap()), Err(Error::Capacity(_))));
        assert!(matches!(exact_terminal_distribution(&TorusParams::new(2, 3).unwrap()), Err(Error::Usage(_))));
        assert!(matches!(explore_process_tree(&TorusParams::binary(4).unwrap()), Err(Error::Capacity(_))));
    }
}

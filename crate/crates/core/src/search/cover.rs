//! Depth-first covering search behind `f(n)`, `h(n)` and hole classification.
//!
//! A set `S` leaves no room for another cube exactly when every position is
//! incompatible with (or equal to) some member of `S`, so these problems are
//! covering problems: position `q` is covered by `b` when `q` is not
//! compatible with `b`. The search branches on the uncovered position with the
//! fewest remaining options; options tried earlier at a node are excluded from
//! its later siblings, so each set is visited at most once.

use crate::space::{PosSet, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Goal {
    /// Stop at the first cover.
    First,
    /// Collect every cover of exactly the target size.
    All,
}

pub(crate) struct CoverSearch<'a, const W: usize> {
    space: &'a Space<W>,
    /// Members must be pairwise compatible.
    packing: bool,
    /// Maximum (and, for [`Goal::All`], exact) size.
    target: usize,
    goal: Goal,
    /// Replace an option by one covering a superset of the uncovered positions.
    dominance: bool,
    /// Upper bound on uncovered cells at the end (packings only).
    hole_cells: Option<usize>,
    blocked: Vec<PosSet<W>>,
    excluded: PosSet<W>,
    pub nodes: u64,
    pub found: Vec<Vec<usize>>,
}

impl<'a, const W: usize> CoverSearch<'a, W> {
    pub fn new(space: &'a Space<W>, packing: bool, target: usize, goal: Goal) -> Self {
        let blocked = (0..space.size()).map(|p| space.blocked_by(p)).collect();
        CoverSearch {
            space,
            packing,
            target,
            goal,
            dominance: false,
            hole_cells: None,
            blocked,
            excluded: PosSet::EMPTY,
            nodes: 0,
            found: Vec::new(),
        }
    }

    pub fn with_dominance(mut self) -> Self {
        self.dominance = true;
        self
    }

    pub fn with_hole_cells(mut self, cells: usize) -> Self {
        self.hole_cells = Some(cells);
        self
    }

    /// Positions that may not be added.
    pub fn exclude(&mut self, positions: impl IntoIterator<Item = usize>) {
        for p in positions {
            self.excluded.insert(p);
        }
    }

    /// Runs from the given seed members (pairwise compatible when packing).
    pub fn run(&mut self, seed: &[usize]) -> bool {
        let mut chosen = seed.to_vec();
        let all = self.space.all();
        let mut covered = PosSet::EMPTY;
        let mut allowed = all;
        let mut cells = PosSet::EMPTY;
        for &b in seed {
            covered = covered.or(&self.blocked[b]);
            if self.packing {
                allowed = allowed.and(self.space.compat(b));
                cells = cells.or(self.space.footprint(b));
            }
        }
        self.descend(&mut chosen, covered, allowed, self.excluded, cells)
    }

    fn descend(
        &mut self,
        chosen: &mut Vec<usize>,
        covered: PosSet<W>,
        allowed: PosSet<W>,
        mut excluded: PosSet<W>,
        cells: PosSet<W>,
    ) -> bool {
        self.nodes += 1;
        let all = self.space.all();
        if covered == all {
            if self.goal == Goal::First || chosen.len() == self.target {
                self.found.push(chosen.clone());
                return self.goal == Goal::First;
            }
            return false;
        }
        if chosen.len() >= self.target {
            return false;
        }
        let remaining = self.target - chosen.len();
        let uncovered = all.and_not(&covered);
        let candidates = allowed.and_not(&excluded);

        if let Some(limit) = self.hole_cells {
            // cells that no candidate can fill stay in the hole
            let reach = candidates.iter().fold(cells, |acc, q| acc.or(self.space.footprint(q)));
            if all.and_not(&reach).len() > limit {
                return false;
            }
        }

        let mut max_gain = 0;
        for b in candidates.iter() {
            max_gain = max_gain.max(self.blocked[b].and(&uncovered).len());
        }
        if uncovered.len() > remaining * max_gain {
            return false;
        }

        // most constrained uncovered position
        let mut pick: Option<(usize, PosSet<W>)> = None;
        for u in uncovered.iter() {
            let opts = self.blocked[u].and(&candidates);
            let count = opts.len();
            if count == 0 {
                return false;
            }
            if pick.as_ref().is_none_or(|(c, _)| count < *c) {
                pick = Some((count, opts));
                if count == 1 {
                    break;
                }
            }
        }
        let (_, options) = pick.expect("uncovered is nonempty");

        let gains: Vec<(usize, PosSet<W>)> =
            options.iter().map(|b| (b, self.blocked[b].and(&uncovered))).collect();
        for (i, &(b, gain)) in gains.iter().enumerate() {
            if self.dominance
                && gains
                    .iter()
                    .enumerate()
                    .any(|(j, (_, other))| j != i && gain.is_subset(other) && (gain != *other || j < i))
            {
                // a dominating option reaches every solution this one would
                continue;
            }
            chosen.push(b);
            let (next_allowed, next_cells) = if self.packing {
                (allowed.and(self.space.compat(b)), cells.or(self.space.footprint(b)))
            } else {
                (allowed, cells)
            };
            let done = self.descend(chosen, covered.or(&self.blocked[b]), next_allowed, excluded, next_cells);
            chosen.pop();
            if done {
                return true;
            }
            excluded.insert(b);
        }
        false
    }
}

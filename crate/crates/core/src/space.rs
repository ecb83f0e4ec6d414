//! Bit-parallel machinery for the `N = 2` torus `(Z/4Z)^n`.
//!
//! A position is packed two bits per coordinate, first coordinate in the most
//! significant lane, so the packed value equals the lexicographic index used by
//! [`TorusParams::index_of`]. Sets of positions (and sets of cells, which use
//! the same encoding) are fixed-width bitsets.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{CubePosition, Packing, TorusParams};

/// Largest dimension with a bit-parallel representation.
pub const MAX_FAST_DIM: usize = 6;
/// Largest dimension for which point-group tables are built.
pub const MAX_TABLE_DIM: usize = 5;

/// Fixed-width bitset over `64 * W` positions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosSet<const W: usize>(pub [u64; W]);

impl<const W: usize> Default for PosSet<W> {
    fn default() -> Self {
        Self::EMPTY
    }
}

impl<const W: usize> PosSet<W> {
    pub const EMPTY: Self = PosSet([0; W]);

    /// The first `count` positions.
    pub fn prefix(count: usize) -> Self {
        let mut s = Self::EMPTY;
        for (w, word) in s.0.iter_mut().enumerate() {
            let lo = w * 64;
            if count >= lo + 64 {
                *word = u64::MAX;
            } else if count > lo {
                *word = (1u64 << (count - lo)) - 1;
            }
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i >> 6] |= 1u64 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0[i >> 6] &= !(1u64 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn and(&self, other: &Self) -> Self {
        let mut r = *self;
        r.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a &= b);
        r
    }

    #[inline]
    pub fn or(&self, other: &Self) -> Self {
        let mut r = *self;
        r.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a |= b);
        r
    }

    #[inline]
    pub fn and_not(&self, other: &Self) -> Self {
        let mut r = *self;
        r.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a &= !b);
        r
    }

    #[inline]
    pub fn intersects(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    #[inline]
    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    /// Smallest element.
    #[inline]
    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Positions strictly greater than `i`.
    #[inline]
    pub fn above(i: usize) -> Self {
        let mut s = Self::EMPTY;
        let (w, b) = (i >> 6, i & 63);
        if b < 63 {
            s.0[w] = u64::MAX << (b + 1);
        }
        for word in s.0.iter_mut().skip(w + 1) {
            *word = u64::MAX;
        }
        s
    }

    /// Compares as sorted element lists of equal length: the set holding the
    /// smallest element of the symmetric difference is the smaller one.
    #[inline]
    pub fn lex_less(&self, other: &Self) -> bool {
        for (a, b) in self.0.iter().zip(&other.0) {
            let x = a ^ b;
            if x != 0 {
                return a & (x & x.wrapping_neg()) != 0;
            }
        }
        false
    }

    pub fn iter(&self) -> PosIter<'_, W> {
        PosIter { set: self, word: 0, bits: self.0[0] }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl<const W: usize> FromIterator<usize> for PosSet<W> {
    fn from_iter<I: IntoIterator<Item = usize>>(items: I) -> Self {
        let mut s = Self::EMPTY;
        for i in items {
            s.insert(i);
        }
        s
    }
}

impl<const W: usize> fmt::Debug for PosSet<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct PosIter<'a, const W: usize> {
    set: &'a PosSet<W>,
    word: usize,
    bits: u64,
}

impl<const W: usize> Iterator for PosIter<'_, W> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.bits != 0 {
                let b = self.bits.trailing_zeros() as usize;
                self.bits &= self.bits - 1;
                return Some(self.word * 64 + b);
            }
            self.word += 1;
            if self.word >= W {
                return None;
            }
            self.bits = self.set.0[self.word];
        }
    }
}

/// Word count used for dimension `n`.
pub fn words_for(n: usize) -> usize {
    match n {
        0..=3 => 1,
        4 => 4,
        5 => 16,
        _ => 64,
    }
}

/// Calls a function generic over the bitset width appropriate for `n`.
#[macro_export]
#[doc(hidden)]
macro_rules! with_width {
    ($n:expr, $func:ident ( $($arg:expr),* $(,)? )) => {
        match $n {
            0..=3 => $func::<1>($($arg),*),
            4 => $func::<4>($($arg),*),
            5 => $func::<16>($($arg),*),
            _ => $func::<64>($($arg),*),
        }
    };
}

/// An element of the point group: `x_{perm[i]} <- ±x_i` with the sign taken
/// from bit `i` of `negate`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointOp {
    pub perm: Vec<usize>,
    pub negate: u32,
}

/// Precomputed tables for `(Z/4Z)^n`, `n <= 6`.
pub struct Space<const W: usize> {
    n: usize,
    size: usize,
    lo: usize,
    compat: Vec<PosSet<W>>,
    footprint: Vec<PosSet<W>>,
    point_ops: Vec<PointOp>,
    tables: Vec<Vec<u16>>,
}

impl<const W: usize> Space<W> {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_FAST_DIM {
            return Err(Error::capacity(format!(
                "bit-parallel torus supports 1 <= n <= {MAX_FAST_DIM}, got {n}"
            )));
        }
        assert!(words_for(n) == W, "width {W} does not match dimension {n}");
        let size = 1usize << (2 * n);
        let lo = (0..n).fold(0usize, |m, i| m | 1 << (2 * i));
        let mut space = Space {
            n,
            size,
            lo,
            compat: Vec::with_capacity(size),
            footprint: Vec::with_capacity(size),
            point_ops: Vec::new(),
            tables: Vec::new(),
        };
        for p in 0..size {
            let compat = PosSet::from_iter((0..size).filter(|&q| space.compatible(p, q)));
            space.compat.push(compat);
            let foot = PosSet::from_iter((0..1usize << n).map(|mask| {
                let delta = (0..n).fold(0usize, |d, i| d | (mask >> i & 1) << (2 * i));
                space.add(p, delta)
            }));
            space.footprint.push(foot);
        }
        if n <= MAX_TABLE_DIM {
            space.point_ops = point_ops(n);
            space.tables = space
                .point_ops
                .iter()
                .map(|op| (0..size).map(|p| space.apply_op(op, p) as u16).collect())
                .collect();
        }
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn params(&self) -> TorusParams {
        TorusParams::binary(self.n).expect("valid dimension")
    }

    /// Lane-wise addition modulo 4.
    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        (a ^ b) ^ ((a & b & self.lo) << 1)
    }

    /// Lane-wise negation modulo 4.
    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        a ^ ((a & self.lo) << 1)
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Some lane of `a - b` equals 2.
    #[inline]
    pub fn compatible(&self, a: usize, b: usize) -> bool {
        let x = a ^ b;
        (x & !(x << 1)) & (self.lo << 1) != 0
    }

    /// Positions compatible with `p` (never contains `p`).
    #[inline]
    pub fn compat(&self, p: usize) -> &PosSet<W> {
        &self.compat[p]
    }

    /// Cells covered by the cube at `p`.
    #[inline]
    pub fn footprint(&self, p: usize) -> &PosSet<W> {
        &self.footprint[p]
    }

    pub fn all(&self) -> PosSet<W> {
        PosSet::prefix(self.size)
    }

    /// Positions incompatible with `p`, including `p` itself.
    pub fn blocked_by(&self, p: usize) -> PosSet<W> {
        self.all().and_not(&self.compat[p])
    }

    pub fn coord(&self, p: usize, axis: usize) -> usize {
        p >> (2 * (self.n - 1 - axis)) & 3
    }

    pub fn with_coord(&self, p: usize, axis: usize, value: usize) -> usize {
        let shift = 2 * (self.n - 1 - axis);
        (p & !(3 << shift)) | (value & 3) << shift
    }

    /// Unit step along `axis`.
    pub fn unit(&self, axis: usize) -> usize {
        1 << (2 * (self.n - 1 - axis))
    }

    pub fn apply_op(&self, op: &PointOp, p: usize) -> usize {
        let mut out = 0;
        for i in 0..self.n {
            let mut c = self.coord(p, i);
            if op.negate >> i & 1 == 1 {
                c = (4 - c) & 3;
            }
            out = self.with_coord(out, op.perm[i], c);
        }
        out
    }

    pub fn point_ops(&self) -> &[PointOp] {
        &self.point_ops
    }

    pub fn has_tables(&self) -> bool {
        !self.tables.is_empty()
    }

    pub fn table(&self, g: usize) -> &[u16] {
        &self.tables[g]
    }

    pub fn to_position(&self, p: usize) -> CubePosition {
        CubePosition::from_raw((0..self.n).map(|i| self.coord(p, i) as u32).collect())
    }

    pub fn from_position(&self, v: &CubePosition) -> usize {
        self.params().index_of(v.coords())
    }

    pub fn set_of(&self, p: &Packing) -> PosSet<W> {
        PosSet::from_iter(p.cubes().iter().map(|c| self.from_position(c)))
    }

    /// Wraps a set already known to be pairwise compatible.
    pub fn packing_of(&self, set: &PosSet<W>) -> Packing {
        Packing::from_sorted_unchecked(self.params(), set.iter().map(|p| self.to_position(p)).collect())
    }

    /// Positions compatible with every member of `set`.
    pub fn free(&self, set: &PosSet<W>) -> PosSet<W> {
        set.iter().fold(self.all(), |acc, p| acc.and(&self.compat[p]))
    }

    /// Lexicographically smallest image of `elems` under translations and the
    /// point group.
    pub fn canonical(&self, elems: &[usize]) -> PosSet<W> {
        assert!(self.has_tables(), "no point-group tables for n = {}", self.n);
        let mut best: Option<PosSet<W>> = None;
        let mut img = Vec::with_capacity(elems.len());
        for table in &self.tables {
            img.clear();
            img.extend(elems.iter().map(|&p| table[p] as usize));
            for &s in &img {
                let t = self.neg(s);
                let mut b = PosSet::EMPTY;
                for &y in &img {
                    b.insert(self.add(y, t));
                }
                match &best {
                    Some(cur) if !b.lex_less(cur) => {}
                    _ => best = Some(b),
                }
            }
        }
        best.unwrap_or(PosSet::EMPTY)
    }

    /// Whether `set` (with members `elems`) is the lexicographically smallest
    /// member of its orbit.
    pub fn is_canonical(&self, elems: &[usize], set: &PosSet<W>) -> bool {
        if elems.is_empty() {
            return true;
        }
        if !set.contains(0) {
            return false;
        }
        let mut img = Vec::with_capacity(elems.len());
        for table in &self.tables {
            img.clear();
            img.extend(elems.iter().map(|&p| table[p] as usize));
            for &s in &img {
                let t = self.neg(s);
                let mut b = PosSet::EMPTY;
                for &y in &img {
                    b.insert(self.add(y, t));
                }
                if b.lex_less(set) {
                    return false;
                }
            }
        }
        true
    }

    /// Number of group elements (translations times point group) fixing `set`.
    pub fn stabilizer_order(&self, elems: &[usize], set: &PosSet<W>) -> usize {
        let mut count = 0;
        let mut img = Vec::with_capacity(elems.len());
        for table in &self.tables {
            img.clear();
            img.extend(elems.iter().map(|&p| table[p] as usize));
            if elems.is_empty() {
                count += self.size;
                continue;
            }
            // a translation fixing the set maps img[0] onto some member
            for t0 in set.iter() {
                let t = self.sub(t0, img[0]);
                if img.iter().all(|&y| set.contains(self.add(y, t))) {
                    count += 1;
                }
            }
        }
        count
    }
}

/// All `n! * 2^n` signed permutations, identity first.
pub fn point_ops(n: usize) -> Vec<PointOp> {
    let mut perms = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    permutations(&mut current, 0, &mut perms);
    perms.sort();
    let mut ops = Vec::with_capacity(perms.len() << n);
    for perm in perms {
        for negate in 0..1u32 << n {
            ops.push(PointOp { perm: perm.clone(), negate });
        }
    }
    ops
}

fn permutations(current: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == current.len() {
        out.push(current.clone());
        return;
    }
    for i in k..current.len() {
        current.swap(k, i);
        permutations(current, k + 1, out);
        current.swap(k, i);
    }
}

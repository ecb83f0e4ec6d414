//! The symmetry group of the torus and canonical forms of point sets.
//!
//! The group is generated by all translations, coordinate permutations and
//! coordinate reflections `x_i -> -x_i`; its order is `(2N)^n * n! * 2^n`.
//! A canonical form is the lexicographically smallest sorted image of a set
//! over the whole group.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CubePosition, Packing, PackingJson, TorusParams};
use crate::space::{self, PointOp, Space, MAX_TABLE_DIM};

/// Tag written next to serialized canonical forms.
pub const GROUP_TAG: &str = "translations+permutations+reflections";

/// A group element `v -> op(v) + translation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub op: PointOp,
    pub translation: Vec<u32>,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement { op: PointOp { perm: (0..n).collect(), negate: 0 }, translation: vec![0; n] }
    }

    pub fn apply(&self, v: &CubePosition, params: &TorusParams) -> CubePosition {
        let side = params.side();
        let mut out = vec![0u32; v.dim()];
        for (i, &c) in v.coords().iter().enumerate() {
            let c = if self.op.negate >> i & 1 == 1 { (side - c) % side } else { c };
            let j = self.op.perm[i];
            out[j] = (c + self.translation[j]) % side;
        }
        CubePosition::from_raw(out)
    }

    /// Group order `(2N)^n * n! * 2^n`, if it fits in a `u64`.
    pub fn group_order(params: &TorusParams) -> Option<u64> {
        let n = params.dim() as u64;
        let fact: u64 = (1..=n).product();
        params.position_count()?.checked_mul(fact)?.checked_mul(1 << n)
    }

    /// Every group element; only sensible for tiny tori.
    pub fn all(params: &TorusParams) -> Vec<GroupElement> {
        let n = params.dim();
        let mut out = Vec::new();
        for op in space::point_ops(n) {
            for t in params.positions() {
                out.push(GroupElement { op: op.clone(), translation: t.coords().to_vec() });
            }
        }
        out
    }
}

/// Orbit representative of a packing; equality of canonical forms is
/// equality of type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    params: TorusParams,
    representative: Vec<CubePosition>,
}

impl CanonicalForm {
    pub fn params(&self) -> &TorusParams {
        &self.params
    }

    pub fn representative(&self) -> &[CubePosition] {
        &self.representative
    }

    pub fn len(&self) -> usize {
        self.representative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representative.is_empty()
    }

    pub fn group(&self) -> &'static str {
        GROUP_TAG
    }

    /// The representative as a packing. Only valid when the form was built
    /// from a packing (not from a cell set).
    pub fn to_packing(&self) -> Packing {
        Packing::from_sorted_unchecked(self.params, self.representative.clone())
    }

    pub(crate) fn from_sorted(params: TorusParams, representative: Vec<CubePosition>) -> Self {
        CanonicalForm { params, representative }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("canonical form serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
struct CanonicalJson {
    n: usize,
    #[serde(rename = "N")]
    scale: u32,
    cubes: Vec<Vec<u32>>,
    group: String,
}

impl Serialize for CanonicalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CanonicalJson {
            n: self.params.dim(),
            scale: self.params.scale(),
            cubes: self.representative.iter().map(|c| c.coords().to_vec()).collect(),
            group: GROUP_TAG.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CanonicalForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CanonicalJson::deserialize(d)?;
        if raw.group != GROUP_TAG {
            return Err(D::Error::custom(format!("unknown group tag {:?}", raw.group)));
        }
        let p = Packing::try_from(PackingJson { n: raw.n, scale: raw.scale, cubes: raw.cubes })
            .map_err(D::Error::custom)?;
        let form = canonical_form(&p);
        if form.representative != p.cubes() {
            return Err(D::Error::custom("cube list is not a canonical representative"));
        }
        Ok(form)
    }
}

/// Canonical form of a packing.
pub fn canonical_form(p: &Packing) -> CanonicalForm {
    CanonicalForm { params: *p.params(), representative: canonical_points(p.params(), p.cubes()) }
}

/// Lexicographically smallest sorted image of an arbitrary point set (cube
/// positions or cells) under the group.
pub fn canonical_points(params: &TorusParams, points: &[CubePosition]) -> Vec<CubePosition> {
    if params.scale() == 2 && params.dim() <= MAX_TABLE_DIM {
        return crate::with_width!(params.dim(), fast_canonical(params.dim(), points));
    }
    canonical_points_generic(params, points)
}

fn fast_canonical<const W: usize>(n: usize, points: &[CubePosition]) -> Vec<CubePosition> {
    let space = shared_space::<W>(n);
    let elems: Vec<usize> = points.iter().map(|c| space.from_position(c)).collect();
    let best = space.canonical(&elems);
    best.iter().map(|p| space.to_position(p)).collect()
}

/// Direct minimization over the group, valid for any scale.
pub fn canonical_points_generic(params: &TorusParams, points: &[CubePosition]) -> Vec<CubePosition> {
    if points.is_empty() {
        return Vec::new();
    }
    let n = params.dim();
    let side = params.side();
    let mut best: Option<Vec<CubePosition>> = None;
    for op in space::point_ops(n) {
        let g = GroupElement { op, translation: vec![0; n] };
        let img: Vec<CubePosition> = points.iter().map(|c| g.apply(c, params)).collect();
        for s in &img {
            let mut cand: Vec<CubePosition> = img
                .iter()
                .map(|y| {
                    CubePosition::from_raw(
                        y.coords().iter().zip(s.coords()).map(|(&a, &b)| (a + side - b) % side).collect(),
                    )
                })
                .collect();
            cand.sort();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// A lazily built, process-wide [`Space`] per dimension.
pub(crate) fn shared_space<const W: usize>(n: usize) -> &'static Space<W> {
    use std::any::Any;
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};

    static CACHE: OnceLock<Mutex<HashMap<usize, &'static (dyn Any + Send + Sync)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("space cache poisoned");
    let entry = guard.entry(n).or_insert_with(|| {
        let space: &'static Space<W> = Box::leak(Box::new(Space::<W>::new(n).expect("supported dimension")));
        space
    });
    entry.downcast_ref::<Space<W>>().expect("width matches dimension")
}

pub(crate) fn require_binary(params: &TorusParams) -> Result<()> {
    if params.scale() != 2 {
        return Err(Error::usage("this operation is defined for N = 2 only"));
    }
    Ok(())
}

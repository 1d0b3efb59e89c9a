//! Bounded support: the full subcategory of Θ^n on shapes with entries `<= d`,
//! with every hom-set, composition and face factorisation tabulated by index.
//!
//! Everything downstream (presheaves, complexes, maps) addresses shapes by
//! [`ShapeId`] and morphisms by their position [`MorphId`] in the sorted
//! hom-set of a `(source, target)` pair.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theta::{self, MonotoneMap, ThetaMorphism, ThetaShape};

pub type ShapeId = usize;
pub type MorphId = u32;

/// Which boundary a cell of a given shape is attached along.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryMode {
    /// The free boundary ∂(M): images of the faces `M̂ -> M`.
    Free,
    /// Classical simplicial boundary of `Δ^m` (n = 1 only, experimental).
    Full,
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryMode::Free => write!(f, "free"),
            BoundaryMode::Full => write!(f, "full"),
        }
    }
}

/// A face `F -> M` of a cell shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Face {
    pub source: ShapeId,
    pub morphism: MorphId,
}

/// Attachment elements `x_i`, `x_j` must satisfy `x_i|along_i == x_j|along_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub i: usize,
    pub j: usize,
    pub level: ShapeId,
    pub along_i: MorphId,
    pub along_j: MorphId,
}

#[derive(Clone, Debug, Default)]
pub struct ShapeFaces {
    pub faces: Vec<Face>,
    pub constraints: Vec<Constraint>,
}

pub struct Support {
    n: usize,
    d: u32,
    mode: BoundaryMode,
    shapes: Vec<ThetaShape>,
    ids: HashMap<Vec<u32>, ShapeId>,
    homs: Vec<Vec<ThetaMorphism>>,
    lookup: Vec<HashMap<ThetaMorphism, MorphId>>,
    identity: Vec<MorphId>,
    faces: Vec<ShapeFaces>,
    factor: Vec<Vec<Option<(u32, MorphId)>>>,
    interior: Vec<Vec<MorphId>>,
    interior_rank: Vec<Vec<Option<u32>>>,
    compose_cache: Vec<OnceLock<Vec<MorphId>>>,
}

impl fmt::Debug for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Support")
            .field("n", &self.n)
            .field("d", &self.d)
            .field("mode", &self.mode)
            .field("shapes", &self.shapes.len())
            .finish()
    }
}

const MAX_HOM_TOTAL: usize = 200_000;

static SHARED: OnceLock<Mutex<HashMap<(usize, u32, BoundaryMode), Arc<Support>>>> = OnceLock::new();

impl Support {
    /// The process-wide support for `(n, d, mode)`, built on first use.
    pub fn shared(n: usize, d: u32, mode: BoundaryMode) -> Result<Arc<Support>> {
        let cache = SHARED.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(s) = cache.lock().unwrap().get(&(n, d, mode)) {
            return Ok(s.clone());
        }
        let built = Arc::new(Support::build(n, d, mode)?);
        let mut guard = cache.lock().unwrap();
        Ok(guard.entry((n, d, mode)).or_insert(built).clone())
    }

    fn build(n: usize, d: u32, mode: BoundaryMode) -> Result<Support> {
        if !(1..=3).contains(&n) {
            return Err(Error::Config(format!("n = {n} is outside the supported range 1..=3")));
        }
        if d == 0 {
            return Err(Error::Config("degree bound must be at least 1".into()));
        }
        if mode == BoundaryMode::Full && n != 1 {
            return Err(Error::Config("the full boundary mode is only defined for n = 1".into()));
        }
        let shapes = theta::enumerate_shapes(n, d);
        let s = shapes.len();
        let ids = shapes
            .iter()
            .enumerate()
            .map(|(i, sh)| (sh.entries().to_vec(), i))
            .collect();
        let mut homs = Vec::with_capacity(s * s);
        let mut total = 0usize;
        for src in &shapes {
            for tgt in &shapes {
                let h = theta::hom_set(src, tgt)?;
                total += h.len();
                if total > MAX_HOM_TOTAL {
                    return Err(Error::BoundTooLarge(format!(
                        "the support for n = {n}, d = {d} has more than {MAX_HOM_TOTAL} morphisms"
                    )));
                }
                homs.push(h);
            }
        }
        let lookup: Vec<HashMap<ThetaMorphism, MorphId>> = homs
            .iter()
            .map(|h| h.iter().enumerate().map(|(i, a)| (a.clone(), i as MorphId)).collect())
            .collect();
        let identity = shapes
            .iter()
            .enumerate()
            .map(|(i, sh)| lookup[i * s + i][&ThetaMorphism::identity(sh)])
            .collect();

        let mut support = Support {
            n,
            d,
            mode,
            shapes,
            ids,
            homs,
            lookup,
            identity,
            faces: Vec::new(),
            factor: Vec::new(),
            interior: Vec::new(),
            interior_rank: Vec::new(),
            compose_cache: (0..s * s * s).map(|_| OnceLock::new()).collect(),
        };
        support.faces = (0..s).map(|m| support.build_faces(m)).collect::<Result<_>>()?;
        support.faces = (0..s)
            .map(|m| {
                let mut f = support.faces[m].clone();
                f.constraints = support.face_constraints(m, &f.faces);
                f
            })
            .collect();
        let (factor, interior, interior_rank) = support.build_factorisations();
        support.factor = factor;
        support.interior = interior;
        support.interior_rank = interior_rank;
        Ok(support)
    }

    fn build_faces(&self, m: ShapeId) -> Result<ShapeFaces> {
        let shape = &self.shapes[m];
        if shape.is_point() {
            return Ok(ShapeFaces::default());
        }
        let morphisms = match self.mode {
            BoundaryMode::Full if shape.entries()[0] >= 2 => simplicial_faces(shape),
            _ => theta::faces(shape)?,
        };
        let faces = morphisms
            .into_iter()
            .map(|a| {
                let source = self.shape_id(a.source())?;
                Ok(Face {
                    source,
                    morphism: self.morph_id(source, m, &a)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(ShapeFaces {
            faces,
            constraints: Vec::new(),
        })
    }

    /// Pairs of faces-of-faces that land on the same element of the cell.
    fn face_constraints(&self, m: ShapeId, faces: &[Face]) -> Vec<Constraint> {
        let mut out = Vec::new();
        for i in 0..faces.len() {
            for j in i + 1..faces.len() {
                let (fi, fj) = (faces[i], faces[j]);
                for bi in &self.faces[fi.source].faces {
                    for bj in &self.faces[fj.source].faces {
                        if bi.source != bj.source {
                            continue;
                        }
                        let left = self.compose_idx(bi.source, fi.source, m, bi.morphism, fi.morphism);
                        let right = self.compose_idx(bj.source, fj.source, m, bj.morphism, fj.morphism);
                        if left == right {
                            out.push(Constraint {
                                i,
                                j,
                                level: bi.source,
                                along_i: bi.morphism,
                                along_j: bj.morphism,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    #[allow(clippy::type_complexity)]
    fn build_factorisations(&self) -> (Vec<Vec<Option<(u32, MorphId)>>>, Vec<Vec<MorphId>>, Vec<Vec<Option<u32>>>) {
        let s = self.shapes.len();
        let mut factor = Vec::with_capacity(s * s);
        let mut interior = Vec::with_capacity(s * s);
        let mut rank = Vec::with_capacity(s * s);
        for src in 0..s {
            for tgt in 0..s {
                let hom = &self.homs[src * s + tgt];
                let mut fac = Vec::with_capacity(hom.len());
                let mut int = Vec::new();
                let mut rk = Vec::with_capacity(hom.len());
                for (idx, a) in hom.iter().enumerate() {
                    let f = self.factor_morphism(src, tgt, a);
                    if f.is_none() {
                        rk.push(Some(int.len() as u32));
                        int.push(idx as MorphId);
                    } else {
                        rk.push(None);
                    }
                    fac.push(f);
                }
                factor.push(fac);
                interior.push(int);
                rank.push(rk);
            }
        }
        (factor, interior, rank)
    }

    fn factor_morphism(&self, src: ShapeId, tgt: ShapeId, a: &ThetaMorphism) -> Option<(u32, MorphId)> {
        let faces = &self.faces[tgt].faces;
        if faces.is_empty() {
            return None;
        }
        let full = self.mode == BoundaryMode::Full && self.shapes[tgt].entries()[0] >= 2;
        if !full {
            let (i, b) = a.factor_through_face()?;
            let face = faces[i];
            return Some((i as u32, self.lookup[src * self.shapes.len() + face.source][&b]));
        }
        let m = self.shapes[tgt].entries()[0];
        // simplicial: factors through d_i for the first vertex i missed by a
        let phi = &a.components()[0];
        let missed = (0..=m).find(|v| !phi.values().contains(v))?;
        let values = phi.values().iter().map(|&v| if v > missed { v - 1 } else { v }).collect();
        let b_target = self.shapes[faces[missed as usize].source].clone();
        let b = ThetaMorphism::canonicalize(a.source(), &b_target, &[MonotoneMap::new(m - 1, values).ok()?]).ok()?;
        let face = faces[missed as usize];
        Some((missed, self.lookup[src * self.shapes.len() + face.source][&b]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn mode(&self) -> BoundaryMode {
        self.mode
    }

    pub fn shape_count(&self) -> usize {
        self.shapes.len()
    }

    pub fn shapes(&self) -> &[ThetaShape] {
        &self.shapes
    }

    pub fn shape(&self, id: ShapeId) -> &ThetaShape {
        &self.shapes[id]
    }

    pub fn point(&self) -> ShapeId {
        0
    }

    pub fn shape_id(&self, shape: &ThetaShape) -> Result<ShapeId> {
        if shape.n() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "{shape} lives in Θ^{} but the support is for n = {}",
                shape.n(),
                self.n
            )));
        }
        self.ids
            .get(shape.entries())
            .copied()
            .ok_or_else(|| Error::OutOfSupport(shape.to_string()))
    }

    pub fn shape_id_of(&self, entries: &[u32]) -> Result<ShapeId> {
        self.shape_id(&ThetaShape::new(self.n, entries.to_vec())?)
    }

    #[inline]
    pub fn pair(&self, src: ShapeId, tgt: ShapeId) -> usize {
        src * self.shapes.len() + tgt
    }

    pub fn hom(&self, src: ShapeId, tgt: ShapeId) -> &[ThetaMorphism] {
        &self.homs[self.pair(src, tgt)]
    }

    pub fn hom_len(&self, src: ShapeId, tgt: ShapeId) -> usize {
        self.homs[self.pair(src, tgt)].len()
    }

    pub fn morph(&self, src: ShapeId, tgt: ShapeId, id: MorphId) -> &ThetaMorphism {
        &self.homs[self.pair(src, tgt)][id as usize]
    }

    pub fn morph_id(&self, src: ShapeId, tgt: ShapeId, a: &ThetaMorphism) -> Result<MorphId> {
        self.lookup[self.pair(src, tgt)]
            .get(a)
            .copied()
            .ok_or_else(|| Error::ShapeMismatch(format!("morphism {a:?} is not in Hom({}, {})", self.shapes[src], self.shapes[tgt])))
    }

    pub fn identity(&self, shape: ShapeId) -> MorphId {
        self.identity[shape]
    }

    /// Index of `a ; b` (first `a: x -> y`, then `b: y -> z`) in `Hom(x, z)`.
    pub fn compose_idx(&self, x: ShapeId, y: ShapeId, z: ShapeId, a: MorphId, b: MorphId) -> MorphId {
        let s = self.shapes.len();
        let table = self.compose_cache[(x * s + y) * s + z].get_or_init(|| {
            let left = self.hom(x, y);
            let right = self.hom(y, z);
            let lookup = &self.lookup[self.pair(x, z)];
            let mut t = Vec::with_capacity(left.len() * right.len());
            for g in left {
                for f in right {
                    let c = theta::compose(g, f).expect("support shapes compose");
                    t.push(lookup[&c]);
                }
            }
            t
        });
        table[a as usize * self.hom_len(y, z) + b as usize]
    }

    pub fn faces(&self, shape: ShapeId) -> &[Face] {
        &self.faces[shape].faces
    }

    pub fn constraints(&self, shape: ShapeId) -> &[Constraint] {
        &self.faces[shape].constraints
    }

    /// For a boundary morphism `a: N -> M`, the face index `i` and `b: N -> F_i` with `a = b ; face_i`.
    pub fn factor(&self, src: ShapeId, tgt: ShapeId, a: MorphId) -> Option<(usize, MorphId)> {
        self.factor[self.pair(src, tgt)][a as usize].map(|(i, b)| (i as usize, b))
    }

    pub fn is_interior(&self, src: ShapeId, tgt: ShapeId, a: MorphId) -> bool {
        self.factor[self.pair(src, tgt)][a as usize].is_none()
    }

    /// Interior morphisms `src -> tgt` in hom-set order.
    pub fn interior(&self, src: ShapeId, tgt: ShapeId) -> &[MorphId] {
        &self.interior[self.pair(src, tgt)]
    }

    pub fn interior_rank(&self, src: ShapeId, tgt: ShapeId, a: MorphId) -> Option<u32> {
        self.interior_rank[self.pair(src, tgt)][a as usize]
    }

    /// The vertex maps `() -> M` in order of the vertex they pick.
    pub fn vertex_maps(&self, shape: ShapeId) -> Vec<MorphId> {
        (0..self.hom_len(self.point(), shape) as MorphId).collect()
    }

    /// A morphism given by its canonical components.
    pub fn morph_from_values(&self, src: ShapeId, tgt: ShapeId, components: &[Vec<u32>]) -> Result<MorphId> {
        let source = &self.shapes[src];
        let target = &self.shapes[tgt];
        let comps = components
            .iter()
            .enumerate()
            .map(|(i, v)| MonotoneMap::new(target.entry_or_zero(i), v.clone()))
            .collect::<Result<Vec<_>>>()?;
        let a = ThetaMorphism::from_components(source.clone(), target.clone(), comps)?;
        self.morph_id(src, tgt, &a)
    }

    /// The first component of `a` as a full value table `[src_1] -> [tgt_1]`
    /// (constant tails and maps to the point are expanded).
    pub fn first_values(&self, src: ShapeId, tgt: ShapeId, a: MorphId) -> Vec<u32> {
        let j = self.shapes[src].entry_or_zero(0) as usize;
        match self.morph(src, tgt, a).components().first() {
            None => vec![0; j + 1],
            Some(c) if c.values().len() == j + 1 => c.values().to_vec(),
            Some(c) => vec![c.values()[0]; j + 1],
        }
    }

    /// Canonical form of a raw component tuple; missing trailing components are constant 0.
    pub fn canonical_morph(&self, src: ShapeId, tgt: ShapeId, raw: &[Vec<u32>]) -> Result<MorphId> {
        let source = &self.shapes[src];
        let target = &self.shapes[tgt];
        let comps = (0..self.n)
            .map(|i| {
                let values = raw
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| vec![0; source.entry_or_zero(i) as usize + 1]);
                MonotoneMap::new(target.entry_or_zero(i), values)
            })
            .collect::<Result<Vec<_>>>()?;
        let a = ThetaMorphism::canonicalize(source, target, &comps)?;
        self.morph_id(src, tgt, &a)
    }
}

/// The classical cofaces `d_i: [m-1] -> [m]` (skip vertex `i`) of a 1-simplex-type shape.
fn simplicial_faces(shape: &ThetaShape) -> Vec<ThetaMorphism> {
    let m = shape.entries()[0];
    let n = shape.n();
    let source = if m == 1 {
        ThetaShape::point(n)
    } else {
        ThetaShape::new(n, vec![m - 1]).expect("positive entry")
    };
    (0..=m)
        .map(|i| {
            let values = (0..=m).filter(|&v| v != i).collect();
            let comp = MonotoneMap::new(m, values).expect("monotone coface");
            ThetaMorphism::from_components(source.clone(), shape.clone(), vec![comp]).expect("coface")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_faces_and_factorisations() {
        let s = Support::shared(2, 2, BoundaryMode::Free).unwrap();
        let m = s.shape_id_of(&[1, 1]).unwrap();
        let one = s.shape_id_of(&[1]).unwrap();
        assert_eq!(s.faces(m).len(), 2);
        assert!(s.faces(m).iter().all(|f| f.source == one));
        // compatibility: the two attached edges must share both endpoints
        assert_eq!(s.constraints(m).len(), 2);
        for a in 0..s.hom_len(m, m) as MorphId {
            match s.factor(m, m, a) {
                None => assert!(!s.morph(m, m, a).in_boundary()),
                Some((i, b)) => {
                    let f = s.faces(m)[i];
                    assert_eq!(s.compose_idx(m, f.source, m, b, f.morphism), a);
                }
            }
        }
    }

    #[test]
    fn full_mode_faces() {
        let s = Support::shared(1, 3, BoundaryMode::Full).unwrap();
        let two = s.shape_id_of(&[2]).unwrap();
        let one = s.shape_id_of(&[1]).unwrap();
        assert_eq!(s.faces(two).len(), 3);
        assert!(s.faces(two).iter().all(|f| f.source == one));
        // d_i d_j = d_{j-1} d_i gives three vertex constraints
        assert_eq!(s.constraints(two).len(), 3);
        // interior elements of (2) at level (2) are exactly the surjections
        let surj = s.hom(two, two).iter().filter(|a| a.components()[0].is_surjective()).count();
        assert_eq!(s.interior(two, two).len(), surj);
        assert!(Support::shared(2, 2, BoundaryMode::Full).is_err());
    }

    #[test]
    fn compose_table_matches_direct_composition() {
        let s = Support::shared(2, 2, BoundaryMode::Free).unwrap();
        let k = s.shape_count();
        for x in 0..k {
            for y in 0..k {
                for z in 0..k {
                    for (ai, a) in s.hom(x, y).iter().enumerate() {
                        for (bi, b) in s.hom(y, z).iter().enumerate() {
                            let c = theta::compose(a, b).unwrap();
                            assert_eq!(s.morph(x, z, s.compose_idx(x, y, z, ai as MorphId, bi as MorphId)), &c);
                        }
                    }
                }
            }
        }
    }
}

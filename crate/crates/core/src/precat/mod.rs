//! Finite presheaves on the bounded support of Θ^n.
//!
//! A [`Precat`] stores one finite level per support shape and, for every
//! morphism `a: N -> M` of the support, the restriction table `X_M -> X_N`.
//! Elements are plain indices into their level.

pub mod complex;
pub mod nerve;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::support::{MorphId, ShapeId, Support};

pub use complex::{
    boundary_complex, check_boundary_duality, fold_map, glue, representable_complex, Cell, CellComplex, ComplexMap, ElemRef,
    Evaluation,
};
pub use nerve::{nerve, nerve_functor, promote, promote_map};

#[derive(Clone)]
pub struct Precat {
    support: Arc<Support>,
    sizes: Vec<usize>,
    // [pair(src, tgt)][morphism][x in X_tgt] -> X_src
    tables: Vec<Vec<Vec<u32>>>,
    labels: Option<Vec<Vec<String>>>,
}

impl fmt::Debug for Precat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Precat")
            .field("n", &self.support.n())
            .field("d", &self.support.d())
            .field("sizes", &self.sizes)
            .finish()
    }
}

impl Precat {
    /// Build a presheaf from level sizes and a restriction function
    /// `(src, tgt, a, x) -> x|a`.
    pub fn from_fn(
        support: Arc<Support>,
        sizes: Vec<usize>,
        mut restrict: impl FnMut(ShapeId, ShapeId, MorphId, u32) -> u32,
    ) -> Precat {
        let s = support.shape_count();
        let mut tables = Vec::with_capacity(s * s);
        for src in 0..s {
            for tgt in 0..s {
                let hom = support.hom_len(src, tgt);
                tables.push(
                    (0..hom as MorphId)
                        .map(|a| (0..sizes[tgt] as u32).map(|x| restrict(src, tgt, a, x)).collect())
                        .collect(),
                );
            }
        }
        Precat {
            support,
            sizes,
            tables,
            labels: None,
        }
    }

    pub fn empty(support: Arc<Support>) -> Precat {
        let s = support.shape_count();
        Precat::from_fn(support, vec![0; s], |_, _, _, _| unreachable!())
    }

    pub fn terminal(support: Arc<Support>) -> Precat {
        let s = support.shape_count();
        Precat::from_fn(support, vec![1; s], |_, _, _, _| 0)
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Precat {
        debug_assert!(labels.iter().zip(&self.sizes).all(|(l, &s)| l.len() == s));
        self.labels = Some(labels);
        self
    }

    pub fn support(&self) -> &Arc<Support> {
        &self.support
    }

    pub fn size(&self, shape: ShapeId) -> usize {
        self.sizes[shape]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }

    #[inline]
    pub fn restrict(&self, src: ShapeId, tgt: ShapeId, a: MorphId, x: u32) -> u32 {
        self.tables[self.support.pair(src, tgt)][a as usize][x as usize]
    }

    pub fn table(&self, src: ShapeId, tgt: ShapeId, a: MorphId) -> &[u32] {
        &self.tables[self.support.pair(src, tgt)][a as usize]
    }

    pub fn label(&self, shape: ShapeId, x: u32) -> String {
        match &self.labels {
            Some(l) => l[shape][x as usize].clone(),
            None => x.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&Vec<Vec<String>>> {
        self.labels.as_ref()
    }

    /// Vertices of `x` in `X_M`: its restrictions along the vertex maps `() -> M`.
    pub fn vertices(&self, shape: ShapeId, x: u32) -> Vec<u32> {
        let pt = self.support.point();
        self.support
            .vertex_maps(shape)
            .into_iter()
            .map(|v| self.restrict(pt, shape, v, x))
            .collect()
    }

    /// Restrictions of `x` along the faces of its shape.
    pub fn face_tuple(&self, shape: ShapeId, x: u32) -> Vec<u32> {
        self.support
            .faces(shape)
            .iter()
            .map(|f| self.restrict(f.source, shape, f.morphism, x))
            .collect()
    }

    pub(crate) fn same_support(&self, other: &Precat) -> Result<()> {
        check_support(&self.support, &other.support)
    }

    /// Table shapes, ranges, identity and functoriality within the support.
    pub fn validate(&self) -> Result<()> {
        let s = &self.support;
        let k = s.shape_count();
        for src in 0..k {
            for tgt in 0..k {
                let tabs = &self.tables[s.pair(src, tgt)];
                if tabs.len() != s.hom_len(src, tgt) {
                    return Err(Error::InvalidPrecat(format!(
                        "{} restriction tables for Hom({}, {}), expected {}",
                        tabs.len(),
                        s.shape(src),
                        s.shape(tgt),
                        s.hom_len(src, tgt)
                    )));
                }
                for t in tabs {
                    if t.len() != self.sizes[tgt] || t.iter().any(|&y| y as usize >= self.sizes[src]) {
                        return Err(Error::InvalidPrecat(format!(
                            "restriction table {} -> {} has the wrong length or range",
                            s.shape(tgt),
                            s.shape(src)
                        )));
                    }
                }
            }
        }
        for m in 0..k {
            let id = s.identity(m);
            for x in 0..self.sizes[m] as u32 {
                if self.restrict(m, m, id, x) != x {
                    return Err(Error::InvalidPrecat(format!(
                        "restriction along the identity of {} moves element {x}",
                        s.shape(m)
                    )));
                }
            }
        }
        for x in 0..k {
            for y in 0..k {
                for z in 0..k {
                    if self.sizes[z] == 0 {
                        continue;
                    }
                    for a in 0..s.hom_len(x, y) as MorphId {
                        for b in 0..s.hom_len(y, z) as MorphId {
                            let ab = s.compose_idx(x, y, z, a, b);
                            for e in 0..self.sizes[z] as u32 {
                                let direct = self.restrict(x, z, ab, e);
                                let stepwise = self.restrict(x, y, a, self.restrict(y, z, b, e));
                                if direct != stepwise {
                                    return Err(Error::InvalidPrecat(format!(
                                        "functoriality fails for {:?} then {:?} on element {e} of level {}",
                                        s.morph(x, y, a),
                                        s.morph(y, z, b),
                                        s.shape(z)
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn tables_mut(&mut self) -> &mut Vec<Vec<Vec<u32>>> {
        &mut self.tables
    }

    pub(crate) fn sizes_mut(&mut self) -> &mut Vec<usize> {
        &mut self.sizes
    }

    /// Rename elements levelwise by the permutations `perm[shape][old] = new`.
    pub fn relabel(&self, perm: &[Vec<u32>]) -> Precat {
        let mut inverse: Vec<Vec<u32>> = self.sizes.iter().map(|&n| vec![0; n]).collect();
        for (shape, p) in perm.iter().enumerate() {
            for (old, &new) in p.iter().enumerate() {
                inverse[shape][new as usize] = old as u32;
            }
        }
        Precat::from_fn(self.support.clone(), self.sizes.clone(), |src, tgt, a, x| {
            let old = inverse[tgt][x as usize];
            perm[src][self.restrict(src, tgt, a, old) as usize]
        })
    }
}

pub(crate) fn check_support(a: &Arc<Support>, b: &Arc<Support>) -> Result<()> {
    if Arc::ptr_eq(a, b) || (a.n() == b.n() && a.d() == b.d() && a.mode() == b.mode()) {
        Ok(())
    } else {
        Err(Error::BoundMismatch(format!(
            "(n = {}, d = {}, {}) vs (n = {}, d = {}, {})",
            a.n(),
            a.d(),
            a.mode(),
            b.n(),
            b.d(),
            b.mode()
        )))
    }
}

/// A natural transformation between presheaves, stored levelwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrecatMap {
    levels: Vec<Vec<u32>>,
}

impl PrecatMap {
    pub fn new(levels: Vec<Vec<u32>>) -> PrecatMap {
        PrecatMap { levels }
    }

    pub fn identity(x: &Precat) -> PrecatMap {
        PrecatMap {
            levels: x.sizes.iter().map(|&n| (0..n as u32).collect()).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, shape: ShapeId, x: u32) -> u32 {
        self.levels[shape][x as usize]
    }

    pub fn levels(&self) -> &[Vec<u32>] {
        &self.levels
    }

    pub(crate) fn levels_mut(&mut self) -> &mut Vec<Vec<u32>> {
        &mut self.levels
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &PrecatMap) -> PrecatMap {
        PrecatMap {
            levels: self
                .levels
                .iter()
                .enumerate()
                .map(|(shape, lv)| lv.iter().map(|&x| next.apply(shape, x)).collect())
                .collect(),
        }
    }

    /// Sizes, ranges and naturality with respect to every support morphism.
    pub fn validate(&self, source: &Precat, target: &Precat) -> Result<()> {
        source.same_support(target)?;
        let s = &source.support;
        if self.levels.len() != s.shape_count() {
            return Err(Error::InvalidMap("wrong number of levels".into()));
        }
        for (shape, lv) in self.levels.iter().enumerate() {
            if lv.len() != source.size(shape) || lv.iter().any(|&y| y as usize >= target.size(shape)) {
                return Err(Error::InvalidMap(format!(
                    "level {} has the wrong length or range",
                    s.shape(shape)
                )));
            }
        }
        for src in 0..s.shape_count() {
            for tgt in 0..s.shape_count() {
                for a in 0..s.hom_len(src, tgt) as MorphId {
                    for x in 0..source.size(tgt) as u32 {
                        let left = self.apply(src, source.restrict(src, tgt, a, x));
                        let right = target.restrict(src, tgt, a, self.apply(tgt, x));
                        if left != right {
                            return Err(Error::InvalidMap(format!(
                                "not natural along {:?} at element {x}",
                                s.morph(src, tgt, a)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_injective(&self) -> bool {
        self.levels.iter().all(|lv| {
            let mut seen = lv.clone();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// Levelwise bijective (naturality is checked separately by [`PrecatMap::validate`]).
    pub fn is_bijective(&self, target: &Precat) -> bool {
        self.is_injective() && self.levels.iter().enumerate().all(|(s, lv)| lv.len() == target.size(s))
    }
}

/// `h(M)`: level `N` is `Hom(N, M)`, restriction is precomposition.
pub fn representable(support: &Arc<Support>, shape: ShapeId) -> Precat {
    let sizes = (0..support.shape_count()).map(|n| support.hom_len(n, shape)).collect();
    Precat::from_fn(support.clone(), sizes, |src, tgt, a, x| {
        support.compose_idx(src, tgt, shape, a, x)
    })
    .with_labels(
        (0..support.shape_count())
            .map(|n| {
                support
                    .hom(n, shape)
                    .iter()
                    .map(|a| format!("{:?}", a.components().iter().map(|c| c.values().to_vec()).collect::<Vec<_>>()))
                    .collect()
            })
            .collect(),
    )
}

/// `∂(M)` as a subpresheaf of `h(M)`, with its inclusion.
pub fn boundary(support: &Arc<Support>, shape: ShapeId) -> (Precat, PrecatMap) {
    let k = support.shape_count();
    let members: Vec<Vec<MorphId>> = (0..k)
        .map(|n| {
            (0..support.hom_len(n, shape) as MorphId)
                .filter(|&a| !support.is_interior(n, shape, a))
                .collect()
        })
        .collect();
    let position: Vec<HashMap<MorphId, u32>> = members
        .iter()
        .map(|m| m.iter().enumerate().map(|(i, &a)| (a, i as u32)).collect())
        .collect();
    let sizes = members.iter().map(|m| m.len()).collect();
    let precat = Precat::from_fn(support.clone(), sizes, |src, tgt, a, x| {
        let composite = support.compose_idx(src, tgt, shape, a, members[tgt][x as usize]);
        position[src][&composite]
    });
    (precat, PrecatMap::new(members))
}

/// Constructions that would hold more elements than this fail with
/// [`Error::ElementLimit`] instead of exhausting memory.
pub const ELEMENT_LIMIT: usize = 2_000_000;

/// Levelwise fibre product `X ×_Z Y` with its two projections.
pub fn pullback(
    x: &Precat,
    y: &Precat,
    f: &PrecatMap,
    g: &PrecatMap,
) -> Result<(Precat, PrecatMap, PrecatMap)> {
    x.same_support(y)?;
    let s = x.support.clone();
    let k = s.shape_count();
    let mut pairs: Vec<Vec<(u32, u32)>> = Vec::with_capacity(k);
    let mut total = 0usize;
    for shape in 0..k {
        let mut by_image: HashMap<u32, Vec<u32>> = HashMap::new();
        for b in 0..y.size(shape) as u32 {
            by_image.entry(g.apply(shape, b)).or_default().push(b);
        }
        total += (0..x.size(shape) as u32)
            .map(|a| by_image.get(&f.apply(shape, a)).map_or(0, Vec::len))
            .sum::<usize>();
        if total > ELEMENT_LIMIT {
            return Err(Error::ElementLimit(ELEMENT_LIMIT));
        }
        let mut lv = Vec::new();
        for a in 0..x.size(shape) as u32 {
            if let Some(bs) = by_image.get(&f.apply(shape, a)) {
                lv.extend(bs.iter().map(|&b| (a, b)));
            }
        }
        pairs.push(lv);
    }
    let index: Vec<HashMap<(u32, u32), u32>> = pairs
        .iter()
        .map(|lv| lv.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect())
        .collect();
    let sizes = pairs.iter().map(|lv| lv.len()).collect();
    let precat = Precat::from_fn(s, sizes, |src, tgt, a, e| {
        let (p, q) = pairs[tgt][e as usize];
        index[src][&(x.restrict(src, tgt, a, p), y.restrict(src, tgt, a, q))]
    })
    .with_labels(
        pairs
            .iter()
            .enumerate()
            .map(|(shape, lv)| {
                lv.iter()
                    .map(|&(p, q)| format!("({},{})", x.label(shape, p), y.label(shape, q)))
                    .collect()
            })
            .collect(),
    );
    let p1 = PrecatMap::new(pairs.iter().map(|lv| lv.iter().map(|&(p, _)| p).collect()).collect());
    let p2 = PrecatMap::new(pairs.iter().map(|lv| lv.iter().map(|&(_, q)| q).collect()).collect());
    Ok((precat, p1, p2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::support::BoundaryMode;

    fn sizes_by_entries(p: &Precat) -> Vec<(String, usize)> {
        let s = p.support();
        (0..s.shape_count()).map(|i| (s.shape(i).to_string(), p.size(i))).collect()
    }

    #[test]
    fn representable_levels() {
        let s = Support::shared(1, 2, BoundaryMode::Free).unwrap();
        let h = representable(&s, s.shape_id_of(&[1]).unwrap());
        assert_eq!(h.sizes(), &[2, 3, 4]);
        h.validate().unwrap();

        let pt = representable(&s, s.point());
        assert!(pt.sizes().iter().all(|&n| n == 1));

        let s2 = Support::shared(2, 1, BoundaryMode::Free).unwrap();
        let h = representable(&s2, s2.shape_id_of(&[1, 1]).unwrap());
        assert_eq!(h.size(s2.shape_id_of(&[1, 1]).unwrap()), 5);
        h.validate().unwrap();
    }

    #[test]
    fn boundary_levels() {
        let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
        let (b, inc) = boundary(&s, s.shape_id_of(&[2]).unwrap());
        assert!(b.sizes().iter().all(|&n| n == 3));
        b.validate().unwrap();
        inc.validate(&b, &representable(&s, s.shape_id_of(&[2]).unwrap())).unwrap();

        let s2 = Support::shared(2, 1, BoundaryMode::Free).unwrap();
        let (b, _) = boundary(&s2, s2.shape_id_of(&[1, 1]).unwrap());
        assert_eq!(
            sizes_by_entries(&b),
            vec![("()".into(), 2), ("(1)".into(), 4), ("(1,1)".into(), 4)]
        );
        let (empty, _) = boundary(&s2, s2.point());
        assert_eq!(empty.total_size(), 0);
    }

    #[test]
    fn pullback_basics() {
        let s = Support::shared(1, 2, BoundaryMode::Free).unwrap();
        let h = representable(&s, s.shape_id_of(&[1]).unwrap());
        let id = PrecatMap::identity(&h);
        let (p, p1, _) = pullback(&h, &h, &id, &id).unwrap();
        assert_eq!(p.sizes(), h.sizes());
        p.validate().unwrap();
        p1.validate(&p, &h).unwrap();

        let t = Precat::terminal(s.clone());
        let to_t = PrecatMap::new(h.sizes().iter().map(|&n| vec![0; n]).collect());
        let (sq, _, _) = pullback(&h, &h, &to_t, &to_t).unwrap();
        assert_eq!(sq.sizes(), &[4, 9, 16]);
        let one = PrecatMap::identity(&t);
        let (pt, _, _) = pullback(&t, &t, &one, &one).unwrap();
        assert!(pt.sizes().iter().all(|&n| n == 1));
    }

    #[test]
    fn validate_detects_broken_tables() {
        let s = Support::shared(1, 2, BoundaryMode::Free).unwrap();
        let h = representable(&s, s.shape_id_of(&[1]).unwrap());
        let mut broken = h.clone();
        let one = s.shape_id_of(&[1]).unwrap();
        let id = s.identity(one);
        broken.tables_mut()[s.pair(one, one)][id as usize].swap(0, 1);
        assert!(broken.validate().is_err());
    }
}

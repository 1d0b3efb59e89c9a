//! Maps from free complexes into precats, and homotopy classes of maps
//! `A -> B` as the coequalizer of `Hom(F^1, B) ⇉ Hom(F^0, B)`.

mod space;

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

pub use space::{mapping_space, MappingSpace};

use crate::error::{Error, Result};
use crate::lifting::is_ncategory;
use crate::precat::{CellComplex, ComplexMap, Precat};
use crate::resolution::Resolution;
use crate::support::ShapeId;

pub const DEFAULT_MAP_LIMIT: usize = 250_000;

/// Elements of `B` grouped by face tuple, built per shape on demand.
struct Candidates<'a> {
    b: &'a Precat,
    by_shape: Vec<Option<HashMap<Vec<u32>, Vec<u32>>>>,
}

impl<'a> Candidates<'a> {
    fn new(b: &'a Precat) -> Self {
        Candidates {
            b,
            by_shape: vec![None; b.support().shape_count()],
        }
    }

    fn get(&mut self, shape: ShapeId, faces: &[u32]) -> &[u32] {
        let b = self.b;
        let table = self.by_shape[shape].get_or_insert_with(|| {
            let mut t: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
            for x in 0..b.size(shape) as u32 {
                t.entry(b.face_tuple(shape, x)).or_default().push(x);
            }
            t
        });
        table.get(faces).map_or(&[], |v| v.as_slice())
    }
}

/// The face images a cell's image must have, given the images of earlier cells.
fn required(f: &CellComplex, b: &Precat, images: &[u32], c: usize) -> Vec<u32> {
    f.cell(c)
        .attachment
        .iter()
        .map(|e| b.restrict(e.level, f.cell(e.cell).shape, e.morphism, images[e.cell]))
        .collect()
}

fn dependencies(f: &CellComplex) -> Vec<Vec<usize>> {
    f.cells()
        .iter()
        .map(|cell| {
            let s: BTreeSet<usize> = cell.attachment.iter().map(|e| e.cell).collect();
            s.into_iter().collect()
        })
        .collect()
}

fn check_bounds(f: &CellComplex, b: &Precat) -> Result<()> {
    let (s, t) = (f.support(), b.support());
    if s.n() != t.n() || s.d() != t.d() || s.mode() != t.mode() {
        return Err(Error::BoundMismatch(format!(
            "complex over (n={}, d={}) but target over (n={}, d={})",
            s.n(),
            s.d(),
            t.n(),
            t.d()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CellSearch {
    pub cell: usize,
    pub shape: String,
    /// How often the search reached this cell.
    pub visits: usize,
    pub min_candidates: usize,
    pub max_candidates: usize,
    pub total_candidates: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub cells: Vec<CellSearch>,
    pub nodes: usize,
    pub dead_ends: usize,
    pub solutions: usize,
}

#[derive(Clone, Debug)]
pub struct MapSet {
    pub source: CellComplex,
    pub target: Precat,
    /// Cell images, in lexicographic order.
    pub maps: Vec<ComplexMap>,
    /// Set when the target fails the Segal check.
    pub warning: Option<String>,
}

impl MapSet {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

pub fn enumerate_maps(f: &CellComplex, b: &Precat) -> Result<MapSet> {
    Ok(enumerate_maps_with(f, b, DEFAULT_MAP_LIMIT)?.0)
}

/// All maps `f -> b` by backtracking over cells in order, with per-cell statistics.
pub fn enumerate_maps_with(f: &CellComplex, b: &Precat, limit: usize) -> Result<(MapSet, SearchStats)> {
    check_bounds(f, b)?;
    let warning = match is_ncategory(b) {
        Ok(None) => None,
        Ok(Some(w)) => Some(format!("target is not an n-category: {w}")),
        Err(e) => Some(format!("target not checked: {e}")),
    };
    let n = f.len();
    let mut stats = SearchStats {
        cells: (0..n)
            .map(|c| CellSearch {
                cell: c,
                shape: f.support().shape(f.cell(c).shape).to_string(),
                min_candidates: usize::MAX,
                ..CellSearch::default()
            })
            .collect(),
        ..SearchStats::default()
    };
    let mut cands = Candidates::new(b);
    let mut maps = Vec::new();
    let mut images = vec![0u32; n];
    let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut pos = vec![0usize; n];
    let mut enter = |k: usize, images: &[u32], lists: &mut Vec<Vec<u32>>, stats: &mut SearchStats| {
        let req = required(f, b, images, k);
        lists[k] = cands.get(f.cell(k).shape, &req).to_vec();
        let cs = &mut stats.cells[k];
        let m = lists[k].len();
        cs.visits += 1;
        cs.total_candidates += m;
        cs.min_candidates = cs.min_candidates.min(m);
        cs.max_candidates = cs.max_candidates.max(m);
        stats.nodes += 1;
        if m == 0 {
            stats.dead_ends += 1;
        }
    };
    if n == 0 {
        maps.push(ComplexMap::new(Vec::new()));
    } else {
        enter(0, &images, &mut lists, &mut stats);
        let mut k = 0usize;
        loop {
            if pos[k] < lists[k].len() {
                images[k] = lists[k][pos[k]];
                pos[k] += 1;
                if k + 1 == n {
                    if maps.len() == limit {
                        return Err(Error::MapLimit(limit));
                    }
                    maps.push(ComplexMap::new(images.clone()));
                } else {
                    k += 1;
                    pos[k] = 0;
                    enter(k, &images, &mut lists, &mut stats);
                }
            } else if k == 0 {
                break;
            } else {
                k -= 1;
            }
        }
    }
    for cs in &mut stats.cells {
        if cs.visits == 0 {
            cs.min_candidates = 0;
        }
    }
    stats.solutions = maps.len();
    Ok((
        MapSet {
            source: f.clone(),
            target: b.clone(),
            maps,
            warning,
        },
        stats,
    ))
}

/// Extend fixed images of the first cells to a map of the whole complex, if
/// possible. Uses conflict-directed backjumping: a cell's candidates depend
/// only on the cells its attachment touches.
pub fn extend_map(f: &CellComplex, b: &Precat, fixed: &[u32]) -> Result<Option<ComplexMap>> {
    check_bounds(f, b)?;
    let n = f.len();
    let start = fixed.len();
    if start > n {
        return Err(Error::InvalidMap(format!("{start} fixed images for {n} cells")));
    }
    let mut images = fixed.to_vec();
    images.resize(n, 0);
    ComplexMap::new(images[..start].to_vec()).validate(&prefix(f, start)?, b)?;
    let deps = dependencies(f);
    let mut cands = Candidates::new(b);
    let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut pos = vec![0usize; n];
    let mut conflicts: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut enter = |k: usize, images: &[u32], lists: &mut Vec<Vec<u32>>| {
        let req = required(f, b, images, k);
        lists[k] = cands.get(f.cell(k).shape, &req).to_vec();
    };
    if start == n {
        return Ok(Some(ComplexMap::new(images)));
    }
    let mut k = start;
    enter(k, &images, &mut lists);
    loop {
        if pos[k] < lists[k].len() {
            images[k] = lists[k][pos[k]];
            pos[k] += 1;
            if k + 1 == n {
                return Ok(Some(ComplexMap::new(images)));
            }
            k += 1;
            pos[k] = 0;
            conflicts[k].clear();
            enter(k, &images, &mut lists);
            continue;
        }
        let mut set: BTreeSet<usize> = conflicts[k].iter().copied().chain(deps[k].iter().copied()).filter(|&c| c >= start).collect();
        let Some(h) = set.pop_last() else {
            return Ok(None);
        };
        conflicts[h].extend(set);
        k = h;
    }
}

/// The subcomplex on the first `k` cells.
fn prefix(f: &CellComplex, k: usize) -> Result<CellComplex> {
    CellComplex::from_cells(f.support().clone(), f.cells()[..k].to_vec())
}

/// A basic homotopy between maps `from` and `to` out of `F^0`.
#[derive(Clone, Debug)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub witness: ComplexMap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureFlags {
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
}

impl ClosureFlags {
    /// Whether the raw relation was already an equivalence relation.
    pub fn single_step_sufficient(&self) -> bool {
        self.reflexive && self.symmetric && self.transitive
    }
}

#[derive(Clone, Debug)]
pub struct HomClasses {
    pub maps: MapSet,
    pub class_of: Vec<usize>,
    /// Least map index in each class.
    pub representatives: Vec<usize>,
    pub edges: Vec<Edge>,
    pub flags: ClosureFlags,
}

impl HomClasses {
    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn related(&self, g: usize, h: usize) -> bool {
        self.edges.iter().any(|e| e.from == g && e.to == h)
    }
}

/// All ordered pairs `(g, g')` of maps `F^0 -> B` jointly extending to `F^1`.
pub fn relation_edges(res: &Resolution, maps: &[ComplexMap], b: &Precat) -> Result<Vec<Edge>> {
    let f1 = res.f1.complex();
    let mut out = Vec::new();
    for (i, g) in maps.iter().enumerate() {
        for (j, h) in maps.iter().enumerate() {
            let fixed: Vec<u32> = g.images().iter().chain(h.images()).copied().collect();
            if let Some(witness) = extend_map(f1, b, &fixed)? {
                out.push(Edge { from: i, to: j, witness });
            }
        }
    }
    Ok(out)
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Classes of `enumerate_maps(F^0, B)` under the equivalence relation
/// generated by the basic homotopies.
pub fn hom_classes(res: &Resolution, b: &Precat) -> Result<HomClasses> {
    let maps = enumerate_maps(res.f0.complex(), b)?;
    let edges = relation_edges(res, &maps.maps, b)?;
    let k = maps.len();
    let mut rel = vec![vec![false; k]; k];
    for e in &edges {
        rel[e.from][e.to] = true;
    }
    let flags = ClosureFlags {
        reflexive: (0..k).all(|i| rel[i][i]),
        symmetric: (0..k).all(|i| (0..k).all(|j| !rel[i][j] || rel[j][i])),
        transitive: (0..k).all(|i| (0..k).all(|j| !rel[i][j] || (0..k).all(|l| !rel[j][l] || rel[i][l]))),
    };
    let mut parent: Vec<usize> = (0..k).collect();
    for e in &edges {
        let (a, c) = (find(&mut parent, e.from), find(&mut parent, e.to));
        if a != c {
            parent[a.max(c)] = a.min(c);
        }
    }
    let mut representatives = Vec::new();
    let mut class_of = vec![0; k];
    let mut class_of_root: HashMap<usize, usize> = HashMap::new();
    for (i, slot) in class_of.iter_mut().enumerate() {
        let r = find(&mut parent, i);
        *slot = *class_of_root.entry(r).or_insert_with(|| {
            representatives.push(i);
            representatives.len() - 1
        });
    }
    Ok(HomClasses {
        maps,
        class_of,
        representatives,
        edges,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category;
    use crate::precat::{nerve, representable_complex};
    use crate::resolution::ResolveConfig;
    use crate::support::{BoundaryMode, Support};

    fn setup(a: &str, b: &str) -> (Resolution, Precat) {
        let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
        let a = nerve(&s, &category::builtin(a).unwrap()).unwrap();
        let b = nerve(&s, &category::builtin(b).unwrap()).unwrap();
        (Resolution::build(&a, &ResolveConfig::default()).unwrap(), b)
    }

    #[test]
    fn representable_maps_are_elements() {
        let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
        let b = nerve(&s, &category::arrow()).unwrap();
        for shape in 0..s.shape_count() {
            let (w, _) = representable_complex(&s, shape).unwrap();
            let maps = enumerate_maps(&w, &b).unwrap();
            assert_eq!(maps.len(), b.size(shape));
            assert!(maps.warning.is_none());
        }
    }

    #[test]
    fn maps_out_of_f1_of_a_point() {
        let (r, b) = setup("point", "arrow");
        let maps = enumerate_maps(r.f1.complex(), &b).unwrap();
        assert_eq!(maps.len(), 2);
    }

    #[test]
    fn extension_agrees_with_enumeration() {
        let (r, b) = setup("point", "iso");
        let all = enumerate_maps(r.f1.complex(), &b).unwrap();
        for g in 0..2u32 {
            for h in 0..2u32 {
                let found = extend_map(r.f1.complex(), &b, &[g, h]).unwrap();
                let expected = all.maps.iter().any(|m| m.images()[..2] == [g, h]);
                assert_eq!(found.is_some(), expected);
            }
        }
    }

    #[test]
    fn class_counts() {
        for (a, b, k) in [("arrow", "arrow", 3), ("iso", "arrow", 2), ("point", "arrow", 2), ("point", "iso", 1), ("point", "point", 1)] {
            let (r, b) = setup(a, b);
            let hc = hom_classes(&r, &b).unwrap();
            assert_eq!(hc.class_count(), k, "{a} -> {b:?}", b = hc.maps.len());
            assert!(hc.flags.reflexive);
            for e in &hc.edges {
                e.witness.validate(r.f1.complex(), &b).unwrap();
            }
        }
    }
}

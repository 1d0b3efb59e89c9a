//! Segal conditions for 1- and 2-precats and equivalences between them.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use super::slice::{slice_map, slice_with};
use crate::category::{Arrow, FiniteCategory};
use crate::error::{Error, Result};
use crate::precat::{Precat, PrecatMap};
use crate::support::MorphId;

/// Why a precat fails to be an n-category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SegalWitness {
    /// Two elements of level `(m)` with the same spine.
    NotInjective { level: u32, first: u32, second: u32, spine: Vec<u32> },
    /// A composable chain of edges with no element of level `(m)` over it.
    NotSurjective { level: u32, spine: Vec<u32> },
    /// Composition read off level `(2)` is not associative.
    NotAssociative { detail: String },
    /// The row `p -> X_(m,p)` is not a 1-category.
    Row { row: u32, inner: Box<SegalWitness> },
    /// The Segal functor of row `m` is not fully faithful at this pair of objects.
    NotFullyFaithful { row: u32, source: u32, target: u32 },
    /// A chain of row-1 objects not equivalent to the spine of any row-`m` object.
    NotEssentiallySurjective { row: u32, chain: Vec<u32> },
}

impl fmt::Display for SegalWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegalWitness::NotInjective { level, first, second, spine } => {
                write!(f, "elements {first} and {second} of level ({level}) share the spine {spine:?}")
            }
            SegalWitness::NotSurjective { level, spine } => {
                write!(f, "the composable edges {spine:?} have no filler at level ({level})")
            }
            SegalWitness::NotAssociative { detail } => write!(f, "composition is not a category: {detail}"),
            SegalWitness::Row { row, inner } => write!(f, "row {row}: {inner}"),
            SegalWitness::NotFullyFaithful { row, source, target } => {
                write!(f, "row {row}: Segal functor is not fully faithful at ({source}, {target})")
            }
            SegalWitness::NotEssentiallySurjective { row, chain } => {
                write!(f, "row {row}: chain {chain:?} is not reached up to isomorphism")
            }
        }
    }
}

/// Why a map of n-categories is not an equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EquivalenceFailure {
    NotFaithful { source: u32, target: u32 },
    NotFull { source: u32, target: u32 },
    NotEssentiallySurjective { object: u32 },
    /// Failure on the hom 1-category between two objects.
    Slice { source: u32, target: u32, inner: Box<EquivalenceFailure> },
}

impl fmt::Display for EquivalenceFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceFailure::NotFaithful { source, target } => write!(f, "not faithful on Hom({source}, {target})"),
            EquivalenceFailure::NotFull { source, target } => write!(f, "not full on Hom({source}, {target})"),
            EquivalenceFailure::NotEssentiallySurjective { object } => {
                write!(f, "object {object} of the target is not reached up to equivalence")
            }
            EquivalenceFailure::Slice { source, target, inner } => write!(f, "on Hom({source}, {target}): {inner}"),
        }
    }
}

struct Spines {
    // spine[i] : (1) -> (m), values [i-1, i]
    spine: Vec<MorphId>,
    one: usize,
    level: usize,
}

fn spines(x: &Precat, m: u32) -> Result<Spines> {
    let s = x.support();
    let one = s.shape_id_of(&[1])?;
    let level = s.shape_id_of(&[m])?;
    let spine = (1..=m)
        .map(|i| s.morph_from_values(one, level, &[vec![i - 1, i]]))
        .collect::<Result<_>>()?;
    Ok(Spines { spine, one, level })
}

fn edge_ends(x: &Precat) -> Result<Vec<(u32, u32)>> {
    let s = x.support();
    let one = s.shape_id_of(&[1])?;
    let pt = s.point();
    Ok((0..x.size(one) as u32)
        .map(|e| (x.restrict(pt, one, 0, e), x.restrict(pt, one, 1, e)))
        .collect())
}

/// Composable chains of `m` edges, in lexicographic order of edge indices.
fn chains(ends: &[(u32, u32)], m: usize, mut visit: impl FnMut(&[u32]) -> bool) {
    let mut by_src: HashMap<u32, Vec<u32>> = HashMap::new();
    for (e, &(a, _)) in ends.iter().enumerate() {
        by_src.entry(a).or_default().push(e as u32);
    }
    fn go(
        ends: &[(u32, u32)],
        by_src: &HashMap<u32, Vec<u32>>,
        m: usize,
        cur: &mut Vec<u32>,
        visit: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        if cur.len() == m {
            return visit(cur);
        }
        let next: Vec<u32> = match cur.last() {
            None => (0..ends.len() as u32).collect(),
            Some(&e) => by_src.get(&ends[e as usize].1).cloned().unwrap_or_default(),
        };
        for e in next {
            cur.push(e);
            let go_on = go(ends, by_src, m, cur, visit);
            cur.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    go(ends, &by_src, m, &mut Vec::new(), &mut visit);
}

fn chain_count(ends: &[(u32, u32)], m: usize) -> u128 {
    // ways[e] = number of chains of the current length starting with e
    let mut ways: Vec<u128> = vec![1; ends.len()];
    for _ in 1..m {
        let mut starting: HashMap<u32, u128> = HashMap::new();
        for (e, &(a, _)) in ends.iter().enumerate() {
            *starting.entry(a).or_insert(0) += ways[e];
        }
        ways = ends.iter().map(|&(_, b)| starting.get(&b).copied().unwrap_or(0)).collect();
    }
    ways.iter().sum()
}

/// Strict Segal condition for a 1-precat: `X_m -> X_1 ×_{X_0} .. ×_{X_0} X_1`
/// bijective for `2 <= m <= d`.
fn segal_1(x: &Precat) -> Result<Option<SegalWitness>> {
    let s = x.support();
    let ends = edge_ends(x)?;
    for m in 2..=s.d() {
        let sp = spines(x, m)?;
        let mut seen: HashMap<Vec<u32>, u32> = HashMap::new();
        for e in 0..x.size(sp.level) as u32 {
            let spine: Vec<u32> = sp.spine.iter().map(|&a| x.restrict(sp.one, sp.level, a, e)).collect();
            if let Some(&first) = seen.get(&spine) {
                return Ok(Some(SegalWitness::NotInjective {
                    level: m,
                    first,
                    second: e,
                    spine,
                }));
            }
            seen.insert(spine, e);
        }
        if chain_count(&ends, m as usize) != seen.len() as u128 {
            let mut missing = None;
            chains(&ends, m as usize, |c| {
                if seen.contains_key(c) {
                    true
                } else {
                    missing = Some(c.to_vec());
                    false
                }
            });
            return Ok(Some(SegalWitness::NotSurjective {
                level: m,
                spine: missing.expect("a chain is missing"),
            }));
        }
    }
    Ok(None)
}

/// The category presented by a 1-precat that satisfies the Segal condition at
/// level 2: objects `X_()`, arrows `X_(1)` (same indices), composition read off
/// `X_(2)`.
pub fn extract_category(x: &Precat) -> Result<FiniteCategory> {
    let s = x.support();
    if s.n() != 1 || s.d() < 2 {
        return Err(Error::Unsupported("categories are read off 1-precats with d >= 2".into()));
    }
    let pt = s.point();
    let one = s.shape_id_of(&[1])?;
    let two = s.shape_id_of(&[2])?;
    let sp = spines(x, 2)?;
    let long = s.morph_from_values(one, two, &[vec![0, 2]])?;
    let mut filler: HashMap<(u32, u32), u32> = HashMap::new();
    for z in 0..x.size(two) as u32 {
        let key = (x.restrict(one, two, sp.spine[0], z), x.restrict(one, two, sp.spine[1], z));
        if filler.insert(key, z).is_some() {
            return Err(Error::NotNCategory(format!("two fillers for the pair {key:?}")));
        }
    }
    let ends = edge_ends(x)?;
    let objects: Vec<String> = (0..x.size(pt)).map(|i| i.to_string()).collect();
    let arrows: Vec<Arrow> = ends
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| Arrow {
            name: e.to_string(),
            src: a as usize,
            dst: b as usize,
        })
        .collect();
    let identities: Vec<String> = (0..x.size(pt) as u32).map(|o| x.restrict(one, pt, 0, o).to_string()).collect();
    let mut compose = Vec::new();
    for (f, &(_, b)) in ends.iter().enumerate() {
        for (g, &(c, _)) in ends.iter().enumerate() {
            if b != c {
                continue;
            }
            let z = filler
                .get(&(f as u32, g as u32))
                .ok_or_else(|| Error::NotNCategory(format!("edges {f} and {g} have no composite")))?;
            compose.push((f.to_string(), g.to_string(), x.restrict(one, two, long, *z).to_string()));
        }
    }
    FiniteCategory::from_parts("extracted".into(), objects, arrows, Some(identities), &compose)
        .map_err(|e| Error::NotNCategory(e.to_string()))
}

/// Connected components of the isomorphism relation on objects.
fn iso_classes(c: &FiniteCategory) -> Vec<usize> {
    let mut class: Vec<usize> = (0..c.object_count()).collect();
    fn find(class: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while class[r] != r {
            r = class[r];
        }
        class[x] = r;
        r
    }
    for f in 0..c.arrow_count() {
        if c.is_iso(f) {
            let (a, b) = (find(&mut class, c.src(f)), find(&mut class, c.dst(f)));
            class[a.max(b)] = a.min(b);
        }
    }
    (0..c.object_count()).map(|x| find(&mut class, x)).collect()
}

/// Whether `X` is an n-category (n <= 2); `None` means it is.
pub fn is_ncategory(x: &Precat) -> Result<Option<SegalWitness>> {
    match x.support().n() {
        1 => segal_1(x),
        2 => segal_2(x),
        n => Err(Error::Unsupported(format!("Segal checks are implemented for n <= 2, not n = {n}"))),
    }
}

fn segal_2(x: &Precat) -> Result<Option<SegalWitness>> {
    let s = x.support().clone();
    let d = s.d();
    let mut rows = Vec::new();
    for m in 1..=d {
        let (row, _) = slice_with(x, m, None)?;
        if let Some(w) = segal_1(&row)? {
            return Ok(Some(SegalWitness::Row { row: m, inner: Box::new(w) }));
        }
        rows.push(row);
    }
    if d < 2 {
        return Ok(None);
    }
    let cats: Vec<FiniteCategory> = match rows.iter().map(extract_category).collect::<Result<Vec<_>>>() {
        Ok(c) => c,
        Err(e) => return Ok(Some(SegalWitness::NotAssociative { detail: e.to_string() })),
    };
    let c1 = &cats[0];
    let class = iso_classes(c1);
    let one = s.shape_id_of(&[1])?;
    let one_one = s.shape_id_of(&[1, 1])?;
    let ends = edge_ends(x)?;
    for m in 2..=d {
        let cm = &cats[m as usize - 1];
        let level = s.shape_id_of(&[m])?;
        let level_1 = s.shape_id_of(&[m, 1])?;
        let obj_spine: Vec<MorphId> = (1..=m)
            .map(|i| s.morph_from_values(one, level, &[vec![i - 1, i]]))
            .collect::<Result<_>>()?;
        let arr_spine: Vec<MorphId> = (1..=m)
            .map(|i| s.canonical_morph(one_one, level_1, &[vec![i - 1, i], vec![0, 1]]))
            .collect::<Result<_>>()?;
        let fo = |o: usize| -> Vec<u32> { obj_spine.iter().map(|&a| x.restrict(one, level, a, o as u32)).collect() };
        let fa = |e: usize| -> Vec<u32> {
            arr_spine.iter().map(|&a| x.restrict(one_one, level_1, a, e as u32)).collect()
        };
        let hm = cm.hom_table();
        let h1 = c1.hom_table();
        let images: Vec<Vec<u32>> = (0..cm.object_count()).map(fo).collect();
        for a in 0..cm.object_count() {
            for b in 0..cm.object_count() {
                let expected: usize = images[a]
                    .iter()
                    .zip(&images[b])
                    .map(|(&p, &q)| h1[p as usize][q as usize].len())
                    .product();
                let got: HashSet<Vec<u32>> = hm[a][b].iter().map(|&e| fa(e)).collect();
                if got.len() != hm[a][b].len() || got.len() != expected {
                    return Ok(Some(SegalWitness::NotFullyFaithful {
                        row: m,
                        source: a as u32,
                        target: b as u32,
                    }));
                }
            }
        }
        let reached: HashSet<Vec<usize>> = images
            .iter()
            .map(|t| t.iter().map(|&e| class[e as usize]).collect())
            .collect();
        let mut missing = None;
        chains(&ends, m as usize, |c| {
            let key: Vec<usize> = c.iter().map(|&e| class[e as usize]).collect();
            if reached.contains(&key) {
                true
            } else {
                missing = Some(c.to_vec());
                false
            }
        });
        if let Some(chain) = missing {
            return Ok(Some(SegalWitness::NotEssentiallySurjective { row: m, chain }));
        }
    }
    Ok(None)
}

/// Fully faithful and essentially surjective, by brute force.
fn functor_failure(a: &FiniteCategory, b: &FiniteCategory, fo: &[u32], fa: &[u32]) -> Option<EquivalenceFailure> {
    let ha = a.hom_table();
    let hb = b.hom_table();
    for x in 0..a.object_count() {
        for y in 0..a.object_count() {
            let images: HashSet<u32> = ha[x][y].iter().map(|&f| fa[f]).collect();
            let (source, target) = (x as u32, y as u32);
            if images.len() != ha[x][y].len() {
                return Some(EquivalenceFailure::NotFaithful { source, target });
            }
            if images.len() != hb[fo[x] as usize][fo[y] as usize].len() {
                return Some(EquivalenceFailure::NotFull { source, target });
            }
        }
    }
    for o in 0..b.object_count() {
        let reached = (0..a.object_count()).any(|x| hb[fo[x] as usize][o].iter().any(|&g| b.is_iso(g)));
        if !reached {
            return Some(EquivalenceFailure::NotEssentiallySurjective { object: o as u32 });
        }
    }
    None
}

fn require_ncategory(x: &Precat, side: &str) -> Result<()> {
    match is_ncategory(x)? {
        None => Ok(()),
        Some(w) => Err(Error::NotNCategory(format!("{side}: {w}"))),
    }
}

/// Why `f: X -> Y` is not an equivalence of n-categories, or `None` if it is.
pub fn equivalence_failure(f: &PrecatMap, x: &Precat, y: &Precat) -> Result<Option<EquivalenceFailure>> {
    f.validate(x, y)?;
    require_ncategory(x, "source")?;
    require_ncategory(y, "target")?;
    let s = x.support().clone();
    match s.n() {
        1 => {
            let (cx, cy) = (extract_category(x)?, extract_category(y)?);
            let one = s.shape_id_of(&[1])?;
            Ok(functor_failure(&cx, &cy, &f.levels()[s.point()], &f.levels()[one]))
        }
        2 => equivalence_failure_2(f, x, y),
        n => Err(Error::Unsupported(format!("equivalences are decided for n <= 2, not n = {n}"))),
    }
}

pub fn is_equivalence(f: &PrecatMap, x: &Precat, y: &Precat) -> Result<bool> {
    Ok(equivalence_failure(f, x, y)?.is_none())
}

fn equivalence_failure_2(f: &PrecatMap, x: &Precat, y: &Precat) -> Result<Option<EquivalenceFailure>> {
    let s = x.support().clone();
    if s.d() < 2 {
        return Err(Error::Unsupported("equivalences at n = 2 need d >= 2".into()));
    }
    let pt = s.point();
    for a in 0..x.size(pt) as u32 {
        for b in 0..x.size(pt) as u32 {
            let (sx, sy, sf) = slice_map(f, x, y, 1, &[a, b])?;
            let (cx, cy) = (extract_category(&sx)?, extract_category(&sy)?);
            let one = sx.support().shape_id_of(&[1])?;
            let fo = &sf.levels()[sx.support().point()];
            if let Some(inner) = functor_failure(&cx, &cy, fo, &sf.levels()[one]) {
                return Ok(Some(EquivalenceFailure::Slice {
                    source: a,
                    target: b,
                    inner: Box::new(inner),
                }));
            }
        }
    }
    // essential surjectivity in the truncation: 1-morphisms up to 2-isomorphism
    let (row, _) = slice_with(y, 1, None)?;
    let c1 = extract_category(&row)?;
    let class = iso_classes(&c1);
    let one = s.shape_id_of(&[1])?;
    let two = s.shape_id_of(&[2])?;
    let ends = edge_ends(&row)?;
    let spine: Vec<MorphId> = [vec![0, 1], vec![1, 2], vec![0, 2]]
        .iter()
        .map(|v| s.morph_from_values(one, two, std::slice::from_ref(v)))
        .collect::<Result<_>>()?;
    let mut composite: HashMap<(usize, usize), usize> = HashMap::new();
    for z in 0..y.size(two) as u32 {
        let e: Vec<usize> = spine.iter().map(|&a| class[y.restrict(one, two, a, z) as usize]).collect();
        composite.insert((e[0], e[1]), e[2]);
    }
    let identity_class = |o: u32| class[y.restrict(one, pt, 0, o) as usize];
    let mut classes: Vec<(usize, u32, u32)> = ends
        .iter()
        .enumerate()
        .map(|(e, &(p, q))| (class[e], p, q))
        .collect();
    classes.sort_unstable();
    classes.dedup();
    let invertible = |k: usize, p: u32, q: u32| {
        classes.iter().any(|&(l, q2, p2)| {
            q2 == q
                && p2 == p
                && composite.get(&(k, l)) == Some(&identity_class(p))
                && composite.get(&(l, k)) == Some(&identity_class(q))
        })
    };
    let images: HashSet<u32> = (0..x.size(pt) as u32).map(|o| f.apply(pt, o)).collect();
    for o in 0..y.size(pt) as u32 {
        let reached = images.contains(&o)
            || classes
                .iter()
                .any(|&(k, p, q)| p == o && images.contains(&q) && invertible(k, p, q));
        if !reached {
            return Ok(Some(EquivalenceFailure::NotEssentiallySurjective { object: o }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{self, Functor};
    use crate::lifting::complete_from_empty;
    use crate::precat::{nerve, nerve_functor, promote, promote_map, Cell, CellComplex};
    use crate::support::{BoundaryMode, Support};

    #[test]
    fn nerves_are_categories() {
        let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
        for name in category::BUILTIN_NAMES {
            let c = category::builtin(name).unwrap();
            let n = nerve(&s, &c).unwrap();
            assert_eq!(is_ncategory(&n).unwrap(), None, "{name}");
            let back = extract_category(&n).unwrap();
            assert_eq!(back.arrow_count(), c.arrow_count());
            let p = promote(&nerve(&Support::shared(1, 2, BoundaryMode::Free).unwrap(), &c).unwrap()).unwrap();
            assert_eq!(is_ncategory(&p).unwrap(), None, "{name} promoted");
        }
        assert_eq!(is_ncategory(&Precat::terminal(s)).unwrap(), None);
    }

    #[test]
    fn two_points_completed_over_the_point_is_not_a_category() {
        let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
        let t = Precat::terminal(s.clone());
        let two = CellComplex::from_cells(s.clone(), vec![Cell::point(&s), Cell::point(&s)]).unwrap();
        let c = crate::lifting::small_way(&two, &crate::precat::ComplexMap::new(vec![0, 0]), &t, 8).unwrap();
        assert!(crate::lifting::satisfies_lifting(c.over(&t)).is_none());
        let w = is_ncategory(c.precat()).unwrap().unwrap();
        assert!(matches!(w, SegalWitness::NotSurjective { level: 2, .. }), "{w}");
    }

    #[test]
    fn equivalences_of_nerves() {
        let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
        let (iso, pt, ar) = (category::iso(), category::point(), category::arrow());
        let to_pt = |c: &FiniteCategory| Functor {
            objects: vec![0; c.object_count()],
            arrows: vec![0; c.arrow_count()],
        };
        let f = nerve_functor(&s, &iso, &pt, &to_pt(&iso)).unwrap();
        assert!(is_equivalence(&f, &nerve(&s, &iso).unwrap(), &nerve(&s, &pt).unwrap()).unwrap());
        let g = nerve_functor(&s, &ar, &pt, &to_pt(&ar)).unwrap();
        let failure = equivalence_failure(&g, &nerve(&s, &ar).unwrap(), &nerve(&s, &pt).unwrap()).unwrap();
        assert_eq!(failure, Some(EquivalenceFailure::NotFull { source: 1, target: 0 }));
        let n = nerve(&s, &ar).unwrap();
        assert!(is_equivalence(&PrecatMap::identity(&n), &n, &n).unwrap());
    }

    #[test]
    fn promoted_equivalences() {
        let s = Support::shared(1, 2, BoundaryMode::Free).unwrap();
        let (iso, pt, ar) = (category::iso(), category::point(), category::arrow());
        let fi = nerve_functor(&s, &iso, &pt, &Functor { objects: vec![0, 0], arrows: vec![0; 4] }).unwrap();
        let (ni, np) = (nerve(&s, &iso).unwrap(), nerve(&s, &pt).unwrap());
        let (pi, pp) = (promote(&ni).unwrap(), promote(&np).unwrap());
        assert!(is_equivalence(&promote_map(&fi, &ni).unwrap(), &pi, &pp).unwrap());
        let fa = nerve_functor(&s, &ar, &pt, &Functor { objects: vec![0, 0], arrows: vec![0; 3] }).unwrap();
        let na = nerve(&s, &ar).unwrap();
        let pa = promote(&na).unwrap();
        assert!(!is_equivalence(&promote_map(&fa, &na).unwrap(), &pa, &pp).unwrap());
    }

    #[test]
    fn free_complex_over_arrow_is_a_category() {
        let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
        let ar = nerve(&s, &category::arrow()).unwrap();
        let c = complete_from_empty(&ar, 8).unwrap();
        assert_eq!(is_ncategory(c.precat()).unwrap(), None);
        assert!(is_equivalence(&c.images, c.precat(), &ar).unwrap());
    }
}

//! Lifting squares against the cofibrations `∂(M) -> h(M)` and the "small way"
//! completion that attaches a cell for every square without a lift.

mod segal;
mod slice;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
pub use crate::precat::ELEMENT_LIMIT;
use crate::precat::{CellComplex, ComplexMap, Evaluation, Precat, PrecatMap};
use crate::support::{ShapeId, Support};

pub use segal::{equivalence_failure, extract_category, is_equivalence, is_ncategory, EquivalenceFailure, SegalWitness};
pub use slice::{slice, slice_map, slice_reduction_check, SliceReport};

/// A commutative square: boundary elements of `W` at the face levels of
/// `shape` and a base element `v` of `V_shape` with matching faces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LiftSquare {
    pub shape: ShapeId,
    pub boundary: Vec<u32>,
    pub base: u32,
}

/// The data of a map `W -> V` seen levelwise.
#[derive(Clone, Copy)]
pub struct Over<'a> {
    pub source: &'a Precat,
    pub map: &'a PrecatMap,
    pub target: &'a Precat,
}

impl<'a> Over<'a> {
    pub fn new(source: &'a Precat, map: &'a PrecatMap, target: &'a Precat) -> Over<'a> {
        Over { source, map, target }
    }

    fn support(&self) -> &Support {
        self.source.support()
    }
}

fn check_square(over: Over<'_>, sq: &LiftSquare) -> Result<()> {
    let s = over.support();
    if sq.shape >= s.shape_count() {
        return Err(Error::MalformedSquare(format!("shape id {} outside the support", sq.shape)));
    }
    let faces = s.faces(sq.shape);
    if sq.boundary.len() != faces.len() {
        return Err(Error::MalformedSquare(format!(
            "{} boundary elements for {} faces",
            sq.boundary.len(),
            faces.len()
        )));
    }
    if sq.base as usize >= over.target.size(sq.shape) {
        return Err(Error::MalformedSquare("base element out of range".into()));
    }
    for (&w, f) in sq.boundary.iter().zip(faces) {
        if w as usize >= over.source.size(f.source) {
            return Err(Error::MalformedSquare("boundary element out of range".into()));
        }
        if over.map.apply(f.source, w) != over.target.restrict(f.source, sq.shape, f.morphism, sq.base) {
            return Err(Error::MalformedSquare("square does not commute".into()));
        }
    }
    for c in s.constraints(sq.shape) {
        let (fi, fj) = (faces[c.i].source, faces[c.j].source);
        if over.source.restrict(c.level, fi, c.along_i, sq.boundary[c.i])
            != over.source.restrict(c.level, fj, c.along_j, sq.boundary[c.j])
        {
            return Err(Error::MalformedSquare("boundary elements disagree on their overlap".into()));
        }
    }
    Ok(())
}

/// The least element of `W_M` with the given faces over `v`, if any.
pub fn find_lift(over: Over<'_>, sq: &LiftSquare) -> Result<Option<u32>> {
    check_square(over, sq)?;
    Ok((0..over.source.size(sq.shape) as u32).find(|&x| {
        over.map.apply(sq.shape, x) == sq.base && over.source.face_tuple(sq.shape, x) == sq.boundary
    }))
}

/// All squares of shape `shape`, ordered by boundary tuple then base element.
pub fn enumerate_squares(over: Over<'_>, shape: ShapeId) -> Vec<LiftSquare> {
    let s = over.support();
    let faces = s.faces(shape);
    let mut fibers: HashMap<ShapeId, HashMap<u32, Vec<u32>>> = HashMap::new();
    for f in faces {
        fibers.entry(f.source).or_insert_with(|| {
            let mut m: HashMap<u32, Vec<u32>> = HashMap::new();
            for w in 0..over.source.size(f.source) as u32 {
                m.entry(over.map.apply(f.source, w)).or_default().push(w);
            }
            m
        });
    }
    // constraints grouped by the later of their two indices
    let mut checks: Vec<Vec<_>> = vec![Vec::new(); faces.len()];
    for c in s.constraints(shape) {
        checks[c.i.max(c.j)].push(*c);
    }
    let empty = Vec::new();
    let mut out = Vec::new();
    for base in 0..over.target.size(shape) as u32 {
        let candidates: Vec<&Vec<u32>> = faces
            .iter()
            .map(|f| {
                let u = over.target.restrict(f.source, shape, f.morphism, base);
                fibers[&f.source].get(&u).unwrap_or(&empty)
            })
            .collect();
        if candidates.iter().any(|c| c.is_empty()) {
            continue;
        }
        let mut cur = Vec::with_capacity(faces.len());
        let mut stack = vec![0usize];
        while let Some(&pos) = stack.last() {
            let depth = stack.len() - 1;
            if depth == faces.len() {
                out.push(LiftSquare {
                    shape,
                    boundary: cur.clone(),
                    base,
                });
                stack.pop();
                cur.pop();
                continue;
            }
            if pos >= candidates[depth].len() {
                stack.pop();
                if !stack.is_empty() {
                    cur.pop();
                }
                continue;
            }
            *stack.last_mut().expect("nonempty") += 1;
            let w = candidates[depth][pos];
            let ok = checks[depth].iter().all(|c| {
                let other = if c.i == depth { c.j } else { c.i };
                let (along_here, along_other) = if c.i == depth { (c.along_i, c.along_j) } else { (c.along_j, c.along_i) };
                over.source.restrict(c.level, faces[depth].source, along_here, w)
                    == over.source.restrict(c.level, faces[other].source, along_other, cur[other])
            });
            if ok {
                cur.push(w);
                stack.push(0);
            }
        }
    }
    out.sort_by(|a, b| (&a.boundary, a.base).cmp(&(&b.boundary, b.base)));
    out
}

fn lift_index(over: Over<'_>, shape: ShapeId) -> HashMap<(Vec<u32>, u32), u32> {
    let mut index = HashMap::new();
    for x in 0..over.source.size(shape) as u32 {
        index
            .entry((over.source.face_tuple(shape, x), over.map.apply(shape, x)))
            .or_insert(x);
    }
    index
}

/// The first square (in shape order, then square order) without a lift.
pub fn satisfies_lifting(over: Over<'_>) -> Option<LiftSquare> {
    let s = over.support();
    for shape in 0..s.shape_count() {
        let index = lift_index(over, shape);
        for sq in enumerate_squares(over, shape) {
            if !index.contains_key(&(sq.boundary.clone(), sq.base)) {
                return Some(sq);
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PassStats {
    pub pass: usize,
    pub squares_scanned: usize,
    /// Cells attached during this pass, by shape.
    pub added: BTreeMap<String, usize>,
    pub cells_after: usize,
    pub elements_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletionReport {
    pub passes: usize,
    pub fixpoint: bool,
    pub pass_limit: usize,
    pub initial_cells: usize,
    pub final_cells: usize,
    pub per_pass: Vec<PassStats>,
}

impl CompletionReport {
    pub fn cells_added(&self) -> usize {
        self.final_cells - self.initial_cells
    }
}

/// Output of the completion: `W ⊇ U`, the extended map `W -> V` and a report.
#[derive(Clone, Debug)]
pub struct Completion {
    pub evaluation: Evaluation,
    pub map: ComplexMap,
    pub images: PrecatMap,
    pub report: CompletionReport,
}

impl Completion {
    pub fn complex(&self) -> &CellComplex {
        self.evaluation.complex()
    }

    pub fn precat(&self) -> &Precat {
        self.evaluation.precat()
    }

    pub fn over<'a>(&'a self, target: &'a Precat) -> Over<'a> {
        Over::new(self.evaluation.precat(), &self.images, target)
    }
}

pub const DEFAULT_PASS_LIMIT: usize = 8;

/// Extend `map: U -> V` by attaching, shape by shape, one cell for every
/// square that has no lift when it is scanned; repeat until a sweep adds
/// nothing or `pass_limit` sweeps have run.
pub fn small_way(u: &CellComplex, map: &ComplexMap, v: &Precat, pass_limit: usize) -> Result<Completion> {
    map.validate(u, v)?;
    let evaluation = u.evaluate()?;
    small_way_from(evaluation, map.clone(), v, pass_limit)
}

/// As [`small_way`], starting from an already evaluated complex.
pub fn small_way_from(mut ev: Evaluation, mut map: ComplexMap, v: &Precat, pass_limit: usize) -> Result<Completion> {
    let s = ev.support().clone();
    let mut images = map.to_precat_map(&ev, v);
    let initial_cells = ev.complex().len();
    let mut per_pass = Vec::new();
    let mut fixpoint = false;
    for pass in 1..=pass_limit {
        let mut added: BTreeMap<String, usize> = BTreeMap::new();
        let mut scanned = 0;
        for shape in 0..s.shape_count() {
            let squares = enumerate_squares(Over::new(ev.precat(), &images, v), shape);
            scanned += squares.len();
            let mut index = lift_index(Over::new(ev.precat(), &images, v), shape);
            for sq in squares {
                let key = (sq.boundary, sq.base);
                if index.contains_key(&key) {
                    continue;
                }
                let first_new = ev.precat().size(shape) as u32;
                let c = ev.push_indices(shape, key.0.clone())?;
                if ev.precat().total_size() > ELEMENT_LIMIT {
                    return Err(Error::ElementLimit(ELEMENT_LIMIT));
                }
                map.push(sq.base);
                for level in 0..s.shape_count() {
                    let lv = &mut images.levels_mut()[level];
                    lv.extend(s.interior(level, shape).iter().map(|&a| v.restrict(level, shape, a, sq.base)));
                }
                for x in first_new..ev.precat().size(shape) as u32 {
                    index
                        .entry((ev.precat().face_tuple(shape, x), images.apply(shape, x)))
                        .or_insert(x);
                }
                debug_assert_eq!(ev.complex().len(), c + 1);
                *added.entry(s.shape(shape).to_string()).or_insert(0) += 1;
            }
        }
        let nothing = added.is_empty();
        per_pass.push(PassStats {
            pass,
            squares_scanned: scanned,
            added,
            cells_after: ev.complex().len(),
            elements_after: ev.precat().total_size(),
        });
        if nothing {
            fixpoint = true;
            break;
        }
    }
    let report = CompletionReport {
        passes: per_pass.len(),
        fixpoint,
        pass_limit,
        initial_cells,
        final_cells: ev.complex().len(),
        per_pass,
    };
    Ok(Completion {
        evaluation: ev,
        map,
        images,
        report,
    })
}

/// `small_way(∅ -> V)`.
pub fn complete_from_empty(v: &Precat, pass_limit: usize) -> Result<Completion> {
    small_way(&CellComplex::new(v.support().clone()), &ComplexMap::new(Vec::new()), v, pass_limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category;
    use crate::precat::{nerve, Cell};
    use crate::support::BoundaryMode;

    #[test]
    fn completion_over_nerves() {
        let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
        let pt = nerve(&s, &category::point()).unwrap();
        let c = complete_from_empty(&pt, 8).unwrap();
        assert_eq!(c.complex().len(), 1);
        assert!(c.report.fixpoint && c.report.passes <= 2);

        let ar = nerve(&s, &category::arrow()).unwrap();
        let c = complete_from_empty(&ar, 8).unwrap();
        assert_eq!(c.complex().len(), 3);
        assert!(satisfies_lifting(c.over(&ar)).is_none());

        let iso = nerve(&s, &category::iso()).unwrap();
        let c = complete_from_empty(&iso, 8).unwrap();
        let census: Vec<usize> = c.complex().census().values().copied().collect();
        assert_eq!(census, vec![2, 2, 2, 2]);
        let again = small_way(c.complex(), &c.map, &iso, 8).unwrap();
        assert_eq!(again.report.cells_added(), 0);
    }

    #[test]
    fn squares_and_lifts_over_the_arrow() {
        let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
        let ar = nerve(&s, &category::arrow()).unwrap();
        let mut ev = Evaluation::new(s.clone());
        ev.push_cell(Cell::point(&s)).unwrap();
        ev.push_cell(Cell::point(&s)).unwrap();
        let map = ComplexMap::new(vec![0, 1]);
        let f = map.to_precat_map(&ev, &ar);
        let over = Over::new(ev.precat(), &f, &ar);
        let one = s.shape_id_of(&[1]).unwrap();
        let squares = enumerate_squares(over, one);
        assert_eq!(squares.len(), 3);
        let arrow_f = (0..3).find(|&x| ar.label(one, x) == "f").unwrap();
        let sq = LiftSquare {
            shape: one,
            boundary: vec![0, 1],
            base: arrow_f,
        };
        assert_eq!(find_lift(over, &sq).unwrap(), None);
        let failing = satisfies_lifting(over).unwrap();
        assert_eq!(failing.shape, one);

        ev.push_indices(one, vec![0, 1]).unwrap();
        let mut map = map;
        map.push(arrow_f);
        let f = map.to_precat_map(&ev, &ar);
        let over = Over::new(ev.precat(), &f, &ar);
        assert!(find_lift(over, &sq).unwrap().is_some());

        let bad = LiftSquare {
            shape: one,
            boundary: vec![1, 0],
            base: arrow_f,
        };
        assert!(find_lift(over, &bad).is_err());
    }

    #[test]
    fn point_over_point_has_one_edge_square() {
        let s = Support::shared(1, 2, BoundaryMode::Free).unwrap();
        let t = Precat::terminal(s.clone());
        let c = complete_from_empty(&t, 8).unwrap();
        let squares = enumerate_squares(c.over(&t), s.shape_id_of(&[1]).unwrap());
        assert_eq!(squares.len(), 1);
        assert!(satisfies_lifting(c.over(&t)).is_none());
    }
}

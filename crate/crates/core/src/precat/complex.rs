//! Cell complexes: presheaves presented as ordered attachments of `h(M)` along `∂(M)`.
//!
//! Evaluation is incremental. The elements contributed by a cell `c` of shape
//! `M` are the interior morphisms `a: N -> M`, stored in hom-set order after
//! every element of earlier cells. Restricting `(c, a)` along `g` recomputes
//! `g ; a` and, when that lands in the boundary, resolves it through the
//! attachment of the face it factors through.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{check_support, representable, Precat, PrecatMap};
use crate::error::{Error, Result};
use crate::support::{BoundaryMode, MorphId, ShapeId, Support};

/// An element `(cell, a: level -> shape(cell))` of a complex, before normalisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElemRef {
    pub cell: usize,
    pub level: ShapeId,
    pub morphism: MorphId,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub shape: ShapeId,
    /// One element of level `source(face_i)` per face of `shape`.
    pub attachment: Vec<ElemRef>,
}

impl Cell {
    pub fn point(support: &Support) -> Cell {
        Cell {
            shape: support.point(),
            attachment: Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CellComplex {
    support: Arc<Support>,
    cells: Vec<Cell>,
}

impl CellComplex {
    pub fn new(support: Arc<Support>) -> CellComplex {
        CellComplex {
            support,
            cells: Vec::new(),
        }
    }

    /// A complex from a cell list, validated by evaluating it.
    pub fn from_cells(support: Arc<Support>, cells: Vec<Cell>) -> Result<CellComplex> {
        let mut ev = Evaluation::new(support);
        for c in cells {
            ev.push_cell(c)?;
        }
        Ok(ev.into_complex())
    }

    pub fn support(&self) -> &Arc<Support> {
        &self.support
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, c: usize) -> &Cell {
        &self.cells[c]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn evaluate(&self) -> Result<Evaluation> {
        let mut ev = Evaluation::new(self.support.clone());
        for c in &self.cells {
            ev.push_cell(c.clone())?;
        }
        Ok(ev)
    }

    pub fn attach_cell(&self, cell: Cell) -> Result<CellComplex> {
        let mut ev = self.evaluate()?;
        ev.push_cell(cell)?;
        Ok(ev.into_complex())
    }

    /// Number of cells per shape, keyed by shape id.
    pub fn census(&self) -> BTreeMap<ShapeId, usize> {
        let mut out = BTreeMap::new();
        for c in &self.cells {
            *out.entry(c.shape).or_insert(0) += 1;
        }
        out
    }

    /// `self ⊔ other`: cells of `self`, then re-indexed cells of `other`.
    pub fn disjoint_union(&self, other: &CellComplex) -> Result<CellComplex> {
        Ok(glue(self, other, &[])?.0)
    }
}

/// Pushout of `w1 <- S -> w2` where `S` is a subcomplex of `w2` given as
/// pairs `(cell of w2, cell of w1)`. Returns the glued complex and the new
/// index of every cell of `w2`; cells of `w1` keep their indices.
pub fn glue(w1: &CellComplex, w2: &CellComplex, shared: &[(usize, usize)]) -> Result<(CellComplex, Vec<usize>)> {
    check_support(&w1.support, &w2.support)?;
    let mut ident: HashMap<usize, usize> = HashMap::new();
    let mut hit = vec![false; w1.len()];
    for &(c2, c1) in shared {
        if c2 >= w2.len() || c1 >= w1.len() {
            return Err(Error::InvalidComplex(format!("identified pair ({c2}, {c1}) is out of range")));
        }
        if ident.insert(c2, c1).is_some() || std::mem::replace(&mut hit[c1], true) {
            return Err(Error::InvalidComplex(format!("cell identification repeats ({c2}, {c1})")));
        }
    }
    for (&c2, &c1) in &ident {
        let a = &w2.cells[c2];
        let b = &w1.cells[c1];
        if a.shape != b.shape || a.attachment.len() != b.attachment.len() {
            return Err(Error::InvalidComplex(format!("cells {c2} and {c1} have different shapes")));
        }
        for (ea, eb) in a.attachment.iter().zip(&b.attachment) {
            let mapped = ident.get(&ea.cell).ok_or_else(|| {
                Error::InvalidComplex(format!(
                    "identified cell {c2} is attached to cell {} outside the identification",
                    ea.cell
                ))
            })?;
            if *mapped != eb.cell || ea.level != eb.level || ea.morphism != eb.morphism {
                return Err(Error::InvalidComplex(format!(
                    "identified cells {c2} and {c1} have different attachments"
                )));
            }
        }
    }
    let mut cells = w1.cells.clone();
    let mut index = vec![0; w2.len()];
    for (c2, cell) in w2.cells.iter().enumerate() {
        if let Some(&c1) = ident.get(&c2) {
            index[c2] = c1;
            continue;
        }
        let attachment = cell
            .attachment
            .iter()
            .map(|e| ElemRef {
                cell: index[e.cell],
                ..*e
            })
            .collect();
        index[c2] = cells.len();
        cells.push(Cell {
            shape: cell.shape,
            attachment,
        });
    }
    Ok((
        CellComplex {
            support: w1.support.clone(),
            cells,
        },
        index,
    ))
}

/// A complex together with its levelwise evaluation, grown one cell at a time.
#[derive(Clone, Debug)]
pub struct Evaluation {
    complex: CellComplex,
    precat: Precat,
    // offsets[cell][shape]: index of the cell's first element at that level
    offsets: Vec<Vec<u32>>,
    // resolved attachment elements of each cell
    attached: Vec<Vec<u32>>,
    origin: Vec<Vec<(u32, MorphId)>>,
}

impl Evaluation {
    pub fn new(support: Arc<Support>) -> Evaluation {
        let k = support.shape_count();
        Evaluation {
            complex: CellComplex::new(support.clone()),
            precat: Precat::empty(support),
            offsets: Vec::new(),
            attached: Vec::new(),
            origin: vec![Vec::new(); k],
        }
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn precat(&self) -> &Precat {
        &self.precat
    }

    pub fn into_complex(self) -> CellComplex {
        self.complex
    }

    pub fn into_parts(self) -> (CellComplex, Precat) {
        (self.complex, self.precat)
    }

    pub fn support(&self) -> &Arc<Support> {
        &self.complex.support
    }

    /// Index of the element `(c, id)` at the level of `c`'s shape.
    pub fn cell_element(&self, c: usize) -> u32 {
        let s = self.support();
        let shape = self.complex.cells[c].shape;
        let id = s.identity(shape);
        self.offsets[c][shape] + s.interior_rank(shape, shape, id).expect("the identity is interior")
    }

    pub fn attachment_elements(&self, c: usize) -> &[u32] {
        &self.attached[c]
    }

    /// Normal form of an element: its cell and interior morphism.
    pub fn element(&self, shape: ShapeId, x: u32) -> ElemRef {
        let (cell, morphism) = self.origin[shape][x as usize];
        ElemRef {
            cell: cell as usize,
            level: shape,
            morphism,
        }
    }

    /// Level index of `(cell, morphism)`, normalising through attachments when
    /// the morphism lies in the boundary.
    pub fn index_of(&self, e: ElemRef) -> Result<u32> {
        let s = self.support();
        let cell = self
            .complex
            .cells
            .get(e.cell)
            .ok_or_else(|| Error::InvalidAttachment(format!("cell {} does not exist yet", e.cell)))?;
        if e.level >= s.shape_count() || e.morphism as usize >= s.hom_len(e.level, cell.shape) {
            return Err(Error::InvalidAttachment(format!(
                "no morphism {} from level {} into cell {}",
                e.morphism, e.level, e.cell
            )));
        }
        Ok(self.resolve(e.cell, e.level, e.morphism))
    }

    fn resolve(&self, c: usize, level: ShapeId, a: MorphId) -> u32 {
        let s = &self.complex.support;
        let shape = self.complex.cells[c].shape;
        match s.factor(level, shape, a) {
            None => self.offsets[c][level] + s.interior_rank(level, shape, a).expect("interior morphism"),
            Some((i, b)) => {
                let face = s.faces(shape)[i];
                self.precat.restrict(level, face.source, b, self.attached[c][i])
            }
        }
    }

    /// Resolve and check a candidate attachment for a cell of `shape`.
    pub fn check_attachment(&self, shape: ShapeId, attachment: &[ElemRef]) -> Result<Vec<u32>> {
        let s = self.support().clone();
        if shape >= s.shape_count() {
            return Err(Error::InvalidAttachment(format!("shape id {shape} outside the support")));
        }
        let faces = s.faces(shape);
        if attachment.len() != faces.len() {
            return Err(Error::InvalidAttachment(format!(
                "cell of shape {} needs {} attachment elements, got {}",
                s.shape(shape),
                faces.len(),
                attachment.len()
            )));
        }
        let mut xs = Vec::with_capacity(faces.len());
        for (e, f) in attachment.iter().zip(faces) {
            if e.level != f.source {
                return Err(Error::InvalidAttachment(format!(
                    "attachment element lives at level {}, face needs {}",
                    s.shape(e.level),
                    s.shape(f.source)
                )));
            }
            xs.push(self.index_of(*e)?);
        }
        self.check_attachment_indices(shape, &xs)?;
        Ok(xs)
    }

    pub fn check_attachment_indices(&self, shape: ShapeId, xs: &[u32]) -> Result<()> {
        let s = self.support();
        let faces = s.faces(shape);
        if xs.len() != faces.len() {
            return Err(Error::InvalidAttachment(format!(
                "cell of shape {} needs {} attachment elements, got {}",
                s.shape(shape),
                faces.len(),
                xs.len()
            )));
        }
        for (x, f) in xs.iter().zip(faces) {
            if *x as usize >= self.precat.size(f.source) {
                return Err(Error::InvalidAttachment(format!("attachment element {x} out of range")));
            }
        }
        for c in s.constraints(shape) {
            let fi = faces[c.i].source;
            let fj = faces[c.j].source;
            if self.precat.restrict(c.level, fi, c.along_i, xs[c.i]) != self.precat.restrict(c.level, fj, c.along_j, xs[c.j]) {
                return Err(Error::InvalidAttachment(format!(
                    "attachment elements {} and {} of a {}-cell disagree on their common boundary",
                    c.i,
                    c.j,
                    s.shape(shape)
                )));
            }
        }
        Ok(())
    }

    /// Attach a cell; returns its index.
    pub fn push_cell(&mut self, cell: Cell) -> Result<usize> {
        let xs = self.check_attachment(cell.shape, &cell.attachment)?;
        Ok(self.push_resolved(cell, xs))
    }

    /// Attach a cell whose boundary is given by element indices.
    pub fn push_indices(&mut self, shape: ShapeId, xs: Vec<u32>) -> Result<usize> {
        self.check_attachment_indices(shape, &xs)?;
        let attachment = xs
            .iter()
            .zip(self.support().faces(shape))
            .map(|(&x, f)| self.element(f.source, x))
            .collect();
        Ok(self.push_resolved(Cell { shape, attachment }, xs))
    }

    fn push_resolved(&mut self, cell: Cell, xs: Vec<u32>) -> usize {
        let s = self.complex.support.clone();
        let k = s.shape_count();
        let shape = cell.shape;
        let c = self.complex.cells.len();
        let offsets: Vec<u32> = self.precat.sizes().iter().map(|&n| n as u32).collect();
        self.complex.cells.push(cell);
        self.offsets.push(offsets);
        self.attached.push(xs);

        let mut new_tables: Vec<(usize, usize, Vec<u32>)> = Vec::new();
        for tgt in 0..k {
            let interior = s.interior(tgt, shape);
            if interior.is_empty() {
                continue;
            }
            for src in 0..k {
                for g in 0..s.hom_len(src, tgt) as MorphId {
                    let col = interior
                        .iter()
                        .map(|&a| self.resolve(c, src, s.compose_idx(src, tgt, shape, g, a)))
                        .collect();
                    new_tables.push((s.pair(src, tgt), g as usize, col));
                }
            }
        }
        let tables = self.precat.tables_mut();
        for (pair, g, col) in new_tables {
            tables[pair][g].extend(col);
        }
        for tgt in 0..k {
            let interior = s.interior(tgt, shape);
            self.precat.sizes_mut()[tgt] += interior.len();
            self.origin[tgt].extend(interior.iter().map(|&a| (c as u32, a)));
        }
        c
    }

    /// Human-readable element name `c<cell>:<morphism components>`.
    pub fn describe(&self, shape: ShapeId, x: u32) -> String {
        let e = self.element(shape, x);
        let s = self.support();
        let m = s.morph(shape, self.complex.cells[e.cell].shape, e.morphism);
        let comps: Vec<String> = m
            .components()
            .iter()
            .map(|c| c.values().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(""))
            .collect();
        format!("c{}:{}", e.cell, comps.join("/"))
    }
}

/// A map out of a complex, determined by one target element per cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComplexMap {
    images: Vec<u32>,
}

impl ComplexMap {
    pub fn new(images: Vec<u32>) -> ComplexMap {
        ComplexMap { images }
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn image(&self, c: usize) -> u32 {
        self.images[c]
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub(crate) fn push(&mut self, x: u32) {
        self.images.push(x);
    }

    /// Image of an element `(c, a)`: the cell image restricted along `a`.
    pub fn image_of(&self, complex: &CellComplex, target: &Precat, e: ElemRef) -> u32 {
        target.restrict(e.level, complex.cells[e.cell].shape, e.morphism, self.images[e.cell])
    }

    pub fn validate(&self, complex: &CellComplex, target: &Precat) -> Result<()> {
        check_support(&complex.support, target.support())?;
        if self.images.len() != complex.len() {
            return Err(Error::InvalidMap(format!(
                "{} cell images for a complex with {} cells",
                self.images.len(),
                complex.len()
            )));
        }
        let s = &complex.support;
        for (c, cell) in complex.cells.iter().enumerate() {
            if self.images[c] as usize >= target.size(cell.shape) {
                return Err(Error::InvalidMap(format!("image of cell {c} out of range")));
            }
            for (e, f) in cell.attachment.iter().zip(s.faces(cell.shape)) {
                let via_face = target.restrict(f.source, cell.shape, f.morphism, self.images[c]);
                if via_face != self.image_of(complex, target, *e) {
                    return Err(Error::InvalidMap(format!(
                        "cell {c}: face restriction of the image differs from the image of its attachment"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The induced levelwise map `evaluate(W) -> target`.
    pub fn to_precat_map(&self, eval: &Evaluation, target: &Precat) -> PrecatMap {
        let k = eval.support().shape_count();
        PrecatMap::new(
            (0..k)
                .map(|shape| {
                    (0..eval.precat().size(shape) as u32)
                        .map(|x| self.image_of(eval.complex(), target, eval.element(shape, x)))
                        .collect()
                })
                .collect(),
        )
    }

    /// The restriction of a levelwise map to cells.
    pub fn from_precat_map(eval: &Evaluation, f: &PrecatMap) -> ComplexMap {
        ComplexMap::new(
            (0..eval.complex().len())
                .map(|c| f.apply(eval.complex().cell(c).shape, eval.cell_element(c)))
                .collect(),
        )
    }

    /// Post-compose with a levelwise map.
    pub fn then(&self, complex: &CellComplex, f: &PrecatMap) -> ComplexMap {
        ComplexMap::new(
            self.images
                .iter()
                .enumerate()
                .map(|(c, &x)| f.apply(complex.cells[c].shape, x))
                .collect(),
        )
    }

    /// The map sending cell `c` to cell `cells[c]` of the evaluated target.
    pub fn cell_inclusion(cells: &[usize], target: &Evaluation) -> ComplexMap {
        ComplexMap::new(cells.iter().map(|&c| target.cell_element(c)).collect())
    }

    /// Precompose with a cell map `W' -> W` (cell `c` of `W'` goes to `cells[c]`).
    pub fn restrict_cells(&self, cells: &[usize]) -> ComplexMap {
        ComplexMap::new(cells.iter().map(|&c| self.images[c]).collect())
    }
}

/// The fold map `W ⊔ W -> W` into the evaluation of `W`.
pub fn fold_map(eval: &Evaluation) -> ComplexMap {
    let n = eval.complex().len();
    ComplexMap::new((0..2 * n).map(|c| eval.cell_element(c % n)).collect())
}

/// Characteristic morphisms of the cells of the boundary complex of `shape`,
/// ordered so that every cell's faces come earlier.
fn boundary_cells(support: &Support, shape: ShapeId) -> Result<Vec<(ShapeId, MorphId)>> {
    let m = support.shape(shape).clone();
    let mut out = Vec::new();
    match support.mode() {
        BoundaryMode::Free => {
            for i in 0..m.len() {
                let src = support.shape_id_of(&m.entries()[..i])?;
                for c in 0..=m.entries()[i] {
                    let mut comps: Vec<Vec<u32>> = m.entries()[..i].iter().map(|&e| (0..=e).collect()).collect();
                    comps.push(vec![c]);
                    out.push((src, support.morph_from_values(src, shape, &comps)?));
                }
            }
        }
        BoundaryMode::Full => {
            let top = m.entry_or_zero(0);
            for j in 0..top {
                let src = if j == 0 { support.point() } else { support.shape_id_of(&[j])? };
                for values in increasing_sequences(j as usize + 1, top) {
                    out.push((src, support.morph_from_values(src, shape, &[values])?));
                }
            }
        }
    }
    Ok(out)
}

fn increasing_sequences(len: usize, max: u32) -> Vec<Vec<u32>> {
    fn go(len: usize, next: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in next..=max {
            cur.push(v);
            go(len, v + 1, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, 0, max, &mut Vec::new(), &mut out);
    out
}

fn complex_from_chars(
    support: &Arc<Support>,
    shape: ShapeId,
    chars: &[(ShapeId, MorphId)],
) -> Result<(CellComplex, ComplexMap)> {
    let position: HashMap<(ShapeId, MorphId), usize> = chars.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut cells = Vec::with_capacity(chars.len());
    for &(src, ch) in chars {
        let attachment = support
            .faces(src)
            .iter()
            .map(|f| {
                let composite = support.compose_idx(f.source, src, shape, f.morphism, ch);
                position
                    .get(&(f.source, composite))
                    .map(|&cell| ElemRef {
                        cell,
                        level: f.source,
                        morphism: support.identity(f.source),
                    })
                    .ok_or_else(|| Error::InvalidComplex("boundary cell face has no cell".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        cells.push(Cell { shape: src, attachment });
    }
    let complex = CellComplex::from_cells(support.clone(), cells)?;
    Ok((complex, ComplexMap::new(chars.iter().map(|&(_, ch)| ch).collect())))
}

/// `∂(M)` as a cell complex, with its characteristic map into `h(M)`.
pub fn boundary_complex(support: &Arc<Support>, shape: ShapeId) -> Result<(CellComplex, ComplexMap)> {
    complex_from_chars(support, shape, &boundary_cells(support, shape)?)
}

/// `h(M)` as a cell complex: the boundary complex plus one top cell.
pub fn representable_complex(support: &Arc<Support>, shape: ShapeId) -> Result<(CellComplex, ComplexMap)> {
    let mut chars = boundary_cells(support, shape)?;
    chars.push((shape, support.identity(shape)));
    complex_from_chars(support, shape, &chars)
}

/// Whether the evaluated boundary complex maps isomorphically onto `∂(M) ⊂ h(M)`.
pub fn check_boundary_duality(support: &Arc<Support>, shape: ShapeId) -> Result<bool> {
    let (w, chi) = boundary_complex(support, shape)?;
    let ev = w.evaluate()?;
    let h = representable(support, shape);
    chi.validate(&w, &h)?;
    let f = chi.to_precat_map(&ev, &h);
    f.validate(ev.precat(), &h)?;
    if !f.is_injective() {
        return Ok(false);
    }
    for level in 0..support.shape_count() {
        let mut image = f.levels()[level].clone();
        image.sort_unstable();
        let expected: Vec<u32> = (0..support.hom_len(level, shape) as MorphId)
            .filter(|&a| !support.is_interior(level, shape, a))
            .collect();
        if image != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precat::boundary;

    fn shapes_of(w: &CellComplex) -> Vec<String> {
        w.cells().iter().map(|c| w.support().shape(c.shape).to_string()).collect()
    }

    #[test]
    fn cell_elements_restrict_to_their_attachment() {
        for (n, d) in [(1, 3), (2, 2)] {
            let s = Support::shared(n, d, BoundaryMode::Free).unwrap();
            for shape in 0..s.shape_count() {
                let (w, _) = representable_complex(&s, shape).unwrap();
                let ev = w.evaluate().unwrap();
                for c in 0..w.len() {
                    let sh = w.cell(c).shape;
                    for (i, f) in s.faces(sh).iter().enumerate() {
                        let x = ev.precat().restrict(f.source, sh, f.morphism, ev.cell_element(c));
                        assert_eq!(x, ev.attachment_elements(c)[i]);
                    }
                }
            }
        }
    }

    #[test]
    fn boundary_complex_cells() {
        let s = Support::shared(2, 2, BoundaryMode::Free).unwrap();
        let (w, _) = boundary_complex(&s, s.shape_id_of(&[2]).unwrap()).unwrap();
        assert_eq!(shapes_of(&w), vec!["()", "()", "()"]);
        let (w, _) = boundary_complex(&s, s.shape_id_of(&[1, 1]).unwrap()).unwrap();
        assert_eq!(shapes_of(&w), vec!["()", "()", "(1)", "(1)"]);
        assert_eq!(w.cell(2).attachment, w.cell(3).attachment);
        let (w, _) = boundary_complex(&s, s.shape_id_of(&[2, 1]).unwrap()).unwrap();
        assert_eq!(shapes_of(&w), vec!["()", "()", "()", "(2)", "(2)"]);
    }

    #[test]
    fn duality_on_small_shapes() {
        let s = Support::shared(2, 2, BoundaryMode::Free).unwrap();
        for m in 0..s.shape_count() {
            assert!(check_boundary_duality(&s, m).unwrap(), "{}", s.shape(m));
        }
        let s = Support::shared(1, 4, BoundaryMode::Free).unwrap();
        for m in 0..s.shape_count() {
            assert!(check_boundary_duality(&s, m).unwrap());
        }
    }

    #[test]
    fn full_mode_duality() {
        let s = Support::shared(1, 3, BoundaryMode::Full).unwrap();
        for m in 0..s.shape_count() {
            assert!(check_boundary_duality(&s, m).unwrap(), "{}", s.shape(m));
        }
        let (w, _) = boundary_complex(&s, s.shape_id_of(&[2]).unwrap()).unwrap();
        assert_eq!(shapes_of(&w), vec!["()", "()", "()", "(1)", "(1)", "(1)"]);
    }

    #[test]
    fn representable_complex_evaluates_to_representable() {
        let s = Support::shared(1, 2, BoundaryMode::Free).unwrap();
        let one = s.shape_id_of(&[1]).unwrap();
        let (w, chi) = representable_complex(&s, one).unwrap();
        let ev = w.evaluate().unwrap();
        assert_eq!(ev.precat().sizes(), representable(&s, one).sizes());
        let h = representable(&s, one);
        let f = chi.to_precat_map(&ev, &h);
        f.validate(ev.precat(), &h).unwrap();
        assert!(f.is_bijective(&h));
        ev.precat().validate().unwrap();
    }

    #[test]
    fn pushout_cardinality() {
        let s = Support::shared(1, 2, BoundaryMode::Free).unwrap();
        let mut ev = Evaluation::new(s.clone());
        ev.push_cell(Cell::point(&s)).unwrap();
        ev.push_cell(Cell::point(&s)).unwrap();
        assert_eq!(ev.precat().sizes(), &[2, 2, 2]);
        let before = ev.precat().sizes().to_vec();
        let one = s.shape_id_of(&[1]).unwrap();
        ev.push_indices(one, vec![0, 1]).unwrap();
        let h = representable(&s, one);
        let (b, _) = boundary(&s, one);
        for lv in 0..s.shape_count() {
            assert_eq!(ev.precat().size(lv), before[lv] + h.size(lv) - b.size(lv));
        }
        ev.precat().validate().unwrap();
    }

    #[test]
    fn glue_two_edges_along_endpoints() {
        let s = Support::shared(2, 1, BoundaryMode::Free).unwrap();
        let one = s.shape_id_of(&[1]).unwrap();
        let (w, _) = representable_complex(&s, one).unwrap();
        let (g, index) = glue(&w, &w, &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(index, vec![0, 1, 3]);
        let (b, _) = boundary_complex(&s, s.shape_id_of(&[1, 1]).unwrap()).unwrap();
        assert_eq!(g.cells(), b.cells());

        let u = w.disjoint_union(&w).unwrap();
        assert_eq!(u.len(), 6);
        assert!(glue(&w, &w, &[(2, 2)]).is_err());
    }

    #[test]
    fn incompatible_attachment_is_rejected() {
        let s = Support::shared(2, 1, BoundaryMode::Free).unwrap();
        let mut ev = Evaluation::new(s.clone());
        for _ in 0..3 {
            ev.push_cell(Cell::point(&s)).unwrap();
        }
        let one = s.shape_id_of(&[1]).unwrap();
        let e01 = ev.push_indices(one, vec![0, 1]).unwrap();
        let e02 = ev.push_indices(one, vec![0, 2]).unwrap();
        let a = ev.cell_element(e01);
        let b = ev.cell_element(e02);
        assert!(ev.push_indices(s.shape_id_of(&[1, 1]).unwrap(), vec![a, b]).is_err());
        assert!(ev.push_indices(s.shape_id_of(&[1, 1]).unwrap(), vec![a, a]).is_ok());
    }

    #[test]
    fn fold_and_inclusions() {
        let s = Support::shared(1, 2, BoundaryMode::Free).unwrap();
        let (w, _) = representable_complex(&s, s.shape_id_of(&[1]).unwrap()).unwrap();
        let ev = w.evaluate().unwrap();
        let u = w.disjoint_union(&w).unwrap();
        let fold = fold_map(&ev);
        fold.validate(&u, ev.precat()).unwrap();
        let second: Vec<usize> = (w.len()..2 * w.len()).collect();
        let back = fold.restrict_cells(&second);
        assert_eq!(back, ComplexMap::cell_inclusion(&(0..w.len()).collect::<Vec<_>>(), &ev));
        let uev = u.evaluate().unwrap();
        for lv in 0..s.shape_count() {
            assert_eq!(uev.precat().size(lv), 2 * ev.precat().size(lv));
        }
    }
}

//! Vertex slices `X_{m/}(x_0..x_m)` of 2-precats and the slice reduction of lifting squares.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::{enumerate_squares, lift_index, LiftSquare, Over};
use crate::error::{Error, Result};
use crate::precat::{Precat, PrecatMap};
use crate::support::{ShapeId, Support};

/// The 1-precat `p -> X_(m,p)` (with `X_(m)` at `p = 0`), optionally cut down
/// to elements with the given vertices. Also returns, per level, the
/// upstairs index of every slice element.
pub(crate) fn slice_with(x: &Precat, m: u32, vertices: Option<&[u32]>) -> Result<(Precat, Vec<Vec<u32>>)> {
    let high = x.support().clone();
    if high.n() != 2 {
        return Err(Error::Unsupported(format!("slices are taken of 2-precats, not n = {}", high.n())));
    }
    if m == 0 || m > high.d() {
        return Err(Error::Config(format!("slice index m = {m} outside 1..={}", high.d())));
    }
    if let Some(v) = vertices {
        if v.len() != m as usize + 1 {
            return Err(Error::Config(format!("{} objects given, slice needs {}", v.len(), m + 1)));
        }
        if let Some(bad) = v.iter().find(|&&o| o as usize >= x.size(high.point())) {
            return Err(Error::OutOfSupport(format!("object {bad} does not exist")));
        }
    }
    let low = Support::shared(1, high.d(), crate::support::BoundaryMode::Free)?;
    let upstairs: Vec<ShapeId> = (0..low.shape_count())
        .map(|p| {
            let q = low.shape(p).entry_or_zero(0);
            if q == 0 {
                high.shape_id_of(&[m])
            } else {
                high.shape_id_of(&[m, q])
            }
        })
        .collect::<Result<_>>()?;
    let members: Vec<Vec<u32>> = upstairs
        .iter()
        .map(|&u| {
            (0..x.size(u) as u32)
                .filter(|&a| vertices.map_or(true, |v| x.vertices(u, a) == v))
                .collect()
        })
        .collect();
    let position: Vec<HashMap<u32, u32>> = members
        .iter()
        .map(|lv| lv.iter().enumerate().map(|(i, &a)| (a, i as u32)).collect())
        .collect();
    let id_m: Vec<u32> = (0..=m).collect();
    let mut lifted: HashMap<(ShapeId, ShapeId, u32), u32> = HashMap::new();
    for src in 0..low.shape_count() {
        for tgt in 0..low.shape_count() {
            for psi in 0..low.hom_len(src, tgt) as u32 {
                let raw = vec![id_m.clone(), low.first_values(src, tgt, psi)];
                lifted.insert((src, tgt, psi), high.canonical_morph(upstairs[src], upstairs[tgt], &raw)?);
            }
        }
    }
    let sizes = members.iter().map(|lv| lv.len()).collect();
    let mut slice = Precat::from_fn(low, sizes, |src, tgt, psi, e| {
        let a = members[tgt][e as usize];
        let b = x.restrict(upstairs[src], upstairs[tgt], lifted[&(src, tgt, psi)], a);
        position[src][&b]
    });
    if x.labels().is_some() {
        let labels = members
            .iter()
            .zip(&upstairs)
            .map(|(lv, &u)| lv.iter().map(|&a| x.label(u, a)).collect())
            .collect();
        slice = slice.with_labels(labels);
    }
    Ok((slice, members))
}

/// `X_{m/}(x_0, .., x_m)`: level `p` holds the elements of `X_(m,p)` whose
/// vertices are the given objects.
pub fn slice(x: &Precat, m: u32, objects: &[u32]) -> Result<Precat> {
    Ok(slice_with(x, m, Some(objects))?.0)
}

/// Slices of source and target with the induced map between them.
pub fn slice_map(f: &PrecatMap, x: &Precat, y: &Precat, m: u32, objects: &[u32]) -> Result<(Precat, Precat, PrecatMap)> {
    let high = x.support();
    let (sx, mx) = slice_with(x, m, Some(objects))?;
    let pt = high.point();
    let images: Vec<u32> = objects.iter().map(|&o| f.apply(pt, o)).collect();
    let (sy, my) = slice_with(y, m, Some(&images))?;
    let upstairs: Vec<ShapeId> = (0..sx.support().shape_count())
        .map(|p| {
            let q = sx.support().shape(p).entry_or_zero(0);
            if q == 0 {
                high.shape_id_of(&[m])
            } else {
                high.shape_id_of(&[m, q])
            }
        })
        .collect::<Result<_>>()?;
    let levels = mx
        .iter()
        .zip(&my)
        .zip(&upstairs)
        .map(|((lx, ly), &u)| {
            let pos: HashMap<u32, u32> = ly.iter().enumerate().map(|(i, &b)| (b, i as u32)).collect();
            lx.iter().map(|&a| pos[&f.apply(u, a)]).collect()
        })
        .collect();
    Ok((sx, sy, PrecatMap::new(levels)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub shape: String,
    pub squares: usize,
    pub lifts_upstairs: usize,
    /// First square where upstairs and slice disagree.
    pub mismatch: Option<LiftSquare>,
}

impl SliceReport {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// For every square of shape `(m)` or `(m,p)` against `f: X -> Y`, compare
/// lift existence with the corresponding square of shape `()` or `(p)`
/// against the slice map over the square's vertices.
pub fn slice_reduction_check(f: &PrecatMap, x: &Precat, y: &Precat, shape: ShapeId) -> Result<SliceReport> {
    let high: Arc<Support> = x.support().clone();
    let entries = high.shape(shape).entries().to_vec();
    if entries.is_empty() || high.n() != 2 {
        return Err(Error::Config("slice reduction needs a shape (m) or (m,p) at n = 2".into()));
    }
    let m = entries[0];
    let m_shape = high.shape_id_of(&[m])?;
    let pt = high.point();
    let over = Over::new(x, f, y);
    let upstairs = lift_index(over, shape);

    struct Sliced {
        index: HashMap<(Vec<u32>, u32), u32>,
        boundary_pos: HashMap<u32, u32>,
        base_pos: HashMap<u32, u32>,
    }
    let mut cache: HashMap<Vec<u32>, Sliced> = HashMap::new();
    let mut report = SliceReport {
        shape: high.shape(shape).to_string(),
        squares: 0,
        lifts_upstairs: 0,
        mismatch: None,
    };
    for sq in enumerate_squares(over, shape) {
        report.squares += 1;
        let lifted = upstairs.contains_key(&(sq.boundary.clone(), sq.base));
        if lifted {
            report.lifts_upstairs += 1;
        }
        let objects = if entries.len() == 1 {
            sq.boundary.clone()
        } else {
            x.vertices(m_shape, sq.boundary[0])
        };
        if !cache.contains_key(&objects) {
            let (sx, sy, sf) = slice_map(f, x, y, m, &objects)?;
            let low = sx.support().clone();
            let level = match entries.get(1) {
                None => low.point(),
                Some(&p) => low.shape_id_of(&[p])?,
            };
            let images: Vec<u32> = objects.iter().map(|&o| f.apply(pt, o)).collect();
            let positions = |p: &Precat, s: ShapeId, v: &[u32]| -> HashMap<u32, u32> {
                members_of(p, s, v).into_iter().enumerate().map(|(i, a)| (a, i as u32)).collect()
            };
            cache.insert(
                objects.clone(),
                Sliced {
                    index: lift_index(Over::new(&sx, &sf, &sy), level),
                    boundary_pos: positions(x, m_shape, &objects),
                    base_pos: positions(y, shape, &images),
                },
            );
        }
        let sliced = &cache[&objects];
        let boundary: Vec<u32> = if entries.len() == 1 {
            Vec::new()
        } else {
            sq.boundary.iter().map(|w| sliced.boundary_pos[w]).collect()
        };
        let in_slice = sliced.index.contains_key(&(boundary, sliced.base_pos[&sq.base]));
        if in_slice != lifted && report.mismatch.is_none() {
            report.mismatch = Some(sq);
        }
    }
    Ok(report)
}

fn members_of(x: &Precat, shape: ShapeId, vertices: &[u32]) -> Vec<u32> {
    (0..x.size(shape) as u32).filter(|&a| x.vertices(shape, a) == vertices).collect()
}

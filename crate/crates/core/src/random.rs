//! Random cell complexes, attachments and maps for property runs.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::precat::{CellComplex, ComplexMap, Evaluation, Precat};
use crate::support::{ShapeId, Support};

/// A uniformly shuffled search for boundary elements of a new cell of
/// `shape`, one per face, agreeing on shared faces.
pub fn random_attachment(rng: &mut impl Rng, ev: &Evaluation, shape: ShapeId) -> Option<Vec<u32>> {
    let s = ev.support().clone();
    let faces = s.faces(shape);
    let x = ev.precat();
    let options: Vec<Vec<u32>> = faces
        .iter()
        .map(|f| {
            let mut v: Vec<u32> = (0..x.size(f.source) as u32).collect();
            v.shuffle(rng);
            v
        })
        .collect();
    if options.iter().any(Vec::is_empty) {
        return None;
    }
    let k = faces.len();
    let mut chosen = vec![0u32; k];
    let mut pos = vec![0usize; k];
    let mut i = 0usize;
    if k == 0 {
        return Some(Vec::new());
    }
    // a small budget keeps pathological searches bounded
    let mut budget = 100_000usize;
    loop {
        if budget == 0 {
            return None;
        }
        budget -= 1;
        if pos[i] == options[i].len() {
            pos[i] = 0;
            if i == 0 {
                return None;
            }
            i -= 1;
            continue;
        }
        chosen[i] = options[i][pos[i]];
        pos[i] += 1;
        let ok = s.constraints(shape).iter().all(|c| {
            if c.i.max(c.j) != i {
                return true;
            }
            let (fi, fj) = (faces[c.i].source, faces[c.j].source);
            x.restrict(c.level, fi, c.along_i, chosen[c.i]) == x.restrict(c.level, fj, c.along_j, chosen[c.j])
        });
        if ok {
            if i + 1 == k {
                return Some(chosen);
            }
            i += 1;
        }
    }
}

/// A random complex with `points` point cells followed by `cells` cells of
/// random non-point shapes (skipping shapes with no valid attachment).
pub fn random_complex(rng: &mut impl Rng, support: &Arc<Support>, points: usize, cells: usize) -> Result<Evaluation> {
    let mut ev = Evaluation::new(support.clone());
    let pt = support.point();
    for _ in 0..points {
        ev.push_indices(pt, Vec::new())?;
    }
    let shapes: Vec<ShapeId> = (0..support.shape_count()).filter(|&s| s != pt).collect();
    let mut attempts = 0;
    let mut added = 0;
    while added < cells && attempts < 20 * cells.max(1) && !shapes.is_empty() {
        attempts += 1;
        let shape = shapes[rng.gen_range(0..shapes.len())];
        if let Some(xs) = random_attachment(rng, &ev, shape) {
            ev.push_indices(shape, xs)?;
            added += 1;
        }
    }
    Ok(ev)
}

/// A random element permutation of every level.
pub fn random_relabel(rng: &mut impl Rng, x: &Precat) -> Precat {
    let perm: Vec<Vec<u32>> = x
        .sizes()
        .iter()
        .map(|&n| {
            let mut p: Vec<u32> = (0..n as u32).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    x.relabel(&perm)
}

/// A random map `w -> y`, found by a shuffled depth-first search over cells.
pub fn random_map(rng: &mut impl Rng, w: &CellComplex, y: &Precat) -> Option<ComplexMap> {
    let n = w.len();
    let mut index: Vec<Option<HashMap<Vec<u32>, Vec<u32>>>> = vec![None; y.support().shape_count()];
    let mut images = vec![0u32; n];
    let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut pos = vec![0usize; n];
    if n == 0 {
        return Some(ComplexMap::new(Vec::new()));
    }
    let mut fill = |k: usize, images: &[u32], lists: &mut Vec<Vec<u32>>, rng: &mut dyn rand::RngCore| {
        let cell = w.cell(k);
        let req: Vec<u32> = cell
            .attachment
            .iter()
            .map(|e| y.restrict(e.level, w.cell(e.cell).shape, e.morphism, images[e.cell]))
            .collect();
        let table = index[cell.shape].get_or_insert_with(|| {
            let mut t: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
            for x in 0..y.size(cell.shape) as u32 {
                t.entry(y.face_tuple(cell.shape, x)).or_default().push(x);
            }
            t
        });
        let mut v = table.get(&req).cloned().unwrap_or_default();
        v.shuffle(rng);
        lists[k] = v;
    };
    fill(0, &images, &mut lists, rng);
    let mut k = 0;
    let mut budget = 1_000_000usize;
    loop {
        budget = budget.checked_sub(1)?;
        if pos[k] < lists[k].len() {
            images[k] = lists[k][pos[k]];
            pos[k] += 1;
            if k + 1 == n {
                return Some(ComplexMap::new(images));
            }
            k += 1;
            pos[k] = 0;
            fill(k, &images, &mut lists, rng);
        } else if k == 0 {
            return None;
        } else {
            k -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::support::BoundaryMode;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_complexes_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, d) in [(1, 3), (2, 2)] {
            let s = Support::shared(n, d, BoundaryMode::Free).unwrap();
            for _ in 0..10 {
                let ev = random_complex(&mut rng, &s, 3, 6).unwrap();
                ev.precat().validate().unwrap();
                let w = ev.complex();
                let y = random_relabel(&mut rng, ev.precat());
                y.validate().unwrap();
                let f = random_map(&mut rng, w, ev.precat()).expect("the identity exists");
                f.validate(w, ev.precat()).unwrap();
            }
        }
    }
}

//! Nerves of finite categories (n = 1) and promotion of 1-precats to n = 2.

use std::collections::HashMap;
use std::sync::Arc;

use super::{Precat, PrecatMap};
use crate::category::{FiniteCategory, Functor};
use crate::error::{Error, Result};
use crate::support::{ShapeId, Support};

/// A simplex of a nerve: its first vertex and its string of arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Simplex {
    start: usize,
    arrows: Vec<usize>,
}

impl Simplex {
    fn vertex(&self, c: &FiniteCategory, i: usize) -> usize {
        if i == 0 {
            self.start
        } else {
            c.dst(self.arrows[i - 1])
        }
    }

    /// Pull back along the monotone map with the given values.
    fn restrict(&self, c: &FiniteCategory, values: &[u32]) -> Simplex {
        let start = self.vertex(c, values[0] as usize);
        let arrows = values
            .windows(2)
            .map(|w| {
                let (lo, hi) = (w[0] as usize, w[1] as usize);
                let mut f = c.identity(self.vertex(c, lo));
                for &g in &self.arrows[lo..hi] {
                    f = c.compose(f, g);
                }
                f
            })
            .collect();
        Simplex { start, arrows }
    }
}

fn level_of(support: &Support, shape: ShapeId) -> usize {
    support.shape(shape).entry_or_zero(0) as usize
}

fn simplices(c: &FiniteCategory, m: usize) -> Vec<Simplex> {
    let mut out = Vec::new();
    fn extend(c: &FiniteCategory, m: usize, cur: &mut Simplex, out: &mut Vec<Simplex>) {
        if cur.arrows.len() == m {
            out.push(cur.clone());
            return;
        }
        let at = cur.vertex(c, cur.arrows.len());
        for f in c.out_of(at) {
            cur.arrows.push(f);
            extend(c, m, cur, out);
            cur.arrows.pop();
        }
    }
    for x in 0..c.object_count() {
        extend(
            c,
            m,
            &mut Simplex {
                start: x,
                arrows: Vec::new(),
            },
            &mut out,
        );
    }
    out
}

/// The nerve of `c` on a one-dimensional support: level `(m)` holds the
/// composable strings of `m` arrows.
pub fn nerve(support: &Arc<Support>, c: &FiniteCategory) -> Result<Precat> {
    if support.n() != 1 {
        return Err(Error::Unsupported(format!("nerves are built at n = 1, not n = {}", support.n())));
    }
    let k = support.shape_count();
    let levels: Vec<Vec<Simplex>> = (0..k).map(|s| simplices(c, level_of(support, s))).collect();
    let index: Vec<HashMap<Simplex, u32>> = levels
        .iter()
        .map(|lv| lv.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect())
        .collect();
    let sizes = levels.iter().map(|lv| lv.len()).collect();
    let labels = levels
        .iter()
        .map(|lv| {
            lv.iter()
                .map(|s| {
                    if s.arrows.is_empty() {
                        c.objects()[s.start].clone()
                    } else {
                        s.arrows.iter().map(|&f| c.arrow(f).name.clone()).collect::<Vec<_>>().join(",")
                    }
                })
                .collect()
        })
        .collect();
    Ok(Precat::from_fn(support.clone(), sizes, |src, tgt, a, x| {
        let values = support.first_values(src, tgt, a);
        index[src][&levels[tgt][x as usize].restrict(c, &values)]
    })
    .with_labels(labels))
}

/// The map of nerves induced by a functor.
pub fn nerve_functor(
    support: &Arc<Support>,
    src: &FiniteCategory,
    dst: &FiniteCategory,
    f: &Functor,
) -> Result<PrecatMap> {
    f.validate(src, dst)?;
    let k = support.shape_count();
    let mut levels = Vec::with_capacity(k);
    for s in 0..k {
        let m = level_of(support, s);
        let target: HashMap<Simplex, u32> = simplices(dst, m)
            .into_iter()
            .enumerate()
            .map(|(i, x)| (x, i as u32))
            .collect();
        levels.push(
            simplices(src, m)
                .into_iter()
                .map(|x| {
                    target[&Simplex {
                        start: f.objects[x.start],
                        arrows: x.arrows.iter().map(|&g| f.arrows[g]).collect(),
                    }]
                })
                .collect(),
        );
    }
    Ok(PrecatMap::new(levels))
}

/// The shape of `Θ^1` that a shape of `Θ^2` projects to (its first entry).
fn project(low: &Support, high: &Support, shape: ShapeId) -> Result<ShapeId> {
    let e = high.shape(shape).entries();
    low.shape_id_of(&e[..e.len().min(1)])
}

/// Pull a 1-precat back to n = 2 along the first-coordinate projection, so
/// that `A'_(m,p) = A_(m)`.
pub fn promote(a: &Precat) -> Result<Precat> {
    let low = a.support();
    if low.n() != 1 {
        return Err(Error::Unsupported("promote expects a 1-precat".into()));
    }
    let high = Support::shared(2, low.d(), low.mode())?;
    let k = high.shape_count();
    let proj: Vec<ShapeId> = (0..k).map(|s| project(low, &high, s)).collect::<Result<_>>()?;
    let mut morph_proj: HashMap<(ShapeId, ShapeId, u32), u32> = HashMap::new();
    for src in 0..k {
        for tgt in 0..k {
            for m in 0..high.hom_len(src, tgt) as u32 {
                let comps: Vec<Vec<u32>> = high
                    .morph(src, tgt, m)
                    .components()
                    .iter()
                    .take(1)
                    .map(|c| c.values().to_vec())
                    .collect();
                morph_proj.insert((src, tgt, m), low.morph_from_values(proj[src], proj[tgt], &comps)?);
            }
        }
    }
    let sizes = proj.iter().map(|&p| a.size(p)).collect();
    let mut out = Precat::from_fn(high.clone(), sizes, |src, tgt, m, x| {
        a.restrict(proj[src], proj[tgt], morph_proj[&(src, tgt, m)], x)
    });
    if let Some(l) = a.labels() {
        out = out.with_labels(proj.iter().map(|&p| l[p].clone()).collect());
    }
    Ok(out)
}

/// `promote` on maps.
pub fn promote_map(f: &PrecatMap, a: &Precat) -> Result<PrecatMap> {
    let low = a.support();
    let high = Support::shared(2, low.d(), low.mode())?;
    let levels = (0..high.shape_count())
        .map(|s| project(low, &high, s).map(|p| f.levels()[p].clone()))
        .collect::<Result<_>>()?;
    Ok(PrecatMap::new(levels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category;
    use crate::support::BoundaryMode;

    #[test]
    fn nerve_levels() {
        let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
        let n = nerve(&s, &category::arrow()).unwrap();
        assert_eq!(n.sizes(), &[2, 3, 4, 5]);
        n.validate().unwrap();
        let p = nerve(&s, &category::point()).unwrap();
        assert!(p.sizes().iter().all(|&k| k == 1));
        for name in category::BUILTIN_NAMES {
            nerve(&s, &category::builtin(name).unwrap()).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn nerve_of_functor_is_natural() {
        let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
        let (a, b) = (category::arrow(), category::point());
        let f = Functor {
            objects: vec![0, 0],
            arrows: vec![0; a.arrow_count()],
        };
        let m = nerve_functor(&s, &a, &b, &f).unwrap();
        m.validate(&nerve(&s, &a).unwrap(), &nerve(&s, &b).unwrap()).unwrap();
    }

    #[test]
    fn promote_is_constant_in_the_second_direction() {
        let s = Support::shared(1, 2, BoundaryMode::Free).unwrap();
        let a = nerve(&s, &category::composable_pair()).unwrap();
        let p = promote(&a).unwrap();
        p.validate().unwrap();
        let high = p.support().clone();
        assert_eq!(p.size(high.shape_id_of(&[1]).unwrap()), 6);
        for e in [[1u32, 1], [1, 2], [2, 1], [2, 2]] {
            let m = high.shape_id_of(&e).unwrap();
            let base = high.shape_id_of(&e[..1]).unwrap();
            assert_eq!(p.size(m), p.size(base));
        }
    }
}

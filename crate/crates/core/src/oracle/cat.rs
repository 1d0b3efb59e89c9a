//! Brute-force `Ho(Cat)` on finite categories.

use serde::Serialize;

use crate::category::{FiniteCategory, Functor};

/// Flat copy of a category's structure.
struct Table {
    objects: usize,
    src: Vec<usize>,
    dst: Vec<usize>,
    id: Vec<usize>,
    comp: Vec<Vec<Option<usize>>>,
}

impl Table {
    fn of(c: &FiniteCategory) -> Table {
        let k = c.arrow_count();
        Table {
            objects: c.object_count(),
            src: (0..k).map(|f| c.src(f)).collect(),
            dst: (0..k).map(|f| c.dst(f)).collect(),
            id: (0..c.object_count()).map(|x| c.identity(x)).collect(),
            comp: (0..k).map(|f| (0..k).map(|g| c.try_compose(f, g)).collect()).collect(),
        }
    }

    fn arrows(&self) -> usize {
        self.src.len()
    }

    fn between(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows()).filter(move |&f| self.src[f] == x && self.dst[f] == y)
    }

    fn inverse(&self, f: usize) -> Option<usize> {
        self.between(self.dst[f], self.src[f])
            .find(|&g| self.comp[f][g] == Some(self.id[self.src[f]]) && self.comp[g][f] == Some(self.id[self.dst[f]]))
    }
}

/// Every functor `a -> b`, in lexicographic order of (objects, arrows).
pub fn enumerate_functors(a: &FiniteCategory, b: &FiniteCategory) -> Vec<Functor> {
    let (ta, tb) = (Table::of(a), Table::of(b));
    let mut out = Vec::new();
    let mut objs = vec![0usize; ta.objects];
    enumerate_objects(&ta, &tb, 0, &mut objs, &mut out);
    out
}

fn enumerate_objects(ta: &Table, tb: &Table, k: usize, objs: &mut Vec<usize>, out: &mut Vec<Functor>) {
    if k == ta.objects {
        let mut arrows = vec![usize::MAX; ta.arrows()];
        enumerate_arrows(ta, tb, 0, objs, &mut arrows, out);
        return;
    }
    for y in 0..tb.objects {
        objs[k] = y;
        enumerate_objects(ta, tb, k + 1, objs, out);
    }
}

fn enumerate_arrows(ta: &Table, tb: &Table, k: usize, objs: &[usize], arrows: &mut Vec<usize>, out: &mut Vec<Functor>) {
    if k == ta.arrows() {
        out.push(Functor {
            objects: objs.to_vec(),
            arrows: arrows.clone(),
        });
        return;
    }
    let (x, y) = (objs[ta.src[k]], objs[ta.dst[k]]);
    let forced = ta.id.iter().position(|&i| i == k).map(|o| tb.id[objs[o]]);
    let cands: Vec<usize> = match forced {
        Some(g) => vec![g],
        None => tb.between(x, y).collect(),
    };
    for g in cands {
        arrows[k] = g;
        // every composition law whose three arrows are now assigned
        let ok = (0..=k).all(|f| {
            (0..=k).all(|h| match ta.comp[f][h] {
                Some(fh) if fh <= k && (f == k || h == k || fh == k) => tb.comp[arrows[f]][arrows[h]] == Some(arrows[fh]),
                _ => true,
            })
        });
        if ok {
            enumerate_arrows(ta, tb, k + 1, objs, arrows, out);
        }
    }
    arrows[k] = usize::MAX;
}

/// Components of a natural isomorphism `f => g`, if one exists.
pub fn natural_iso(a: &FiniteCategory, b: &FiniteCategory, f: &Functor, g: &Functor) -> Option<Vec<usize>> {
    let (ta, tb) = (Table::of(a), Table::of(b));
    let mut eta = vec![usize::MAX; ta.objects];
    natural_search(&ta, &tb, f, g, 0, &mut eta).then_some(eta)
}

fn natural_search(ta: &Table, tb: &Table, f: &Functor, g: &Functor, k: usize, eta: &mut Vec<usize>) -> bool {
    if k == ta.objects {
        return true;
    }
    let cands: Vec<usize> = tb
        .between(f.objects[k], g.objects[k])
        .filter(|&e| tb.inverse(e).is_some())
        .collect();
    for e in cands {
        eta[k] = e;
        // naturality squares between assigned objects
        let ok = (0..ta.arrows()).all(|h| {
            let (s, t) = (ta.src[h], ta.dst[h]);
            if s > k || t > k {
                return true;
            }
            tb.comp[f.arrows[h]][eta[t]].is_some() && tb.comp[f.arrows[h]][eta[t]] == tb.comp[eta[s]][g.arrows[h]]
        });
        if ok && natural_search(ta, tb, f, g, k + 1, eta) {
            return true;
        }
    }
    eta[k] = usize::MAX;
    false
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoClasses {
    pub class_of: Vec<usize>,
    pub representatives: Vec<usize>,
    /// The relation was checked to be an equivalence relation.
    pub equivalence_relation: bool,
}

impl IsoClasses {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }
}

/// Partition functors by natural isomorphism.
pub fn natural_iso_classes(functors: &[Functor], a: &FiniteCategory, b: &FiniteCategory) -> IsoClasses {
    let k = functors.len();
    let rel: Vec<Vec<bool>> = (0..k)
        .map(|i| (0..k).map(|j| natural_iso(a, b, &functors[i], &functors[j]).is_some()).collect())
        .collect();
    let equivalence_relation = (0..k).all(|i| rel[i][i])
        && (0..k).all(|i| (0..k).all(|j| rel[i][j] == rel[j][i]))
        && (0..k).all(|i| (0..k).all(|j| !rel[i][j] || (0..k).all(|l| !rel[j][l] || rel[i][l])));
    let mut class_of = vec![usize::MAX; k];
    let mut representatives = Vec::new();
    for i in 0..k {
        if class_of[i] != usize::MAX {
            continue;
        }
        let c = representatives.len();
        representatives.push(i);
        for j in i..k {
            if rel[i][j] {
                class_of[j] = c;
            }
        }
    }
    IsoClasses {
        class_of,
        representatives,
        equivalence_relation,
    }
}

/// Isomorphism classes of objects.
pub fn object_iso_classes(c: &FiniteCategory) -> Vec<usize> {
    let t = Table::of(c);
    let mut class_of = vec![usize::MAX; t.objects];
    let mut next = 0;
    for x in 0..t.objects {
        if class_of[x] != usize::MAX {
            continue;
        }
        for y in x..t.objects {
            if t.between(x, y).any(|f| t.inverse(f).is_some()) {
                class_of[y] = next;
            }
        }
        next += 1;
    }
    class_of
}

#[derive(Clone, Debug, Serialize)]
pub struct HoCatHom {
    pub functors: Vec<Functor>,
    pub classes: IsoClasses,
}

impl HoCatHom {
    pub fn count(&self) -> usize {
        self.classes.count()
    }
}

/// `Hom(a, b)` in the homotopy category: functors up to natural isomorphism.
pub fn ho_cat_hom(a: &FiniteCategory, b: &FiniteCategory) -> HoCatHom {
    let functors = enumerate_functors(a, b);
    let classes = natural_iso_classes(&functors, a, b);
    HoCatHom { functors, classes }
}

/// A quasi-inverse `g` of `f` with `f;g ≅ id` and `g;f ≅ id`, if any.
pub fn quasi_inverse(a: &FiniteCategory, b: &FiniteCategory, f: &Functor) -> Option<Functor> {
    let then = |p: &Functor, q: &Functor| Functor {
        objects: p.objects.iter().map(|&x| q.objects[x]).collect(),
        arrows: p.arrows.iter().map(|&x| q.arrows[x]).collect(),
    };
    let (ida, idb) = (Functor::identity(a), Functor::identity(b));
    enumerate_functors(b, a)
        .into_iter()
        .find(|g| natural_iso(a, a, &then(f, g), &ida).is_some() && natural_iso(b, b, &then(g, f), &idb).is_some())
}

pub fn is_equivalence(a: &FiniteCategory, b: &FiniteCategory, f: &Functor) -> bool {
    quasi_inverse(a, b, f).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{self, builtin, BUILTIN_NAMES};

    #[test]
    fn functor_counts() {
        assert_eq!(enumerate_functors(&category::arrow(), &category::arrow()).len(), 3);
        assert_eq!(enumerate_functors(&category::iso(), &category::arrow()).len(), 2);
        assert_eq!(enumerate_functors(&category::iso(), &category::iso()).len(), 4);
        for name in BUILTIN_NAMES {
            let b = builtin(name).unwrap();
            assert_eq!(enumerate_functors(&category::point(), &b).len(), b.object_count());
        }
        for f in enumerate_functors(&category::retract(), &category::retract()) {
            f.validate(&category::retract(), &category::retract()).unwrap();
        }
    }

    #[test]
    fn hom_counts() {
        let c = |a: &str, b: &str| ho_cat_hom(&builtin(a).unwrap(), &builtin(b).unwrap()).count();
        assert_eq!(c("arrow", "arrow"), 3);
        assert_eq!(c("iso", "arrow"), 2);
        assert_eq!(c("iso", "iso"), 1);
        assert_eq!(c("point", "retract"), 2);
        assert_eq!(c("point", "iso"), 1);
        assert_eq!(c("point", "point"), 1);
        for name in BUILTIN_NAMES {
            let b = builtin(name).unwrap();
            let h = ho_cat_hom(&category::point(), &b);
            assert!(h.classes.equivalence_relation);
            let objs = object_iso_classes(&b);
            assert_eq!(h.count(), objs.iter().max().map_or(0, |m| m + 1));
        }
    }

    #[test]
    fn equivalences() {
        let (iso, pt, arrow) = (category::iso(), category::point(), category::arrow());
        let to_pt = |c: &FiniteCategory| Functor {
            objects: vec![0; c.object_count()],
            arrows: vec![0; c.arrow_count()],
        };
        assert!(is_equivalence(&iso, &pt, &to_pt(&iso)));
        assert!(!is_equivalence(&arrow, &pt, &to_pt(&arrow)));
        assert!(is_equivalence(&arrow, &arrow, &Functor::identity(&arrow)));
    }
}

//! `Θ^n` rebuilt as a quotient of `Δ^n`: every n-tuple of monotone maps
//! between n-tuples of ordinals is a morphism, and maps that differ only
//! after passing through a zero coordinate are identified.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest object count times hom size we are willing to tabulate.
const GUARD: usize = 200_000;

/// Monotone maps `[a] -> [b]` for `a, b <= bound`, as value vectors.
struct Ordinals {
    bound: usize,
    maps: Vec<Vec<Vec<Vec<u8>>>>,
    index: HashMap<(usize, usize, Vec<u8>), usize>,
}

impl Ordinals {
    fn new(bound: usize) -> Self {
        let mut maps = vec![vec![Vec::new(); bound + 1]; bound + 1];
        let mut index = HashMap::new();
        for a in 0..=bound {
            for b in 0..=bound {
                let mut cur = Vec::new();
                fn go(a: usize, b: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
                    if cur.len() == a + 1 {
                        out.push(cur.clone());
                        return;
                    }
                    let lo = cur.last().copied().unwrap_or(0);
                    for v in lo..=b as u8 {
                        cur.push(v);
                        go(a, b, cur, out);
                        cur.pop();
                    }
                }
                go(a, b, &mut cur, &mut maps[a][b]);
                for (i, m) in maps[a][b].iter().enumerate() {
                    index.insert((a, b, m.clone()), i);
                }
            }
        }
        Ordinals { bound, maps, index }
    }

    fn count(&self, a: usize, b: usize) -> usize {
        self.maps[a][b].len()
    }

    fn then(&self, a: usize, b: usize, c: usize, f: usize, g: usize) -> usize {
        let (f, g) = (&self.maps[a][b][f], &self.maps[b][c][g]);
        let h: Vec<u8> = f.iter().map(|&x| g[x as usize]).collect();
        self.index[&(a, c, h)]
    }
}

/// Equivalence classes of padded `Δ^n` morphisms under the constancy congruence.
pub struct ThetaClosure {
    n: usize,
    ord: Ordinals,
    objects: Vec<Vec<usize>>,
    /// Offset of each (source, target) hom block in the global numbering.
    offsets: Vec<usize>,
    parent: Vec<usize>,
}

/// One morphism: source, target and per-coordinate map values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RawMorphism {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub components: Vec<Vec<u8>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomClassTable {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub morphisms: usize,
    pub classes: Vec<Vec<RawMorphism>>,
}

impl ThetaClosure {
    /// Build the closure over all n-tuples with entries at most `bound`.
    pub fn build(n: usize, bound: usize) -> Result<ThetaClosure> {
        let too_large = || Error::BoundTooLarge(format!("closure over n = {n}, entries <= {bound}"));
        let objs = (bound + 1).checked_pow(n as u32).ok_or_else(too_large)?;
        if n == 0 || n > 4 || bound > 3 || objs * objs > GUARD {
            return Err(too_large());
        }
        let ord = Ordinals::new(bound);
        let objects: Vec<Vec<usize>> = (0..objs)
            .map(|mut k| {
                let mut v = vec![0; n];
                for slot in v.iter_mut().rev() {
                    *slot = k % (bound + 1);
                    k /= bound + 1;
                }
                v
            })
            .collect();
        let mut offsets = Vec::with_capacity(objs * objs + 1);
        let mut total = 0usize;
        for x in &objects {
            for y in &objects {
                offsets.push(total);
                total += (0..n).map(|i| ord.count(x[i], y[i])).product::<usize>();
            }
        }
        offsets.push(total);
        if total > 50 * GUARD {
            return Err(too_large());
        }
        let mut closure = ThetaClosure {
            n,
            ord,
            objects,
            offsets,
            parent: (0..total).collect(),
        };
        closure.close();
        Ok(closure)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> usize {
        self.ord.bound
    }

    pub fn morphism_count(&self) -> usize {
        self.parent.len()
    }

    fn object_index(&self, x: &[usize]) -> usize {
        x.iter().fold(0, |acc, &e| acc * (self.ord.bound + 1) + e)
    }

    fn block(&self, x: usize, y: usize) -> usize {
        x * self.objects.len() + y
    }

    fn hom_len(&self, x: usize, y: usize) -> usize {
        let b = self.block(x, y);
        self.offsets[b + 1] - self.offsets[b]
    }

    /// Global id from per-coordinate map indices.
    fn id(&self, x: usize, y: usize, comps: &[usize]) -> usize {
        let (ox, oy) = (&self.objects[x], &self.objects[y]);
        let mut k = 0;
        for i in 0..self.n {
            k = k * self.ord.count(ox[i], oy[i]) + comps[i];
        }
        self.offsets[self.block(x, y)] + k
    }

    fn comps(&self, x: usize, y: usize, mut k: usize) -> Vec<usize> {
        let (ox, oy) = (&self.objects[x], &self.objects[y]);
        let mut out = vec![0; self.n];
        for i in (0..self.n).rev() {
            let c = self.ord.count(ox[i], oy[i]);
            out[i] = k % c;
            k /= c;
        }
        out
    }

    fn then(&self, x: usize, y: usize, z: usize, f: &[usize], g: &[usize]) -> Vec<usize> {
        let (ox, oy, oz) = (&self.objects[x], &self.objects[y], &self.objects[z]);
        (0..self.n).map(|i| self.ord.then(ox[i], oy[i], oz[i], f[i], g[i])).collect()
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// For every `α: X -> Y` with `Y_i = 0` (first such `i`), identify all
    /// `α ; β` where `β: Y -> Z` ranges over maps with fixed components `1..=i`.
    /// This generating set is closed under composition on both sides, so the
    /// equivalence closure is already a congruence; `is_congruence` re-checks.
    fn close(&mut self) {
        let k = self.objects.len();
        for y in 0..k {
            let Some(i) = self.objects[y].iter().position(|&e| e == 0) else {
                continue;
            };
            for z in 0..k {
                let mut groups: HashMap<Vec<usize>, Vec<Vec<usize>>> = HashMap::new();
                for b in 0..self.hom_len(y, z) {
                    let c = self.comps(y, z, b);
                    groups.entry(c[..=i].to_vec()).or_default().push(c);
                }
                for x in 0..k {
                    for a in 0..self.hom_len(x, y) {
                        let ca = self.comps(x, y, a);
                        for betas in groups.values() {
                            let first = self.then(x, y, z, &ca, &betas[0]);
                            let first = self.id(x, z, &first);
                            for beta in &betas[1..] {
                                let other = self.then(x, y, z, &ca, beta);
                                let other = self.id(x, z, &other);
                                self.union(first, other);
                            }
                        }
                    }
                }
            }
        }
    }

    /// Exhaustively check that related morphisms stay related after
    /// composing with any morphism on either side.
    pub fn is_congruence(&mut self) -> bool {
        let k = self.objects.len();
        for x in 0..k {
            for y in 0..k {
                for f in 0..self.hom_len(x, y) {
                    let g = self.offsets[self.block(x, y)] + f;
                    let r = self.find(g);
                    if r == g {
                        continue;
                    }
                    let (cf, cr) = (self.comps(x, y, f), self.comps(x, y, r - self.offsets[self.block(x, y)]));
                    for z in 0..k {
                        for h in 0..self.hom_len(y, z) {
                            let ch = self.comps(y, z, h);
                            let (a, b) = (self.then(x, y, z, &cf, &ch), self.then(x, y, z, &cr, &ch));
                            let (a, b) = (self.id(x, z, &a), self.id(x, z, &b));
                            if self.find(a) != self.find(b) {
                                return false;
                            }
                        }
                        for h in 0..self.hom_len(z, x) {
                            let ch = self.comps(z, x, h);
                            let (a, b) = (self.then(z, x, y, &ch, &cf), self.then(z, x, y, &ch, &cr));
                            let (a, b) = (self.id(z, y, &a), self.id(z, y, &b));
                            if self.find(a) != self.find(b) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn raw(&self, x: usize, y: usize, k: usize) -> RawMorphism {
        let (ox, oy) = (&self.objects[x], &self.objects[y]);
        let comps = self.comps(x, y, k);
        RawMorphism {
            source: ox.clone(),
            target: oy.clone(),
            components: (0..self.n).map(|i| self.ord.maps[ox[i]][oy[i]][comps[i]].clone()).collect(),
        }
    }

    /// Class representative (least id) of a morphism given by its value vectors.
    pub fn class_of(&mut self, source: &[usize], target: &[usize], components: &[Vec<u8>]) -> Result<usize> {
        if source.len() != self.n || target.len() != self.n || components.len() != self.n {
            return Err(Error::SizeMismatch("oracle morphism has the wrong number of coordinates".into()));
        }
        if source.iter().chain(target).any(|&e| e > self.ord.bound) {
            return Err(Error::OutOfSupport("object outside the oracle bound".into()));
        }
        let (x, y) = (self.object_index(source), self.object_index(target));
        let comps = (0..self.n)
            .map(|i| {
                self.ord
                    .index
                    .get(&(source[i], target[i], components[i].clone()))
                    .copied()
                    .ok_or_else(|| Error::NotMonotone {
                        values: components[i].iter().map(|&v| v as u32).collect(),
                        target: target[i] as u32,
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        let id = self.id(x, y, &comps);
        Ok(self.find(id))
    }

    /// All morphisms `source -> target`, grouped into classes.
    pub fn classes(&mut self, source: &[usize], target: &[usize]) -> Result<HomClassTable> {
        if source.len() != self.n || target.len() != self.n || source.iter().chain(target).any(|&e| e > self.ord.bound) {
            return Err(Error::OutOfSupport("object outside the oracle bound".into()));
        }
        let (x, y) = (self.object_index(source), self.object_index(target));
        let mut groups: Vec<(usize, Vec<RawMorphism>)> = Vec::new();
        let off = self.offsets[self.block(x, y)];
        for k in 0..self.hom_len(x, y) {
            let r = self.find(off + k);
            let raw = self.raw(x, y, k);
            match groups.iter_mut().find(|(root, _)| *root == r) {
                Some((_, g)) => g.push(raw),
                None => groups.push((r, vec![raw])),
            }
        }
        Ok(HomClassTable {
            source: source.to_vec(),
            target: target.to_vec(),
            morphisms: self.hom_len(x, y),
            classes: groups.into_iter().map(|(_, g)| g).collect(),
        })
    }

    /// Objects with no nonzero entry after a zero (the shapes of `Θ^n`).
    pub fn shapes(&self) -> Vec<Vec<usize>> {
        self.objects
            .iter()
            .filter(|o| o.windows(2).all(|w| w[0] > 0 || w[1] == 0))
            .cloned()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_counts() {
        let mut c = ThetaClosure::build(2, 2).unwrap();
        assert_eq!(c.classes(&[1, 0], &[1, 1]).unwrap().classes.len(), 4);
        assert_eq!(c.classes(&[1, 1], &[1, 1]).unwrap().classes.len(), 5);
        assert_eq!(c.classes(&[0, 0], &[2, 0]).unwrap().classes.len(), 3);
        let a = c.class_of(&[1, 0], &[1, 1], &[vec![0, 0], vec![0]]).unwrap();
        let b = c.class_of(&[1, 0], &[1, 1], &[vec![0, 0], vec![1]]).unwrap();
        assert_eq!(a, b);
        let a = c.class_of(&[1, 0], &[1, 1], &[vec![0, 1], vec![0]]).unwrap();
        let b = c.class_of(&[1, 0], &[1, 1], &[vec![0, 1], vec![1]]).unwrap();
        assert_ne!(a, b);
        assert!(c.is_congruence());
    }

    #[test]
    fn identity_is_alone() {
        let mut c = ThetaClosure::build(2, 2).unwrap();
        let t = c.classes(&[2, 1], &[2, 1]).unwrap();
        let id = RawMorphism {
            source: vec![2, 1],
            target: vec![2, 1],
            components: vec![vec![0, 1, 2], vec![0, 1]],
        };
        assert!(t.classes.iter().any(|g| g == &vec![id.clone()]));
    }

    #[test]
    fn guard() {
        assert!(matches!(ThetaClosure::build(5, 2), Err(Error::BoundTooLarge(_))));
    }
}

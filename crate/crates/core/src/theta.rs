//! Combinatorics of the index category Θ^n.
//!
//! An object is a sequence `(m_1, ..., m_k)` with `k <= n` and every entry
//! positive; the empty sequence is the point. A morphism `N -> M` is a tuple of
//! monotone maps `[n_i] -> [m_i]` (with `n_i = 0` past the end of `N`) taken
//! modulo the constancy identification: once a component is constant, the
//! later components carry no information. Morphisms are stored in canonical
//! form, truncated right after the first constant component.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An object `(m_1, ..., m_k)` of Θ^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaShape {
    n: usize,
    entries: Vec<u32>,
}

impl ThetaShape {
    pub fn new(n: usize, entries: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidShape {
                entries,
                reason: "ambient level must be positive".into(),
            });
        }
        if entries.len() > n {
            return Err(Error::InvalidShape {
                reason: format!("length {} exceeds n = {n}", entries.len()),
                entries,
            });
        }
        if entries.contains(&0) {
            return Err(Error::InvalidShape {
                entries,
                reason: "entries must be positive (trailing zeros are implicit)".into(),
            });
        }
        Ok(ThetaShape { n, entries })
    }

    pub fn point(n: usize) -> Self {
        ThetaShape {
            n,
            entries: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_point(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of the entries.
    pub fn degree(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// Entry at 0-based position `i`, or 0 past the end.
    pub fn entry_or_zero(&self, i: usize) -> u32 {
        self.entries.get(i).copied().unwrap_or(0)
    }

    /// `M^{[i]}`: the first `i` entries.
    pub fn prefix(&self, i: usize) -> ThetaShape {
        ThetaShape {
            n: self.n,
            entries: self.entries[..i.min(self.len())].to_vec(),
        }
    }

    /// `M̂`: all entries but the last. `None` for the point.
    pub fn hat(&self) -> Option<ThetaShape> {
        if self.is_point() {
            None
        } else {
            Some(self.prefix(self.len() - 1))
        }
    }

    /// Sort key used everywhere shapes are listed: degree, then length, then entries.
    pub fn order_key(&self) -> (u32, usize, &[u32]) {
        (self.degree(), self.len(), &self.entries)
    }
}

impl fmt::Display for ThetaShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

/// A monotone map `[a] -> [b]`, stored as its value table of length `a + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonotoneMap {
    target: u32,
    values: Vec<u32>,
}

impl MonotoneMap {
    pub fn new(target: u32, values: Vec<u32>) -> Result<Self> {
        let ok = !values.is_empty()
            && values.windows(2).all(|w| w[0] <= w[1])
            && values.iter().all(|&v| v <= target);
        if !ok {
            return Err(Error::NotMonotone { values, target });
        }
        Ok(MonotoneMap { target, values })
    }

    pub fn identity(m: u32) -> Self {
        MonotoneMap {
            target: m,
            values: (0..=m).collect(),
        }
    }

    pub fn constant(source: u32, target: u32, value: u32) -> Self {
        debug_assert!(value <= target);
        MonotoneMap {
            target,
            values: vec![value; source as usize + 1],
        }
    }

    pub fn source(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn target(&self) -> u32 {
        self.target
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.values[i as usize]
    }

    pub fn is_constant(&self) -> bool {
        self.values.first() == self.values.last()
    }

    pub fn is_surjective(&self) -> bool {
        self.values[0] == 0
            && *self.values.last().unwrap() == self.target
            && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MonotoneMap) -> MonotoneMap {
        debug_assert_eq!(self.target, other.source());
        MonotoneMap {
            target: other.target,
            values: self.values.iter().map(|&v| other.apply(v)).collect(),
        }
    }

    /// All monotone maps `[source] -> [target]` in lexicographic order of value tables.
    pub fn all(source: u32, target: u32) -> Vec<MonotoneMap> {
        fn go(pos: usize, len: usize, lo: u32, target: u32, cur: &mut Vec<u32>, out: &mut Vec<MonotoneMap>) {
            if pos == len {
                out.push(MonotoneMap {
                    target,
                    values: cur.clone(),
                });
                return;
            }
            for v in lo..=target {
                cur.push(v);
                go(pos + 1, len, v, target, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(0, source as usize + 1, 0, target, &mut Vec::new(), &mut out);
        out
    }
}

/// A canonical morphism of Θ^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaMorphism {
    source: ThetaShape,
    target: ThetaShape,
    components: Vec<MonotoneMap>,
}

impl Ord for ThetaMorphism {
    fn cmp(&self, other: &Self) -> Ordering {
        self.source
            .order_key()
            .cmp(&other.source.order_key())
            .then_with(|| self.target.order_key().cmp(&other.target.order_key()))
            .then_with(|| self.encoding().cmp(&other.encoding()))
    }
}

impl PartialOrd for ThetaMorphism {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn check_common_n(a: &ThetaShape, b: &ThetaShape) -> Result<()> {
    if a.n != b.n {
        return Err(Error::ShapeMismatch(format!(
            "{a} lives in Θ^{} but {b} lives in Θ^{}",
            a.n, b.n
        )));
    }
    Ok(())
}

impl ThetaMorphism {
    /// Build from already-canonical components, checking every invariant.
    pub fn from_components(source: ThetaShape, target: ThetaShape, components: Vec<MonotoneMap>) -> Result<Self> {
        check_common_n(&source, &target)?;
        let k = target.len();
        if components.len() > k {
            return Err(Error::SizeMismatch(format!(
                "{} components for a target of length {k}",
                components.len()
            )));
        }
        if components.is_empty() && k > 0 {
            return Err(Error::SizeMismatch(format!("no components for a map into {target}")));
        }
        for (i, c) in components.iter().enumerate() {
            if c.source() != source.entry_or_zero(i) || c.target() != target.entry_or_zero(i) {
                return Err(Error::SizeMismatch(format!(
                    "component {} is [{}]->[{}], expected [{}]->[{}]",
                    i + 1,
                    c.source(),
                    c.target(),
                    source.entry_or_zero(i),
                    target.entry_or_zero(i)
                )));
            }
            let last = i + 1 == components.len();
            if !last && c.is_constant() {
                return Err(Error::SizeMismatch(format!(
                    "component {} is constant but not final",
                    i + 1
                )));
            }
            if last && !c.is_constant() && components.len() != k {
                return Err(Error::SizeMismatch(
                    "final component is non-constant but the tuple is truncated".into(),
                ));
            }
        }
        Ok(ThetaMorphism {
            source,
            target,
            components,
        })
    }

    /// Canonical form of a raw tuple of `n` monotone maps between zero-padded shapes.
    pub fn canonicalize(source: &ThetaShape, target: &ThetaShape, raw: &[MonotoneMap]) -> Result<Self> {
        check_common_n(source, target)?;
        let n = source.n;
        if raw.len() != n {
            return Err(Error::SizeMismatch(format!(
                "raw tuple has {} components, expected n = {n}",
                raw.len()
            )));
        }
        for (i, c) in raw.iter().enumerate() {
            if c.source() != source.entry_or_zero(i) || c.target() != target.entry_or_zero(i) {
                return Err(Error::SizeMismatch(format!(
                    "raw component {} is [{}]->[{}], expected [{}]->[{}]",
                    i + 1,
                    c.source(),
                    c.target(),
                    source.entry_or_zero(i),
                    target.entry_or_zero(i)
                )));
            }
        }
        let mut components = Vec::new();
        for c in raw.iter().take(target.len()) {
            components.push(c.clone());
            if c.is_constant() {
                break;
            }
        }
        Ok(ThetaMorphism {
            source: source.clone(),
            target: target.clone(),
            components,
        })
    }

    pub fn identity(shape: &ThetaShape) -> Self {
        ThetaMorphism {
            source: shape.clone(),
            target: shape.clone(),
            components: shape.entries.iter().map(|&m| MonotoneMap::identity(m)).collect(),
        }
    }

    pub fn source(&self) -> &ThetaShape {
        &self.source
    }

    pub fn target(&self) -> &ThetaShape {
        &self.target
    }

    pub fn components(&self) -> &[MonotoneMap] {
        &self.components
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && *self == ThetaMorphism::identity(&self.source)
    }

    /// Fixed integer encoding: component count, then each value table.
    pub fn encoding(&self) -> Vec<u32> {
        let mut enc = vec![self.components.len() as u32];
        for c in &self.components {
            enc.extend_from_slice(&c.values);
        }
        enc
    }

    /// The zero-padded representative with all `n` components (constant tails at 0).
    pub fn padded(&self) -> Vec<MonotoneMap> {
        // past a constant component the choice is arbitrary; use vertex 0
        let mut out = self.components.clone();
        for i in out.len()..self.source.n {
            out.push(MonotoneMap::constant(self.source.entry_or_zero(i), self.target.entry_or_zero(i), 0));
        }
        out
    }

    /// True iff the morphism factors through one of the faces `M̂ -> M`.
    pub fn in_boundary(&self) -> bool {
        let k = self.target.len();
        if k == 0 {
            return false;
        }
        self.components.len() < k || self.components[k - 1].is_constant()
    }

    /// For a boundary morphism `a`, a face index `i` and `b: N -> M̂` with `a = b ; face_i`.
    pub fn factor_through_face(&self) -> Option<(usize, ThetaMorphism)> {
        if !self.in_boundary() {
            return None;
        }
        let k = self.target.len();
        let hat = self.target.prefix(k - 1);
        let s = self.components.len();
        if s < k {
            let b = ThetaMorphism {
                source: self.source.clone(),
                target: hat,
                components: self.components.clone(),
            };
            Some((0, b))
        } else {
            let face = self.components[k - 1].apply(0) as usize;
            let b = ThetaMorphism {
                source: self.source.clone(),
                target: hat,
                components: self.components[..k - 1].to_vec(),
            };
            Some((face, b))
        }
    }
}

/// All canonical morphisms `source -> target`, sorted by encoding.
pub fn hom_set(source: &ThetaShape, target: &ThetaShape) -> Result<Vec<ThetaMorphism>> {
    check_common_n(source, target)?;
    fn go(
        i: usize,
        source: &ThetaShape,
        target: &ThetaShape,
        cur: &mut Vec<MonotoneMap>,
        out: &mut Vec<ThetaMorphism>,
    ) {
        let k = target.len();
        if i == k {
            out.push(ThetaMorphism {
                source: source.clone(),
                target: target.clone(),
                components: cur.clone(),
            });
            return;
        }
        for phi in MonotoneMap::all(source.entry_or_zero(i), target.entry_or_zero(i)) {
            let constant = phi.is_constant();
            cur.push(phi);
            if constant {
                out.push(ThetaMorphism {
                    source: source.clone(),
                    target: target.clone(),
                    components: cur.clone(),
                });
            } else {
                go(i + 1, source, target, cur, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, source, target, &mut Vec::new(), &mut out);
    out.sort_by_key(|a| a.encoding());
    Ok(out)
}

/// `f ∘ g` for `g: N -> P` and `f: P -> M` (diagrammatic order: first `g`, then `f`).
pub fn compose(g: &ThetaMorphism, f: &ThetaMorphism) -> Result<ThetaMorphism> {
    if g.target != f.source {
        return Err(Error::ShapeMismatch(format!(
            "cannot compose {} -> {} with {} -> {}",
            g.source, g.target, f.source, f.target
        )));
    }
    let k = f.target.len();
    let mut components = Vec::with_capacity(k);
    for i in 0..k {
        // The composite stays non-constant only while both factors do, so the
        // canonical data of f and g always covers position i.
        let fi = &f.components[i];
        let c = match g.components.get(i) {
            Some(gi) => gi.then(fi),
            None => MonotoneMap::constant(g.source.entry_or_zero(i), fi.target(), fi.apply(0)),
        };
        let constant = c.is_constant();
        components.push(c);
        if constant {
            break;
        }
    }
    Ok(ThetaMorphism {
        source: g.source.clone(),
        target: f.target.clone(),
        components,
    })
}

/// The `m_k + 1` face maps `M̂ -> M`; the `i`-th is `(id, ..., id, const-i)`.
pub fn faces(shape: &ThetaShape) -> Result<Vec<ThetaMorphism>> {
    let hat = shape.hat().ok_or(Error::PointHasNoFaces)?;
    let k = shape.len();
    let last = shape.entries[k - 1];
    Ok((0..=last)
        .map(|c| {
            let mut components: Vec<MonotoneMap> = hat.entries.iter().map(|&m| MonotoneMap::identity(m)).collect();
            components.push(MonotoneMap::constant(0, last, c));
            ThetaMorphism {
                source: hat.clone(),
                target: shape.clone(),
                components,
            }
        })
        .collect())
}

/// All shapes with length at most `n` and entries at most `d`, ordered by
/// degree, then length, then lexicographically.
pub fn enumerate_shapes(n: usize, d: u32) -> Vec<ThetaShape> {
    let mut out = vec![ThetaShape::point(n)];
    let mut frontier: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for prefix in &frontier {
            for m in 1..=d {
                let mut e = prefix.clone();
                e.push(m);
                next.push(e);
            }
        }
        out.extend(next.iter().map(|e| ThetaShape { n, entries: e.clone() }));
        frontier = next;
    }
    out.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
    out
}

//! Finite 1-categories given by explicit composition tables.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// Arrows are indexed; `compose(f, g)` means "first `f`, then `g`".
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    name: String,
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<usize>,
    table: Vec<Vec<Option<usize>>>,
}

impl fmt::Debug for FiniteCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteCategory({}: {} objects, {} arrows)",
            self.name,
            self.objects.len(),
            self.arrows.len()
        )
    }
}

impl FiniteCategory {
    /// Build and validate a category. `arrows` must not contain identities;
    /// they are added as `id_<object>`. `compose` lists `(f, g, f then g)`
    /// for every composable pair of non-identity arrows.
    pub fn new(
        name: &str,
        objects: &[&str],
        arrows: &[(&str, usize, usize)],
        compose: &[(&str, &str, &str)],
    ) -> Result<FiniteCategory> {
        let objects: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
        let arrows: Vec<Arrow> = arrows
            .iter()
            .map(|&(n, s, d)| Arrow {
                name: n.to_string(),
                src: s,
                dst: d,
            })
            .collect();
        let compose: Vec<(String, String, String)> = compose
            .iter()
            .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
            .collect();
        FiniteCategory::from_parts(name.to_string(), objects, arrows, None, &compose)
    }

    /// General constructor. With `identities = None` identity arrows are
    /// appended; otherwise `identities[x]` names the identity of object `x`.
    /// Composites with identities may be omitted from `compose`.
    pub fn from_parts(
        name: String,
        objects: Vec<String>,
        mut arrows: Vec<Arrow>,
        identities: Option<Vec<String>>,
        compose: &[(String, String, String)],
    ) -> Result<FiniteCategory> {
        for a in &arrows {
            if a.src >= objects.len() || a.dst >= objects.len() {
                return Err(Error::InvalidCategory(format!("arrow {} has an unknown endpoint", a.name)));
            }
        }
        let identities: Vec<usize> = match identities {
            None => {
                let mut ids = Vec::new();
                for (x, o) in objects.iter().enumerate() {
                    ids.push(arrows.len());
                    arrows.push(Arrow {
                        name: format!("id_{o}"),
                        src: x,
                        dst: x,
                    });
                }
                ids
            }
            Some(names) => {
                if names.len() != objects.len() {
                    return Err(Error::InvalidCategory("one identity per object is required".into()));
                }
                names
                    .iter()
                    .map(|n| {
                        arrows
                            .iter()
                            .position(|a| &a.name == n)
                            .ok_or_else(|| Error::InvalidCategory(format!("unknown identity arrow {n}")))
                    })
                    .collect::<Result<_>>()?
            }
        };
        let mut by_name: HashMap<&str, usize> = HashMap::new();
        for (i, a) in arrows.iter().enumerate() {
            if by_name.insert(a.name.as_str(), i).is_some() {
                return Err(Error::InvalidCategory(format!("duplicate arrow name {}", a.name)));
            }
        }
        for (x, &i) in identities.iter().enumerate() {
            if arrows[i].src != x || arrows[i].dst != x {
                return Err(Error::InvalidCategory(format!("{} is not an endomorphism of {}", arrows[i].name, objects[x])));
            }
        }
        let n = arrows.len();
        let mut table = vec![vec![None; n]; n];
        let lookup = |s: &str| {
            by_name
                .get(s)
                .copied()
                .ok_or_else(|| Error::InvalidCategory(format!("unknown arrow {s} in composition table")))
        };
        for (f, g, h) in compose {
            let (f, g, h) = (lookup(f)?, lookup(g)?, lookup(h)?);
            if arrows[f].dst != arrows[g].src {
                return Err(Error::InvalidCategory(format!(
                    "{} and {} are not composable",
                    arrows[f].name, arrows[g].name
                )));
            }
            if arrows[h].src != arrows[f].src || arrows[h].dst != arrows[g].dst {
                return Err(Error::InvalidCategory(format!(
                    "composite of {} and {} has the wrong endpoints",
                    arrows[f].name, arrows[g].name
                )));
            }
            if let Some(prev) = table[f][g] {
                if prev != h {
                    return Err(Error::InvalidCategory(format!(
                        "{} then {} is given two values",
                        arrows[f].name, arrows[g].name
                    )));
                }
            }
            table[f][g] = Some(h);
        }
        for f in 0..n {
            let (s, d) = (arrows[f].src, arrows[f].dst);
            match table[identities[s]][f] {
                None => table[identities[s]][f] = Some(f),
                Some(h) if h != f => {
                    return Err(Error::InvalidCategory(format!("left identity law fails for {}", arrows[f].name)))
                }
                _ => {}
            }
            match table[f][identities[d]] {
                None => table[f][identities[d]] = Some(f),
                Some(h) if h != f => {
                    return Err(Error::InvalidCategory(format!("right identity law fails for {}", arrows[f].name)))
                }
                _ => {}
            }
        }
        let cat = FiniteCategory {
            name,
            objects,
            arrows,
            identities,
            table,
        };
        cat.validate()?;
        Ok(cat)
    }

    /// Totality on composable pairs and associativity.
    pub fn validate(&self) -> Result<()> {
        let n = self.arrows.len();
        for f in 0..n {
            for g in 0..n {
                let composable = self.arrows[f].dst == self.arrows[g].src;
                if composable != self.table[f][g].is_some() {
                    return Err(Error::InvalidCategory(format!(
                        "composite of {} and {} is missing",
                        self.arrows[f].name, self.arrows[g].name
                    )));
                }
            }
        }
        for f in 0..n {
            for g in self.out_of(self.arrows[f].dst) {
                let fg = self.compose(f, g);
                for h in self.out_of(self.arrows[g].dst) {
                    if self.compose(fg, h) != self.compose(f, self.compose(g, h)) {
                        return Err(Error::InvalidCategory(format!(
                            "associativity fails for {}, {}, {}",
                            self.arrows[f].name, self.arrows[g].name, self.arrows[h].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, f: usize) -> &Arrow {
        &self.arrows[f]
    }

    pub fn src(&self, f: usize) -> usize {
        self.arrows[f].src
    }

    pub fn dst(&self, f: usize) -> usize {
        self.arrows[f].dst
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.arrows[f].src] == f
    }

    /// `f` then `g`; panics when they are not composable.
    pub fn compose(&self, f: usize, g: usize) -> usize {
        self.table[f][g].expect("composable arrows")
    }

    pub fn try_compose(&self, f: usize, g: usize) -> Option<usize> {
        self.table[f][g]
    }

    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&f| self.arrows[f].src == x && self.arrows[f].dst == y)
            .collect()
    }

    pub fn out_of(&self, x: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&f| self.arrows[f].src == x).collect()
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (s, d) = (self.src(f), self.dst(f));
        self.hom(d, s)
            .into_iter()
            .find(|&g| self.compose(f, g) == self.identities[s] && self.compose(g, f) == self.identities[d])
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse(f).is_some()
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn to_json(&self) -> CategoryJson {
        let mut compose = Vec::new();
        for f in 0..self.arrows.len() {
            for g in 0..self.arrows.len() {
                if let Some(h) = self.table[f][g] {
                    if !self.is_identity(f) && !self.is_identity(g) {
                        compose.push([
                            self.arrows[f].name.clone(),
                            self.arrows[g].name.clone(),
                            self.arrows[h].name.clone(),
                        ]);
                    }
                }
            }
        }
        CategoryJson {
            v: "v1".into(),
            kind: "category".into(),
            name: self.name.clone(),
            objects: self.objects.clone(),
            arrows: self.arrows.clone(),
            identities: Some(self.identities.iter().map(|&i| self.arrows[i].name.clone()).collect()),
            compose,
        }
    }

    pub fn from_json(j: &CategoryJson) -> Result<FiniteCategory> {
        if j.v != "v1" || j.kind != "category" {
            return Err(Error::InvalidCategory(format!(
                "expected schema v1 kind \"category\", found {} {:?}",
                j.v, j.kind
            )));
        }
        let compose: Vec<(String, String, String)> = j
            .compose
            .iter()
            .map(|[a, b, c]| (a.clone(), b.clone(), c.clone()))
            .collect();
        FiniteCategory::from_parts(j.name.clone(), j.objects.clone(), j.arrows.clone(), j.identities.clone(), &compose)
    }

    /// Objects and arrows arranged as `(x, y) -> Hom(x, y)`.
    pub fn hom_table(&self) -> Vec<Vec<Vec<usize>>> {
        let n = self.objects.len();
        let mut t = vec![vec![Vec::new(); n]; n];
        for (f, a) in self.arrows.iter().enumerate() {
            t[a.src][a.dst].push(f);
        }
        t
    }
}

/// A functor between finite categories: images of objects and of arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Functor {
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
}

impl Functor {
    pub fn identity(c: &FiniteCategory) -> Functor {
        Functor {
            objects: (0..c.object_count()).collect(),
            arrows: (0..c.arrow_count()).collect(),
        }
    }

    pub fn validate(&self, src: &FiniteCategory, dst: &FiniteCategory) -> Result<()> {
        if self.objects.len() != src.object_count() || self.arrows.len() != src.arrow_count() {
            return Err(Error::InvalidMap("functor tables have the wrong length".into()));
        }
        if self.objects.iter().any(|&x| x >= dst.object_count()) || self.arrows.iter().any(|&f| f >= dst.arrow_count()) {
            return Err(Error::InvalidMap("functor image out of range".into()));
        }
        for f in 0..src.arrow_count() {
            let g = self.arrows[f];
            if dst.src(g) != self.objects[src.src(f)] || dst.dst(g) != self.objects[src.dst(f)] {
                return Err(Error::InvalidMap(format!("image of {} has the wrong endpoints", src.arrow(f).name)));
            }
        }
        for x in 0..src.object_count() {
            if self.arrows[src.identity(x)] != dst.identity(self.objects[x]) {
                return Err(Error::InvalidMap("identities are not preserved".into()));
            }
        }
        for f in 0..src.arrow_count() {
            for g in src.out_of(src.dst(f)) {
                if self.arrows[src.compose(f, g)] != dst.compose(self.arrows[f], self.arrows[g]) {
                    return Err(Error::InvalidMap("composition is not preserved".into()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryJson {
    pub v: String,
    pub kind: String,
    #[serde(default)]
    pub name: String,
    pub objects: Vec<String>,
    pub arrows: Vec<Arrow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identities: Option<Vec<String>>,
    /// Triples `[f, g, f then g]`.
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
}

pub fn point() -> FiniteCategory {
    FiniteCategory::new("point", &["0"], &[], &[]).expect("valid")
}

pub fn arrow() -> FiniteCategory {
    FiniteCategory::new("arrow", &["0", "1"], &[("f", 0, 1)], &[]).expect("valid")
}

pub fn iso() -> FiniteCategory {
    FiniteCategory::new(
        "iso",
        &["0", "1"],
        &[("u", 0, 1), ("v", 1, 0)],
        &[("u", "v", "id_0"), ("v", "u", "id_1")],
    )
    .expect("valid")
}

pub fn composable_pair() -> FiniteCategory {
    FiniteCategory::new(
        "composable-pair",
        &["0", "1", "2"],
        &[("f", 0, 1), ("g", 1, 2), ("gf", 0, 2)],
        &[("f", "g", "gf")],
    )
    .expect("valid")
}

pub fn parallel_pair() -> FiniteCategory {
    FiniteCategory::new("parallel-pair", &["0", "1"], &[("a", 0, 1), ("b", 0, 1)], &[]).expect("valid")
}

pub fn z2() -> FiniteCategory {
    FiniteCategory::new("z2", &["*"], &[("t", 0, 0)], &[("t", "t", "id_*")]).expect("valid")
}

/// `u: a -> b`, `v: b -> a` with `u then v = id_a` and `v then u = e`, `e` idempotent.
pub fn retract() -> FiniteCategory {
    FiniteCategory::new(
        "retract",
        &["a", "b"],
        &[("u", 0, 1), ("v", 1, 0), ("e", 1, 1)],
        &[
            ("u", "v", "id_a"),
            ("v", "u", "e"),
            ("e", "e", "e"),
            ("u", "e", "u"),
            ("e", "v", "v"),
        ],
    )
    .expect("valid")
}

/// The shipped fixture categories by name.
pub fn builtin(name: &str) -> Option<FiniteCategory> {
    Some(match name {
        "point" => point(),
        "arrow" => arrow(),
        "iso" => iso(),
        "composable-pair" => composable_pair(),
        "parallel-pair" => parallel_pair(),
        "z2" => z2(),
        "retract" => retract(),
        _ => return None,
    })
}

pub const BUILTIN_NAMES: [&str; 7] = ["point", "arrow", "iso", "composable-pair", "parallel-pair", "z2", "retract"];

/// A random finite poset on `n` objects, as a category.
pub fn random_poset(rng: &mut impl rand::Rng, n: usize, density: f64) -> FiniteCategory {
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = i == j || (i < j && rng.gen_bool(density));
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut arrows = Vec::new();
    let mut name_of = vec![vec![String::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if le[i][j] {
                let name = if i == j { format!("id_{i}") } else { format!("{i}<{j}") };
                name_of[i][j] = name.clone();
                arrows.push(Arrow { name, src: i, dst: j });
            }
        }
    }
    let mut compose = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if le[i][j] && le[j][k] {
                    compose.push((name_of[i][j].clone(), name_of[j][k].clone(), name_of[i][k].clone()));
                }
            }
        }
    }
    let ids = (0..n).map(|i| name_of[i][i].clone()).collect();
    FiniteCategory::from_parts("random-poset".into(), names, arrows, Some(ids), &compose).expect("posets are categories")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn builtins_validate() {
        for name in BUILTIN_NAMES {
            let c = builtin(name).unwrap();
            c.validate().unwrap();
            let round = FiniteCategory::from_json(&c.to_json()).unwrap();
            assert_eq!(round, c);
        }
        assert_eq!(retract().arrow_count(), 5);
        assert!(iso().is_iso(iso().arrow_index("u").unwrap()));
        assert!(!retract().is_iso(retract().arrow_index("u").unwrap()));
    }

    #[test]
    fn rejects_non_associative_tables() {
        let bad = FiniteCategory::new(
            "bad",
            &["*"],
            &[("a", 0, 0), ("b", 0, 0)],
            &[("a", "a", "b"), ("a", "b", "a"), ("b", "a", "a"), ("b", "b", "a")],
        );
        assert!(bad.is_err());
        let missing = FiniteCategory::new("m", &["0", "1", "2"], &[("f", 0, 1), ("g", 1, 2)], &[]);
        assert!(missing.is_err());
    }

    #[test]
    fn random_posets_are_categories() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            random_poset(&mut rng, 4, 0.5).validate().unwrap();
        }
    }
}

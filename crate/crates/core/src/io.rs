//! JSON documents (schema "v1") and the shipped fixtures.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::{CategoryJson, FiniteCategory};
use crate::error::{Error, Result};
use crate::precat::{Cell, CellComplex, ElemRef, Precat};
use crate::support::{BoundaryMode, Support};

pub const SCHEMA: &str = "v1";

pub const FIXTURES: [(&str, &str); 7] = [
    ("point", include_str!("../fixtures/point.json")),
    ("arrow", include_str!("../fixtures/arrow.json")),
    ("iso", include_str!("../fixtures/iso.json")),
    ("composable-pair", include_str!("../fixtures/composable-pair.json")),
    ("parallel-pair", include_str!("../fixtures/parallel-pair.json")),
    ("z2", include_str!("../fixtures/z2.json")),
    ("retract", include_str!("../fixtures/retract.json")),
];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrecatJson {
    pub v: String,
    pub kind: String,
    pub n: usize,
    pub d: u32,
    pub mode: BoundaryMode,
    /// Support shapes, in support order.
    pub shapes: Vec<Vec<u32>>,
    pub sizes: Vec<usize>,
    /// `restrictions[src][tgt][morphism][x]`, morphisms in hom-set order.
    pub restrictions: Vec<Vec<Vec<Vec<u32>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElemJson {
    pub cell: usize,
    pub level: Vec<u32>,
    /// Canonical components of the morphism from `level` into the cell's shape.
    pub morphism: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellJson {
    pub shape: Vec<u32>,
    pub attachment: Vec<ElemJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub v: String,
    pub kind: String,
    pub n: usize,
    pub d: u32,
    pub mode: BoundaryMode,
    pub cells: Vec<CellJson>,
}

#[derive(Clone, Debug)]
pub enum Document {
    Category(FiniteCategory),
    Precat(Precat),
    Complex(CellComplex),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Category(_) => "category",
            Document::Precat(_) => "precat",
            Document::Complex(_) => "complex",
        }
    }
}

fn check_version(v: &str) -> Result<()> {
    if v != SCHEMA {
        return Err(Error::Config(format!("schema version {v:?}, expected {SCHEMA:?}")));
    }
    Ok(())
}

pub fn precat_to_json(x: &Precat) -> PrecatJson {
    let s = x.support();
    let k = s.shape_count();
    PrecatJson {
        v: SCHEMA.into(),
        kind: "precat".into(),
        n: s.n(),
        d: s.d(),
        mode: s.mode(),
        shapes: (0..k).map(|i| s.shape(i).entries().to_vec()).collect(),
        sizes: x.sizes().to_vec(),
        restrictions: (0..k)
            .map(|src| {
                (0..k)
                    .map(|tgt| (0..s.hom_len(src, tgt) as u32).map(|a| x.table(src, tgt, a).to_vec()).collect())
                    .collect()
            })
            .collect(),
        labels: x.labels().cloned(),
    }
}

pub fn precat_from_json(j: &PrecatJson) -> Result<Precat> {
    check_version(&j.v)?;
    let s = Support::shared(j.n, j.d, j.mode)?;
    let k = s.shape_count();
    let shapes: Vec<Vec<u32>> = (0..k).map(|i| s.shape(i).entries().to_vec()).collect();
    if shapes != j.shapes {
        return Err(Error::InvalidPrecat("shape list does not match the support".into()));
    }
    if j.sizes.len() != k || j.restrictions.len() != k {
        return Err(Error::InvalidPrecat(format!("expected {k} levels")));
    }
    for src in 0..k {
        if j.restrictions[src].len() != k {
            return Err(Error::InvalidPrecat(format!("restrictions from {src}: expected {k} targets")));
        }
        for tgt in 0..k {
            let t = &j.restrictions[src][tgt];
            if t.len() != s.hom_len(src, tgt) || t.iter().any(|col| col.len() != j.sizes[tgt]) {
                return Err(Error::InvalidPrecat(format!("restriction table {src} <- {tgt} has the wrong size")));
            }
        }
    }
    let mut x = Precat::from_fn(s, j.sizes.clone(), |src, tgt, a, e| j.restrictions[src][tgt][a as usize][e as usize]);
    if let Some(l) = &j.labels {
        if l.len() != k || l.iter().zip(&j.sizes).any(|(lv, &n)| lv.len() != n) {
            return Err(Error::InvalidPrecat("labels do not match the level sizes".into()));
        }
        x = x.with_labels(l.clone());
    }
    x.validate()?;
    Ok(x)
}

pub fn complex_to_json(w: &CellComplex) -> ComplexJson {
    let s = w.support();
    ComplexJson {
        v: SCHEMA.into(),
        kind: "complex".into(),
        n: s.n(),
        d: s.d(),
        mode: s.mode(),
        cells: w
            .cells()
            .iter()
            .map(|c| CellJson {
                shape: s.shape(c.shape).entries().to_vec(),
                attachment: c
                    .attachment
                    .iter()
                    .map(|e| ElemJson {
                        cell: e.cell,
                        level: s.shape(e.level).entries().to_vec(),
                        morphism: s
                            .morph(e.level, w.cell(e.cell).shape, e.morphism)
                            .components()
                            .iter()
                            .map(|m| m.values().to_vec())
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn complex_from_json(j: &ComplexJson) -> Result<CellComplex> {
    check_version(&j.v)?;
    let s = Support::shared(j.n, j.d, j.mode)?;
    let mut shapes = Vec::with_capacity(j.cells.len());
    let mut cells = Vec::with_capacity(j.cells.len());
    for (c, cell) in j.cells.iter().enumerate() {
        let shape = s.shape_id_of(&cell.shape)?;
        let attachment = cell
            .attachment
            .iter()
            .map(|e| {
                let target: usize = *shapes
                    .get(e.cell)
                    .ok_or_else(|| Error::InvalidAttachment(format!("cell {c} refers to later cell {}", e.cell)))?;
                let level = s.shape_id_of(&e.level)?;
                Ok(ElemRef {
                    cell: e.cell,
                    level,
                    morphism: s.morph_from_values(level, target, &e.morphism)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        shapes.push(shape);
        cells.push(Cell { shape, attachment });
    }
    CellComplex::from_cells(s, cells)
}

pub fn category_from_json(j: &CategoryJson) -> Result<FiniteCategory> {
    check_version(&j.v)?;
    FiniteCategory::from_json(j)
}

/// Parse any document, dispatching on its `kind` field.
pub fn parse(text: &str) -> Result<Document> {
    #[derive(Deserialize)]
    struct Head {
        v: String,
        kind: String,
    }
    let head: Head = serde_json::from_str(text)?;
    check_version(&head.v)?;
    match head.kind.as_str() {
        "category" => Ok(Document::Category(category_from_json(&serde_json::from_str(text)?)?)),
        "precat" => Ok(Document::Precat(precat_from_json(&serde_json::from_str(text)?)?)),
        "complex" => Ok(Document::Complex(complex_from_json(&serde_json::from_str(text)?)?)),
        other => Err(Error::Config(format!("unknown document kind {other:?}"))),
    }
}

pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Load a document from a path; a missing path falls back to the shipped
/// fixture with the same stem (so `fixtures/arrow.json` and `arrow` both work).
pub fn load(arg: &str) -> Result<Document> {
    let path = Path::new(arg);
    if path.is_file() {
        return parse(&std::fs::read_to_string(path)?);
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
    match fixture(stem) {
        Some(text) => parse(text),
        None => Err(Error::Config(format!("no such file or fixture: {arg}"))),
    }
}

/// A category input as a precat: its nerve at n = 1, promoted at n = 2.
pub fn as_precat(doc: Document, support: &Arc<Support>) -> Result<Precat> {
    match doc {
        Document::Category(c) => {
            let low = Support::shared(1, support.d(), support.mode())?;
            let x = crate::precat::nerve(&low, &c)?;
            match support.n() {
                1 => Ok(x),
                2 => crate::precat::promote(&x),
                n => Err(Error::Unsupported(format!("categories are read at n = 1 or 2, not {n}"))),
            }
        }
        Document::Precat(x) => {
            let s = x.support();
            if s.n() != support.n() || s.d() != support.d() || s.mode() != support.mode() {
                return Err(Error::BoundMismatch(format!(
                    "precat over (n={}, d={}, {}) but run over (n={}, d={}, {})",
                    s.n(),
                    s.d(),
                    s.mode(),
                    support.n(),
                    support.d(),
                    support.mode()
                )));
            }
            Ok(x)
        }
        Document::Complex(_) => Err(Error::Config("expected a category or precat, got a cell complex".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category;
    use crate::precat::{nerve, representable_complex};

    #[test]
    fn fixtures_match_builtins() {
        for (name, text) in FIXTURES {
            let Document::Category(c) = parse(text).unwrap() else {
                panic!("{name} is not a category");
            };
            let b = category::builtin(name).unwrap();
            assert_eq!(c.to_json(), b.to_json(), "{name}");
        }
        assert!(matches!(load("fixtures/arrow.json").unwrap(), Document::Category(_)));
        assert!(load("nope").is_err());
    }

    #[test]
    fn precat_round_trip() {
        let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
        let x = nerve(&s, &category::retract()).unwrap();
        let text = serde_json::to_string(&precat_to_json(&x)).unwrap();
        let Document::Precat(y) = parse(&text).unwrap() else { panic!() };
        assert_eq!(precat_to_json(&y).restrictions, precat_to_json(&x).restrictions);
    }

    #[test]
    fn complex_round_trip() {
        let s = Support::shared(2, 2, BoundaryMode::Free).unwrap();
        let (w, _) = representable_complex(&s, s.shape_id_of(&[2, 1]).unwrap()).unwrap();
        let text = serde_json::to_string(&complex_to_json(&w)).unwrap();
        let Document::Complex(v) = parse(&text).unwrap() else { panic!() };
        assert_eq!(v.cells(), w.cells());
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(matches!(parse("{\"v\": \"v1\""), Err(Error::Json(_))));
        assert!(parse("{\"v\": \"v0\", \"kind\": \"category\"}").is_err());
        let mut j = precat_to_json(&nerve(&Support::shared(1, 2, BoundaryMode::Free).unwrap(), &category::arrow()).unwrap());
        j.restrictions[0][1][0][0] = 7;
        assert!(precat_from_json(&j).is_err());
    }
}

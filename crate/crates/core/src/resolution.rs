//! The first stages `F^0 ⇉ F^1 (-> F^2) -> A` of a free-cofibrant resolution.
//!
//! `F^0` completes the empty complex over `A`; `F^1` completes `F^0 ⊔ F^0`
//! over `F^0` along the fold map, so its first `2|F^0|` cells are the two
//! cofaces and its completion map is the degeneracy. `F^2` completes the
//! latching object (three copies of `F^1` glued along three copies of `F^0`)
//! over the fiber product `F^1 ×_{F^0} F^1`.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lifting::{
    complete_from_empty, equivalence_failure, is_ncategory, satisfies_lifting, small_way_from, Completion, CompletionReport,
};
use crate::precat::{fold_map, glue, pullback, CellComplex, ComplexMap, Evaluation, Precat, PrecatMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResolveConfig {
    pub pass_limit: usize,
    /// Also build the latching object and `F^2`.
    pub level2: bool,
}

impl Default for ResolveConfig {
    fn default() -> Self {
        ResolveConfig {
            pass_limit: crate::lifting::DEFAULT_PASS_LIMIT,
            level2: false,
        }
    }
}

/// The latching object `C` with its map to `F^1 ×_{F^0} F^1`.
#[derive(Clone, Debug)]
pub struct Latch {
    pub complex: CellComplex,
    /// Where each cell of `F^1` lands in `C`, for the copies on edges 01, 12, 02.
    pub copies: [Vec<usize>; 3],
    pub fiber_product: Precat,
    pub projections: [PrecatMap; 2],
    pub map: ComplexMap,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub base: Precat,
    /// `F^0 -> A`.
    pub f0: Completion,
    /// `F^1 -> F^0`; the map is the degeneracy `s`.
    pub f1: Completion,
    /// `i_0, i_1: F^0 -> F^1` as maps into the evaluation of `F^1`.
    pub cofaces: [ComplexMap; 2],
    pub latch: Option<Latch>,
    /// `F^2 -> F^1 ×_{F^0} F^1`.
    pub f2: Option<Completion>,
}

pub fn build_f0(a: &Precat, pass_limit: usize) -> Result<Completion> {
    complete_from_empty(a, pass_limit)
}

/// `F^1` over `F^0` and the two coface inclusions.
pub fn build_f1(f0: &Completion, pass_limit: usize) -> Result<(Completion, [ComplexMap; 2])> {
    let w = f0.complex();
    let doubled = w.disjoint_union(w)?;
    let start = doubled.evaluate()?;
    let fold = fold_map(&f0.evaluation);
    let f1 = small_way_from(start, fold, f0.precat(), pass_limit)?;
    let n = w.len();
    let i0 = ComplexMap::cell_inclusion(&(0..n).collect::<Vec<_>>(), &f1.evaluation);
    let i1 = ComplexMap::cell_inclusion(&(n..2 * n).collect::<Vec<_>>(), &f1.evaluation);
    Ok((f1, [i0, i1]))
}

/// Glue three copies of `F^1` in a triangle. Copy 01 sends its coface
/// copies to vertices 0 and 1, copy 12 to 1 and 2, copy 02 to 0 and 2.
pub fn build_latch2(f0: &Completion, f1: &Completion, cofaces: &[ComplexMap; 2]) -> Result<Latch> {
    let n0 = f0.complex().len();
    let w1 = f1.complex();
    let first: Vec<usize> = (0..w1.len()).collect();
    // 12: its copy 0 is vertex 1, i.e. copy 1 of the first component
    let shared_12: Vec<(usize, usize)> = (0..n0).map(|j| (j, n0 + j)).collect();
    let (c2, middle) = glue(w1, w1, &shared_12)?;
    // 02: copy 0 is vertex 0, copy 1 is vertex 2 (copy 1 of the middle component)
    let shared_02: Vec<(usize, usize)> = (0..n0).map(|j| (j, j)).chain((0..n0).map(|j| (n0 + j, middle[n0 + j]))).collect();
    let (c, last) = glue(&c2, w1, &shared_02)?;

    let e1 = f1.precat();
    let s = &f1.images;
    let (p, p1, p2) = pullback(e1, e1, s, s)?;
    let i0 = cofaces[0].to_precat_map(&f0.evaluation, e1);
    let i1 = cofaces[1].to_precat_map(&f0.evaluation, e1);
    let pos: Vec<HashMap<(u32, u32), u32>> = (0..p.support().shape_count())
        .map(|lv| {
            (0..p.size(lv) as u32)
                .map(|x| ((p1.apply(lv, x), p2.apply(lv, x)), x))
                .collect()
        })
        .collect();
    let mut images: Vec<Option<u32>> = vec![None; c.len()];
    for (copy, cells) in [&first, &middle, &last].into_iter().enumerate() {
        for (j, &target) in cells.iter().enumerate() {
            let shape = w1.cell(j).shape;
            let own = f1.evaluation.cell_element(j);
            let degenerate = |i: &PrecatMap| i.apply(shape, s.apply(shape, own));
            let (a, b) = match copy {
                0 => (own, degenerate(&i0)),
                1 => (degenerate(&i1), own),
                _ => (own, own),
            };
            let x = *pos[shape]
                .get(&(a, b))
                .ok_or_else(|| Error::InvalidComplex("latching map misses the fiber product".into()))?;
            match images[target] {
                None => images[target] = Some(x),
                Some(y) if y != x => {
                    return Err(Error::InvalidComplex(format!(
                        "latching map disagrees on the shared cell {target}"
                    )))
                }
                _ => {}
            }
        }
    }
    let map = ComplexMap::new(images.into_iter().map(|x| x.expect("every cell is covered")).collect());
    map.validate(&c, &p)?;
    Ok(Latch {
        complex: c,
        copies: [first, middle, last],
        fiber_product: p,
        projections: [p1, p2],
        map,
    })
}

pub fn build_f2(latch: &Latch, pass_limit: usize) -> Result<Completion> {
    let start: Evaluation = latch.complex.evaluate()?;
    small_way_from(start, latch.map.clone(), &latch.fiber_product, pass_limit)
}

impl Resolution {
    pub fn build(a: &Precat, config: &ResolveConfig) -> Result<Resolution> {
        let f0 = build_f0(a, config.pass_limit)?;
        let (f1, cofaces) = build_f1(&f0, config.pass_limit)?;
        let (latch, f2) = if config.level2 {
            let latch = build_latch2(&f0, &f1, &cofaces)?;
            let f2 = build_f2(&latch, config.pass_limit)?;
            (Some(latch), Some(f2))
        } else {
            (None, None)
        };
        Ok(Resolution {
            base: a.clone(),
            f0,
            f1,
            cofaces,
            latch,
            f2,
        })
    }

    /// Whether every completion stage reached its fixpoint.
    pub fn converged(&self) -> bool {
        self.reports().iter().all(|(_, r)| r.fixpoint)
    }

    pub fn reports(&self) -> Vec<(&'static str, &CompletionReport)> {
        let mut out = vec![("F0", &self.f0.report), ("F1", &self.f1.report)];
        if let Some(f2) = &self.f2 {
            out.push(("F2", &f2.report));
        }
        out
    }

    /// The degeneracy `s: F^1 -> F^0` on cells.
    pub fn degeneracy(&self) -> &ComplexMap {
        &self.f1.map
    }

    /// Check every structural identity; returns `(name, holds)` pairs.
    pub fn check_identities(&self) -> Result<Vec<(String, bool)>> {
        let mut out = Vec::new();
        let w0 = self.f0.complex();
        let w1 = self.f1.complex();
        let n0 = w0.len();
        out.push((
            "F0 -> A is a valid map".into(),
            self.f0.map.validate(w0, &self.base).is_ok(),
        ));
        out.push((
            "F0 -> A has the bounded lifting property".into(),
            satisfies_lifting(self.f0.over(&self.base)).is_none(),
        ));
        out.push((
            "s: F1 -> F0 is a valid map".into(),
            self.f1.map.validate(w1, self.f0.precat()).is_ok(),
        ));
        let doubled = w0.disjoint_union(w0)?;
        out.push((
            "F0 ⊔ F0 is a prefix of F1".into(),
            w1.len() >= 2 * n0 && w1.cells()[..2 * n0] == doubled.cells()[..],
        ));
        for (k, i) in self.cofaces.iter().enumerate() {
            let valid = i.validate(w0, self.f1.precat()).is_ok();
            let ids = (0..n0).all(|c| {
                let shape = w0.cell(c).shape;
                self.f1.images.apply(shape, i.image(c)) == self.f0.evaluation.cell_element(c)
            });
            out.push((format!("i{k} is a valid map"), valid));
            out.push((format!("s ∘ i{k} = id"), ids));
        }
        if let (Some(latch), Some(f2)) = (&self.latch, &self.f2) {
            out.push((
                "C has 3|F1| - 3|F0| cells".into(),
                latch.complex.len() == 3 * w1.len() - 3 * n0,
            ));
            out.push((
                "C is a prefix of F2".into(),
                f2.complex().cells()[..latch.complex.len()] == latch.complex.cells()[..],
            ));
            let f = latch.map.to_precat_map(&latch.complex.evaluate()?, &latch.fiber_product);
            out.push((
                "C -> F1 ×_F0 F1 is natural".into(),
                f.validate(&latch.complex.evaluate()?.precat().clone(), &latch.fiber_product).is_ok(),
            ));
            let e1 = self.f1.precat();
            let s = &self.f1.images;
            let pr = |k: usize, copy: usize, j: usize| {
                let x = latch.map.image(latch.copies[copy][j]);
                latch.projections[k].apply(w1.cell(j).shape, x)
            };
            let own = |j: usize| self.f1.evaluation.cell_element(j);
            let i0 = self.cofaces[0].to_precat_map(&self.f0.evaluation, e1);
            let i1 = self.cofaces[1].to_precat_map(&self.f0.evaluation, e1);
            let deg = |i: &PrecatMap, j: usize| {
                let shape = w1.cell(j).shape;
                i.apply(shape, s.apply(shape, own(j)))
            };
            let first_ok = (0..w1.len()).all(|j| pr(0, 0, j) == own(j) && pr(0, 2, j) == own(j) && pr(0, 1, j) == deg(&i1, j));
            let second_ok = (0..w1.len()).all(|j| pr(1, 1, j) == own(j) && pr(1, 2, j) == own(j) && pr(1, 0, j) == deg(&i0, j));
            out.push(("first projection: id on 01 and 02, i1 ∘ s on 12".into(), first_ok));
            out.push(("second projection: id on 12 and 02, i0 ∘ s on 01".into(), second_ok));
            out.push((
                "F2 -> F1 ×_F0 F1 is a valid map".into(),
                f2.map.validate(f2.complex(), &latch.fiber_product).is_ok(),
            ));
        }
        Ok(out)
    }
}

/// Cell counts per shape of a complex, keyed by the shape's display form.
pub fn census(w: &CellComplex) -> Vec<(String, usize)> {
    w.census()
        .into_iter()
        .map(|(s, k)| (w.support().shape(s).to_string(), k))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct StageSummary {
    pub stage: String,
    pub cells: usize,
    pub census: Vec<(String, usize)>,
    pub level_sizes: Vec<(String, usize)>,
    pub report: CompletionReport,
    /// A square against the stage's own target with no lift, if any.
    pub unlifted: Option<String>,
    /// Why the stage is not an n-category, if it is not.
    pub segal_failure: Option<String>,
    /// Whether the composite down to the base is an equivalence; undecided
    /// when either side fails the Segal check.
    pub equivalence_to_base: Option<bool>,
    pub equivalence_failure: Option<String>,
}

impl Resolution {
    /// Per-stage census, completion report and the recorded outcomes of the
    /// lifting, Segal and equivalence checks (none of which is assumed).
    pub fn summary(&self) -> Result<Vec<StageSummary>> {
        let base_ok = is_ncategory(&self.base)?.is_none();
        let to_base_1 = self.f1.images.then(&self.f0.images);
        let mut stages: Vec<(&str, &Completion, &Precat, PrecatMap)> = vec![
            ("F0", &self.f0, &self.base, self.f0.images.clone()),
            ("F1", &self.f1, self.f0.precat(), to_base_1.clone()),
        ];
        if let (Some(f2), Some(latch)) = (&self.f2, &self.latch) {
            let down = f2.images.then(&latch.projections[0]).then(&to_base_1);
            stages.push(("F2", f2, &latch.fiber_product, down));
        }
        let mut out = Vec::new();
        for (name, c, target, down) in stages {
            let s = c.complex().support();
            let unlifted = satisfies_lifting(c.over(target)).map(|sq| {
                format!("shape {}, boundary {:?}, base {}", s.shape(sq.shape), sq.boundary, sq.base)
            });
            let segal = is_ncategory(c.precat())?;
            let failure = match (&segal, base_ok) {
                (None, true) => Some(equivalence_failure(&down, c.precat(), &self.base)?),
                _ => None,
            };
            out.push(StageSummary {
                stage: name.into(),
                cells: c.complex().len(),
                census: census(c.complex()),
                level_sizes: (0..s.shape_count())
                    .map(|l| (s.shape(l).to_string(), c.precat().size(l)))
                    .collect(),
                report: c.report.clone(),
                unlifted,
                segal_failure: segal.map(|w| w.to_string()),
                equivalence_to_base: failure.as_ref().map(Option::is_none),
                equivalence_failure: failure.flatten().map(|f| f.to_string()),
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category;
    use crate::precat::nerve;
    use crate::support::{BoundaryMode, Support};

    #[test]
    fn resolution_of_the_point() {
        let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
        let a = nerve(&s, &category::point()).unwrap();
        let r = Resolution::build(&a, &ResolveConfig::default()).unwrap();
        assert_eq!(r.f0.complex().len(), 1);
        assert_eq!(r.f1.complex().len(), 8);
        assert!(r.converged());
        for (name, ok) in r.check_identities().unwrap() {
            assert!(ok, "{name}");
        }
    }

    #[test]
    fn level_two_at_small_bound() {
        let s = Support::shared(1, 2, BoundaryMode::Free).unwrap();
        let a = nerve(&s, &category::point()).unwrap();
        let r = Resolution::build(
            &a,
            &ResolveConfig {
                level2: true,
                ..ResolveConfig::default()
            },
        )
        .unwrap();
        assert!(r.converged());
        let latch = r.latch.as_ref().unwrap();
        assert_eq!(latch.complex.len(), 3 * r.f1.complex().len() - 3);
        for (name, ok) in r.check_identities().unwrap() {
            assert!(ok, "{name}");
        }
    }

    #[test]
    fn resolution_of_the_arrow() {
        let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
        let a = nerve(&s, &category::arrow()).unwrap();
        let r = Resolution::build(&a, &ResolveConfig::default()).unwrap();
        assert_eq!(r.f0.complex().len(), 3);
        for (name, ok) in r.check_identities().unwrap() {
            assert!(ok, "{name}");
        }
    }

    #[test]
    fn stage_outcomes_are_recorded_not_assumed() {
        let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
        let a = nerve(&s, &category::point()).unwrap();
        let r = Resolution::build(&a, &ResolveConfig::default()).unwrap();
        let st = r.summary().unwrap();
        assert_eq!(st[0].equivalence_to_base, Some(true));
        assert!(st.iter().all(|x| x.unlifted.is_none()));
        // free complexes have no inverses to fill the connecting edges
        assert!(st[1].segal_failure.is_some());
        assert_eq!(st[1].equivalence_to_base, None);
    }
}

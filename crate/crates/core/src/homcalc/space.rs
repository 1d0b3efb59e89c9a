//! The simplicial set `k -> Hom(F^k, B)`, truncated at level 2.

use std::collections::HashMap;

use serde::Serialize;

use super::{enumerate_maps_with, find, DEFAULT_MAP_LIMIT};
use crate::error::{Error, Result};
use crate::precat::{CellComplex, ComplexMap, Evaluation, Precat, PrecatMap};
use crate::resolution::Resolution;

#[derive(Clone, Debug)]
pub struct MappingSpace {
    pub levels: Vec<Vec<ComplexMap>>,
    /// `faces[k][i][x]`: index of `d_i x` in level `k - 1` (empty for `k = 0`).
    pub faces: Vec<Vec<Vec<Option<usize>>>>,
    /// `degeneracies[k][j][x]`: index of `s_j x` in level `k + 1`.
    pub degeneracies: Vec<Vec<Vec<Option<usize>>>>,
    pub identities: Vec<(String, bool)>,
    pub pi0: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MappingSpaceSummary {
    pub level_sizes: Vec<usize>,
    pub identities: Vec<(String, bool)>,
    pub pi0: usize,
}

impl MappingSpace {
    pub fn summary(&self) -> MappingSpaceSummary {
        MappingSpaceSummary {
            level_sizes: self.levels.iter().map(Vec::len).collect(),
            identities: self.identities.clone(),
            pi0: self.pi0,
        }
    }
}

fn lookup(level: &[ComplexMap]) -> HashMap<&[u32], usize> {
    level.iter().enumerate().map(|(i, m)| (m.images(), i)).collect()
}

/// Precompose `h: W -> B` with the cell map given by `images` (cells of `V` to elements of `eval(W)`).
fn pull(h: &ComplexMap, eval: &Evaluation, b: &Precat, along: &ComplexMap, v: &CellComplex) -> ComplexMap {
    let lev: PrecatMap = h.to_precat_map(eval, b);
    along.then(v, &lev)
}

pub fn mapping_space(res: &Resolution, b: &Precat, max_level: usize) -> Result<MappingSpace> {
    if max_level > 2 {
        return Err(Error::Unsupported(format!("mapping space levels above 2 (asked for {max_level})")));
    }
    if max_level == 2 && res.f2.is_none() {
        return Err(Error::Config("level 2 needs F2; build the resolution with level 2".into()));
    }
    let stages: Vec<&Evaluation> = [Some(&res.f0.evaluation), Some(&res.f1.evaluation), res.f2.as_ref().map(|c| &c.evaluation)]
        .into_iter()
        .take(max_level + 1)
        .map(|e| e.expect("checked above"))
        .collect();
    let levels: Vec<Vec<ComplexMap>> = stages
        .iter()
        .map(|e| enumerate_maps_with(e.complex(), b, DEFAULT_MAP_LIMIT).map(|(m, _)| m.maps))
        .collect::<Result<_>>()?;
    let index: Vec<HashMap<&[u32], usize>> = levels.iter().map(|l| lookup(l)).collect();
    let n0 = res.f0.complex().len();

    // Cofaces as cell lists: d_i restricts to these cells.
    let mut coface_cells: Vec<Vec<Vec<usize>>> = vec![Vec::new(), vec![(n0..2 * n0).collect(), (0..n0).collect()]];
    if let Some(latch) = &res.latch {
        coface_cells.push(vec![latch.copies[1].clone(), latch.copies[2].clone(), latch.copies[0].clone()]);
    }
    let mut faces = vec![Vec::new()];
    for k in 1..levels.len() {
        faces.push(
            coface_cells[k]
                .iter()
                .map(|cells| {
                    levels[k]
                        .iter()
                        .map(|h| index[k - 1].get(h.restrict_cells(cells).images()).copied())
                        .collect()
                })
                .collect(),
        );
    }

    // Codegeneracies as cell maps into the evaluation of the level below.
    let mut codegeneracies: Vec<Vec<ComplexMap>> = vec![vec![res.f1.map.clone()]];
    if let (Some(latch), Some(f2)) = (&res.latch, &res.f2) {
        let w2 = f2.complex();
        let via = |k: usize| {
            ComplexMap::new(
                (0..w2.len())
                    .map(|c| latch.projections[k].apply(w2.cell(c).shape, f2.map.image(c)))
                    .collect(),
            )
        };
        codegeneracies.push(vec![via(1), via(0)]);
    }
    let mut degeneracies = Vec::new();
    for k in 0..levels.len() - 1 {
        let upper = stages[k + 1].complex();
        degeneracies.push(
            codegeneracies[k]
                .iter()
                .map(|sigma| {
                    levels[k]
                        .iter()
                        .map(|h| index[k + 1].get(pull(h, stages[k], b, sigma, upper).images()).copied())
                        .collect()
                })
                .collect(),
        );
    }
    degeneracies.push(Vec::new());

    let identities = simplicial_identities(&levels, &faces, &degeneracies);

    let k0 = levels[0].len();
    let mut parent: Vec<usize> = (0..k0).collect();
    if levels.len() > 1 {
        for x in 0..levels[1].len() {
            if let (Some(a), Some(c)) = (faces[1][0][x], faces[1][1][x]) {
                let (ra, rc) = (find(&mut parent, a), find(&mut parent, c));
                parent[ra.max(rc)] = ra.min(rc);
            }
        }
    }
    let pi0 = (0..k0).filter(|&i| find(&mut parent, i) == i).count();
    Ok(MappingSpace {
        levels,
        faces,
        degeneracies,
        identities,
        pi0,
    })
}

type Table = Vec<Vec<Option<usize>>>;

fn simplicial_identities(levels: &[Vec<ComplexMap>], faces: &[Table], degeneracies: &[Table]) -> Vec<(String, bool)> {
    let mut out = Vec::new();
    let top = levels.len() - 1;
    let all = |k: usize| 0..levels[k].len();
    let then = |f: &Vec<Option<usize>>, x: Option<usize>| x.and_then(|x| f[x]);
    for k in 1..=top {
        out.push((
            format!("faces are defined on level {k}"),
            faces[k].iter().all(|f| f.iter().all(Option::is_some)),
        ));
    }
    for k in 0..top {
        out.push((
            format!("degeneracies are defined on level {k}"),
            degeneracies[k].iter().all(|f| f.iter().all(Option::is_some)),
        ));
    }
    // d_i s_j = id for i = j, j + 1
    for k in 0..top {
        for j in 0..degeneracies[k].len() {
            for i in [j, j + 1] {
                let ok = all(k).all(|x| then(&faces[k + 1][i], degeneracies[k][j][x]) == Some(x));
                out.push((format!("d{i} s{j} = id on level {k}"), ok));
            }
        }
    }
    if top == 2 {
        // d_i d_j = d_{j-1} d_i for i < j
        for j in 1..3 {
            for i in 0..j {
                let ok = all(2).all(|x| then(&faces[1][i], faces[2][j][x]) == then(&faces[1][j - 1], faces[2][i][x]));
                out.push((format!("d{i} d{j} = d{} d{i}", j - 1), ok));
            }
        }
        // d_0 s_1 = s_0 d_0 and d_2 s_0 = s_0 d_1 on level 1
        let ok = all(1).all(|x| then(&faces[2][0], degeneracies[1][1][x]) == then(&degeneracies[0][0], faces[1][0][x]));
        out.push(("d0 s1 = s0 d0".into(), ok));
        let ok = all(1).all(|x| then(&faces[2][2], degeneracies[1][0][x]) == then(&degeneracies[0][0], faces[1][1][x]));
        out.push(("d2 s0 = s0 d1".into(), ok));
        // s_1 s_0 = s_0 s_0 on level 0
        let ok = all(0).all(|x| then(&degeneracies[1][1], degeneracies[0][0][x]) == then(&degeneracies[1][0], degeneracies[0][0][x]));
        out.push(("s1 s0 = s0 s0".into(), ok));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category;
    use crate::homcalc::hom_classes;
    use crate::precat::nerve;
    use crate::resolution::ResolveConfig;
    use crate::support::{BoundaryMode, Support};

    #[test]
    fn point_into_iso() {
        let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
        let a = nerve(&s, &category::point()).unwrap();
        let b = nerve(&s, &category::iso()).unwrap();
        let r = Resolution::build(&a, &ResolveConfig::default()).unwrap();
        let m = mapping_space(&r, &b, 1).unwrap();
        assert_eq!(m.levels[0].len(), 2);
        assert!(m.levels[1].len() >= 2);
        assert_eq!(m.pi0, 1);
        assert!(m.identities.iter().all(|(_, ok)| *ok), "{:?}", m.identities);
        assert_eq!(m.pi0, hom_classes(&r, &b).unwrap().class_count());
    }

    #[test]
    fn level_two() {
        let s = Support::shared(1, 2, BoundaryMode::Free).unwrap();
        let a = nerve(&s, &category::point()).unwrap();
        let b = nerve(&s, &category::iso()).unwrap();
        let r = Resolution::build(
            &a,
            &ResolveConfig {
                level2: true,
                ..ResolveConfig::default()
            },
        )
        .unwrap();
        let m = mapping_space(&r, &b, 2).unwrap();
        assert_eq!(m.levels.len(), 3);
        assert!(m.identities.iter().all(|(_, ok)| *ok), "{:?}", m.identities);
    }
}

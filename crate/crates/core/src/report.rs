//! Cross-checks of the engine against the oracle, and the report suites.

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::category::{self, FiniteCategory, Functor};
use crate::error::{Error, Result};
use crate::homcalc::{enumerate_maps, hom_classes, HomClasses};
use crate::lifting::{slice_reduction_check, DEFAULT_PASS_LIMIT};
use crate::oracle::{self, ThetaClosure};
use crate::precat::{boundary, nerve, nerve_functor, representable, representable_complex, Precat};
use crate::random::{random_attachment, random_complex, random_map, random_relabel};
use crate::resolution::{ResolveConfig, Resolution};
use crate::support::{BoundaryMode, Support};
use crate::theta::{hom_set, MonotoneMap, ThetaMorphism, ThetaShape};

#[derive(Clone, Debug, Serialize)]
pub struct ThetaCrosscheck {
    pub n: usize,
    pub bound: u32,
    pub hom_pairs: usize,
    pub morphisms: usize,
    pub mismatches: Vec<String>,
}

impl ThetaCrosscheck {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare canonical forms with the closure classes on every pair of shapes
/// with entries at most `bound`.
pub fn theta_crosscheck(n: usize, bound: u32) -> Result<ThetaCrosscheck> {
    let mut closure = ThetaClosure::build(n, bound as usize)?;
    let shapes: Vec<ThetaShape> = closure
        .shapes()
        .into_iter()
        .map(|o| ThetaShape::new(n, o.iter().take_while(|&&e| e > 0).map(|&e| e as u32).collect()))
        .collect::<Result<_>>()?;
    let mut out = ThetaCrosscheck {
        n,
        bound,
        hom_pairs: 0,
        morphisms: 0,
        mismatches: Vec::new(),
    };
    let padded = |s: &ThetaShape| (0..n).map(|i| s.entry_or_zero(i) as usize).collect::<Vec<_>>();
    for src in &shapes {
        for tgt in &shapes {
            out.hom_pairs += 1;
            let table = closure.classes(&padded(src), &padded(tgt))?;
            out.morphisms += table.morphisms;
            let expected = hom_set(src, tgt)?.len();
            if expected != table.classes.len() {
                out.mismatches.push(format!(
                    "Hom({src}, {tgt}): {expected} canonical morphisms, {} closure classes",
                    table.classes.len()
                ));
            }
            let mut seen: Vec<Vec<u32>> = Vec::new();
            for class in &table.classes {
                let mut forms = Vec::new();
                for raw in class {
                    let comps = raw
                        .components
                        .iter()
                        .enumerate()
                        .map(|(i, v)| MonotoneMap::new(tgt.entry_or_zero(i), v.iter().map(|&x| x as u32).collect()))
                        .collect::<Result<Vec<_>>>()?;
                    forms.push(ThetaMorphism::canonicalize(src, tgt, &comps)?.encoding());
                }
                forms.dedup();
                if forms.len() != 1 {
                    out.mismatches.push(format!("Hom({src}, {tgt}): one closure class has {} canonical forms", forms.len()));
                } else if seen.contains(&forms[0]) {
                    out.mismatches.push(format!("Hom({src}, {tgt}): two closure classes share a canonical form"));
                } else {
                    seen.push(forms.pop().expect("one form"));
                }
            }
        }
    }
    Ok(out)
}

/// One (A, B) comparison between the coequalizer and the oracle.
#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub source: String,
    pub target: String,
    pub method_classes: usize,
    pub oracle_classes: usize,
    pub agree: bool,
    pub maps: usize,
    pub edges: usize,
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
    pub single_step_sufficient: bool,
    pub converged: bool,
    /// Oracle classes the method identifies, with witnesses.
    pub merged: Vec<MergedPair>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MergedPair {
    /// Two functors the oracle keeps apart.
    pub functors: [String; 2],
    /// Their maps `F^0 -> B` (labels per cell), which the method identifies.
    pub maps: [Vec<String>; 2],
    /// Basic homotopies `F^1 -> B` joining them, one per step.
    pub path: Vec<Vec<String>>,
    pub reason: String,
}

pub fn map_labels(b: &Precat, complex: &crate::precat::CellComplex, images: &[u32]) -> Vec<String> {
    images
        .iter()
        .enumerate()
        .map(|(c, &x)| b.label(complex.cell(c).shape, x))
        .collect()
}

fn describe_functor(a: &FiniteCategory, b: &FiniteCategory, f: &Functor) -> String {
    let objs: Vec<String> = (0..a.object_count())
        .map(|x| format!("{}->{}", a.objects()[x], b.objects()[f.objects[x]]))
        .collect();
    let arrows: Vec<String> = (0..a.arrow_count())
        .filter(|&g| !a.is_identity(g))
        .map(|g| format!("{}->{}", a.arrow(g).name, b.arrow(f.arrows[g]).name))
        .collect();
    format!("{{{}}}", objs.into_iter().chain(arrows).collect::<Vec<_>>().join(", "))
}

/// Shortest chain of relation edges from `from` to `to`, ignoring direction.
fn edge_path(hc: &HomClasses, from: usize, to: usize) -> Option<Vec<usize>> {
    let k = hc.maps.len();
    let mut prev: Vec<Option<usize>> = vec![None; k];
    let mut seen = vec![false; k];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(x) = queue.pop_front() {
        if x == to {
            let mut path = Vec::new();
            let mut y = to;
            while y != from {
                let e = prev[y].expect("reached through an edge");
                path.push(e);
                let edge = &hc.edges[e];
                y = if edge.to == y { edge.from } else { edge.to };
            }
            path.reverse();
            return Some(path);
        }
        for (i, e) in hc.edges.iter().enumerate() {
            for (p, q) in [(e.from, e.to), (e.to, e.from)] {
                if p == x && !seen[q] {
                    seen[q] = true;
                    prev[q] = Some(i);
                    queue.push_back(q);
                }
            }
        }
    }
    None
}

/// Run the pipeline for `(a, b)` at n = 1 and compare with the oracle.
pub fn compare_pair(a: &FiniteCategory, b: &FiniteCategory, d: u32, pass_limit: usize) -> Result<(PairReport, HomClasses)> {
    let s = Support::shared(1, d, BoundaryMode::Free)?;
    let na = nerve(&s, a)?;
    let nb = nerve(&s, b)?;
    let res = Resolution::build(
        &na,
        &ResolveConfig {
            pass_limit,
            level2: false,
        },
    )?;
    let hc = hom_classes(&res, &nb)?;
    let truth = oracle::ho_cat_hom(a, b);
    let w0 = res.f0.complex();
    let w1 = res.f1.complex();
    // each oracle class representative as a map F^0 -> A -> B
    let index: HashMap<&[u32], usize> = hc.maps.maps.iter().enumerate().map(|(i, m)| (m.images(), i)).collect();
    let mut reps = Vec::new();
    for &r in &truth.classes.representatives {
        let f = &truth.functors[r];
        let nf = nerve_functor(&s, a, b, f)?;
        let images = res.f0.map.then(w0, &nf);
        let i = *index
            .get(images.images())
            .ok_or_else(|| Error::InvalidMap("a functor's map out of F^0 was not enumerated".into()))?;
        reps.push((f, i));
    }
    let iso = oracle::object_iso_classes(b);
    let mut merged = Vec::new();
    for (x, &(f, i)) in reps.iter().enumerate() {
        for &(g, j) in &reps[x + 1..] {
            if hc.class_of[i] != hc.class_of[j] {
                continue;
            }
            let reason = match (0..a.object_count()).find(|&o| iso[f.objects[o]] != iso[g.objects[o]]) {
                Some(o) => format!(
                    "{} and {} are not isomorphic",
                    b.objects()[f.objects[o]],
                    b.objects()[g.objects[o]]
                ),
                None => "no natural isomorphism".to_string(),
            };
            let path = edge_path(&hc, i, j)
                .unwrap_or_default()
                .into_iter()
                .map(|e| map_labels(&nb, w1, hc.edges[e].witness.images()))
                .collect();
            merged.push(MergedPair {
                functors: [describe_functor(a, b, f), describe_functor(a, b, g)],
                maps: [
                    map_labels(&nb, w0, hc.maps.maps[i].images()),
                    map_labels(&nb, w0, hc.maps.maps[j].images()),
                ],
                path,
                reason,
            });
        }
    }
    let report = PairReport {
        source: a.name().to_string(),
        target: b.name().to_string(),
        method_classes: hc.class_count(),
        oracle_classes: truth.count(),
        agree: hc.class_count() == truth.count(),
        maps: hc.maps.len(),
        edges: hc.edges.len(),
        reflexive: hc.flags.reflexive,
        symmetric: hc.flags.symmetric,
        transitive: hc.flags.transitive,
        single_step_sufficient: hc.flags.single_step_sufficient(),
        converged: res.converged(),
        merged,
    };
    Ok((report, hc))
}

pub const ACCEPTANCE_SUITE: [(&str, &str); 5] = [
    ("arrow", "arrow"),
    ("iso", "arrow"),
    ("point", "arrow"),
    ("point", "iso"),
    ("point", "point"),
];

pub const DISCREPANCY_SUITE: [(&str, &str); 5] = [
    ("arrow", "arrow"),
    ("point", "retract"),
    ("point", "point"),
    ("point", "z2"),
    ("z2", "z2"),
];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub degree_bound: u32,
    pub pairs: Vec<PairReport>,
    pub mismatches: usize,
}

pub fn run_suite(name: &str, pairs: &[(&str, &str)], d: u32) -> Result<SuiteReport> {
    let mut out = Vec::new();
    for (a, b) in pairs {
        let ca = category::builtin(a).ok_or_else(|| crate::Error::Config(format!("unknown category {a}")))?;
        let cb = category::builtin(b).ok_or_else(|| crate::Error::Config(format!("unknown category {b}")))?;
        out.push(compare_pair(&ca, &cb, d, DEFAULT_PASS_LIMIT)?.0);
    }
    let mismatches = out.iter().filter(|p| !p.agree).count();
    Ok(SuiteReport {
        suite: name.to_string(),
        degree_bound: d,
        pairs: out,
        mismatches,
    })
}

/// Outcome of a randomized property run.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyRun {
    pub name: String,
    pub trials: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl PropertyRun {
    fn new(name: &str) -> PropertyRun {
        PropertyRun {
            name: name.into(),
            trials: 0,
            checks: 0,
            failures: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

const SUPPORTS: [(usize, u32); 2] = [(1, 3), (2, 2)];

/// `|W'_N| = |W_N| + |h(M)_N| - |∂(M)_N|` after attaching a random cell.
pub fn pushout_law(rng: &mut impl Rng, trials: usize) -> Result<PropertyRun> {
    let mut run = PropertyRun::new("pushout law");
    let mut attempts = 0;
    while run.trials < trials && attempts < 50 * trials {
        attempts += 1;
        let (n, d) = SUPPORTS[attempts % 2];
        let s = Support::shared(n, d, BoundaryMode::Free)?;
        let (points, cells) = (rng.gen_range(1..=3), rng.gen_range(0..=5));
        let mut ev = random_complex(rng, &s, points, cells)?;
        let shape = rng.gen_range(0..s.shape_count());
        let Some(xs) = random_attachment(rng, &ev, shape) else {
            continue;
        };
        let before = ev.precat().sizes().to_vec();
        ev.push_indices(shape, xs)?;
        let h = representable(&s, shape);
        let (b, _) = boundary(&s, shape);
        run.trials += 1;
        for level in 0..s.shape_count() {
            run.checks += 1;
            let expected = before[level] + h.size(level) - b.size(level);
            if ev.precat().size(level) != expected {
                run.failures.push(format!(
                    "n={n}: attaching {} changed level {} to {}, expected {expected}",
                    s.shape(shape),
                    s.shape(level),
                    ev.precat().size(level)
                ));
            }
        }
    }
    Ok(run)
}

/// `|Hom(h(M)-complex, B)| = |B_M|` on random presheaves, with every map
/// checked for naturality over all support morphisms.
pub fn representability(rng: &mut impl Rng, trials: usize) -> Result<PropertyRun> {
    let mut run = PropertyRun::new("representability");
    for t in 0..trials {
        let (n, d) = SUPPORTS[t % 2];
        let s = Support::shared(n, d, BoundaryMode::Free)?;
        let b = if n == 1 && t % 4 == 0 {
            let k = rng.gen_range(1..=4);
            nerve(&s, &category::random_poset(rng, k, 0.5))?
        } else {
            {
            let (points, cells) = (rng.gen_range(1..=3), rng.gen_range(0..=6));
            let ev = random_complex(rng, &s, points, cells)?;
            random_relabel(rng, ev.precat())
        }
        };
        b.validate()?;
        run.trials += 1;
        for shape in 0..s.shape_count() {
            let (w, _) = representable_complex(&s, shape)?;
            let ev = w.evaluate()?;
            let maps = enumerate_maps(&w, &b)?;
            run.checks += 1;
            if maps.len() != b.size(shape) {
                run.failures.push(format!(
                    "n={n}: {} maps out of h({}) but {} elements",
                    maps.len(),
                    s.shape(shape),
                    b.size(shape)
                ));
            }
            for m in &maps.maps {
                if let Err(e) = m.to_precat_map(&ev, &b).validate(ev.precat(), &b) {
                    run.failures.push(format!("n={n}: map out of h({}) is not natural: {e}", s.shape(shape)));
                }
            }
        }
    }
    Ok(run)
}

/// Slice reduction on random maps of 2-precats until `squares` squares are checked.
pub fn slice_reduction(rng: &mut impl Rng, squares: usize) -> Result<PropertyRun> {
    let mut run = PropertyRun::new("slice reduction");
    let s = Support::shared(2, 2, BoundaryMode::Free)?;
    let shapes: Vec<usize> = (0..s.shape_count()).filter(|&i| s.shape(i).len() >= 1).collect();
    let mut lifts = 0;
    let mut attempts = 0;
    // several independent maps, not just enough squares from one
    while (run.checks < squares || run.trials < 10) && attempts < 200 {
        attempts += 1;
        let (points, cells) = (rng.gen_range(1..=3), rng.gen_range(2..=8));
        let ey = random_complex(rng, &s, points, cells)?;
        let (points, cells) = (rng.gen_range(1..=3), rng.gen_range(0..=6));
        let ex = random_complex(rng, &s, points, cells)?;
        let Some(f) = random_map(rng, ex.complex(), ey.precat()) else {
            continue;
        };
        let f = f.to_precat_map(&ex, ey.precat());
        run.trials += 1;
        for &shape in &shapes {
            let r = slice_reduction_check(&f, ex.precat(), ey.precat(), shape)?;
            run.checks += r.squares;
            lifts += r.lifts_upstairs;
            if let Some(sq) = r.mismatch {
                run.failures.push(format!("shape {}: square {sq:?} disagrees with its slice", r.shape));
            }
        }
    }
    if run.checks < squares || run.trials < 10 {
        run.failures.push(format!("only {} squares from {} maps", run.checks, run.trials));
    }
    if lifts == 0 || lifts == run.checks {
        run.failures.push("degenerate sample: every square had the same answer".into());
    }
    Ok(run)
}

/// All randomized runs from one seed.
pub fn property_suite(seed: u64) -> Result<Vec<PropertyRun>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(vec![
        pushout_law(&mut rng, 200)?,
        representability(&mut rng, 50)?,
        slice_reduction(&mut rng, 100)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crosscheck_at_n_two() {
        let c = theta_crosscheck(2, 2).unwrap();
        assert!(c.holds(), "{:?}", c.mismatches);
        assert_eq!(c.hom_pairs, 49);
    }

    #[test]
    fn properties_hold() {
        for run in property_suite(1).unwrap() {
            assert!(run.holds(), "{}: {:?}", run.name, run.failures);
        }
    }

    #[test]
    fn retract_discrepancy_is_flagged() {
        let (r, _) = compare_pair(&category::point(), &category::retract(), 3, DEFAULT_PASS_LIMIT).unwrap();
        assert_eq!(r.oracle_classes, 2);
        assert_eq!(r.method_classes, 1);
        assert!(!r.agree);
        assert!(!r.merged.is_empty());
    }
}

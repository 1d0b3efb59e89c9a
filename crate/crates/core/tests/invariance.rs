use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use thetacat::category::{self, FiniteCategory};
use thetacat::homcalc::{enumerate_maps, hom_classes};
use thetacat::lifting::DEFAULT_PASS_LIMIT;
use thetacat::precat::nerve;
use thetacat::random::random_relabel;
use thetacat::resolution::{ResolveConfig, Resolution};
use thetacat::support::{BoundaryMode, Support};

fn classes(a: &FiniteCategory, b: &FiniteCategory, seed: Option<u64>) -> (usize, usize) {
    let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
    let (x, mut y) = (nerve(&s, a).unwrap(), nerve(&s, b).unwrap());
    if let Some(seed) = seed {
        y = random_relabel(&mut ChaCha8Rng::seed_from_u64(seed), &y);
    }
    let res = Resolution::build(&x, &ResolveConfig { pass_limit: DEFAULT_PASS_LIMIT, level2: false }).unwrap();
    let h = hom_classes(&res, &y).unwrap();
    (h.maps.len(), h.class_count())
}

#[test]
fn class_counts_ignore_element_order() {
    let pairs = [("arrow", "arrow"), ("iso", "arrow"), ("point", "retract"), ("arrow", "composable-pair")];
    for (a, b) in pairs {
        let (ca, cb) = (category::builtin(a).unwrap(), category::builtin(b).unwrap());
        let plain = classes(&ca, &cb, None);
        for seed in 0..3 {
            assert_eq!(classes(&ca, &cb, Some(seed)), plain, "({a},{b}) seed {seed}");
        }
    }
}

#[test]
fn relabelled_sources_resolve_alike() {
    let s = Support::shared(1, 3, BoundaryMode::Free).unwrap();
    let x = nerve(&s, &category::composable_pair()).unwrap();
    let y = random_relabel(&mut ChaCha8Rng::seed_from_u64(5), &x);
    let config = ResolveConfig::default();
    let (r, q) = (Resolution::build(&x, &config).unwrap(), Resolution::build(&y, &config).unwrap());
    assert_eq!(r.f0.complex().census(), q.f0.complex().census());
    assert_eq!(r.f1.complex().census(), q.f1.complex().census());
    let b = nerve(&s, &category::arrow()).unwrap();
    assert_eq!(
        enumerate_maps(r.f0.complex(), &b).unwrap().len(),
        enumerate_maps(q.f0.complex(), &b).unwrap().len()
    );
}
